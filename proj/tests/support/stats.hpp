// Shared statistical test machinery: moments, Kolmogorov-Smirnov tests, and
// chi-square goodness of fit with a gamma-function p-value. Self-contained so
// the checks stay independent of the library under test.
#ifndef COUPLED_TESTS_STATS_HPP
#define COUPLED_TESTS_STATS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace test_stats {

inline double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) /
         static_cast<double>(v.size());
}

inline double variance(const std::vector<double>& v) {
  double m = mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return acc / static_cast<double>(v.size() - 1);
}

inline double sd(const std::vector<double>& v) { return std::sqrt(variance(v)); }

inline double standard_error(const std::vector<double>& v) {
  return sd(v) / std::sqrt(static_cast<double>(v.size()));
}

// Monte Carlo standard error of a proportion.
inline double proportion_se(double p, std::int64_t n) {
  return std::sqrt(std::max(p * (1.0 - p), 1e-12) / static_cast<double>(n));
}

inline double correlation(const std::vector<double>& a,
                          const std::vector<double>& b) {
  double ma = mean(a), mb = mean(b);
  double num = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - ma) * (b[i] - mb);
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
  }
  return num / std::sqrt(va * vb);
}

// --- Kolmogorov-Smirnov -----------------------------------------------------

inline double ks_statistic(std::vector<double> samples,
                           const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double f = cdf(samples[i]);
    d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

// One-sample KS test at significance 0.01 (asymptotic critical value).
inline bool ks_test(const std::vector<double>& samples,
                    const std::function<double(double)>& cdf) {
  double d = ks_statistic(samples, cdf);
  double crit = 1.6276 / std::sqrt(static_cast<double>(samples.size()));
  return d < crit;
}

inline bool ks_two_sample_test(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) {
      ++i;
    } else {
      ++j;
    }
    double fa = static_cast<double>(i) / static_cast<double>(a.size());
    double fb = static_cast<double>(j) / static_cast<double>(b.size());
    d = std::max(d, std::fabs(fa - fb));
  }
  double na = static_cast<double>(a.size());
  double nb = static_cast<double>(b.size());
  double crit = 1.6276 * std::sqrt((na + nb) / (na * nb));
  return d < crit;
}

// --- Regularized incomplete gamma (for chi-square p-values) -----------------

inline double gamma_p(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_p domain");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 500; ++n) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  // Continued fraction for Q, modified Lentz.
  const double fpmin = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / fpmin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  double q = std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
  return 1.0 - q;
}

inline double chi_square_pvalue(double chi2, double dof) {
  return 1.0 - gamma_p(0.5 * dof, 0.5 * chi2);
}

// Pearson chi-square GOF with small expected-count bins merged together.
// Returns the p-value.
inline double chi_square_gof(const std::vector<std::int64_t>& counts,
                             const std::vector<double>& probs,
                             double total) {
  struct Bin {
    double observed = 0.0;
    double expected = 0.0;
  };
  std::vector<Bin> bins;
  Bin small;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    double e = probs[k] * total;
    if (e < 5.0) {
      small.observed += static_cast<double>(counts[k]);
      small.expected += e;
    } else {
      bins.push_back({static_cast<double>(counts[k]), e});
    }
  }
  if (small.expected > 0.0) bins.push_back(small);
  if (bins.size() < 2) return 1.0;
  double chi2 = 0.0;
  for (const Bin& b : bins) {
    double diff = b.observed - b.expected;
    chi2 += diff * diff / b.expected;
  }
  return chi_square_pvalue(chi2, static_cast<double>(bins.size() - 1));
}

}  // namespace test_stats

#endif  // COUPLED_TESTS_STATS_HPP
