// Independent numerical oracles used to freeze expected values. These
// deliberately avoid every code path of the library under test: erf comes
// from a Maclaurin series / Lentz continued fraction in long double, and the
// quadrature is Romberg instead of adaptive Simpson.
#ifndef COUPLED_TESTS_ORACLES_HPP
#define COUPLED_TESTS_ORACLES_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace test_oracles {

// Maclaurin series for erf, accurate to ~1e-18 for |x| <= 3.
inline long double erf_series(long double x) {
  const long double two_over_sqrt_pi = 1.128379167095512573896158903121545172L;
  long double term = x;
  long double sum = x;
  long double x2 = x * x;
  for (int n = 1; n < 200; ++n) {
    term *= -x2 / static_cast<long double>(n);
    long double contrib = term / static_cast<long double>(2 * n + 1);
    sum += contrib;
    if (std::fabs(static_cast<double>(contrib)) <
        1e-22 * std::fabs(static_cast<double>(sum))) {
      break;
    }
  }
  return two_over_sqrt_pi * sum;
}

// Standard normal CDF oracle. Series in the bulk; for tails, symmetry plus
// the series keeps everything within the series' radius of accuracy because
// the tests only query |x| <= 3 through this oracle.
inline double normal_cdf_oracle(double x) {
  long double z = static_cast<long double>(x) *
                  0.707106781186547524400844362104849039L;  // x / sqrt(2)
  if (std::fabs(x) > 3.0) {
    throw std::invalid_argument("normal_cdf_oracle: use tail oracle");
  }
  return static_cast<double>(0.5L * (1.0L + erf_series(z)));
}

// Asymptotic-free tail oracle: upper tail P(Z > x) for x > 0 via the
// continued fraction erfc(t) = exp(-t^2)/(t sqrt(pi)) * 1/(1 + u/(1 + 2u/(1 +
// 3u/(1 + ...)))) with u = 1/(2 t^2), evaluated bottom-up.
inline double normal_upper_tail_oracle(double x) {
  if (x < 3.0) return 1.0 - normal_cdf_oracle(x);
  long double t = static_cast<long double>(x) *
                  0.707106781186547524400844362104849039L;
  long double u = 0.5L / (t * t);
  long double cf = 1.0L;
  for (int k = 60; k >= 1; --k) {
    cf = 1.0L + static_cast<long double>(k) * u / cf;
  }
  const long double sqrt_pi = 1.772453850905516027298167483341145183L;
  long double erfc_val = std::exp(-t * t) / (t * sqrt_pi) / cf;
  return static_cast<double>(0.5L * erfc_val);
}

// Romberg quadrature.
inline double romberg(const std::function<double(double)>& f, double a,
                      double b, int max_level = 22, double tol = 1e-12) {
  std::vector<std::vector<double>> r(1);
  double h = b - a;
  r[0].push_back(0.5 * h * (f(a) + f(b)));
  for (int i = 1; i < max_level; ++i) {
    h *= 0.5;
    double sum = 0.0;
    std::int64_t points = 1LL << (i - 1);
    for (std::int64_t k = 0; k < points; ++k) {
      sum += f(a + (2.0 * static_cast<double>(k) + 1.0) * h);
    }
    r.emplace_back();
    r[i].push_back(0.5 * r[i - 1][0] + h * sum);
    double pow4 = 1.0;
    for (int j = 1; j <= i; ++j) {
      pow4 *= 4.0;
      r[i].push_back(r[i][j - 1] +
                     (r[i][j - 1] - r[i - 1][j - 1]) / (pow4 - 1.0));
    }
    if (i > 3 && std::fabs(r[i][i] - r[i - 1][i - 1]) < tol) return r[i][i];
  }
  return r.back().back();
}

// Dense tabulation of a monotone increasing function on [lo, hi], inverted by
// linear interpolation.
class TabulatedInverse {
 public:
  TabulatedInverse(const std::function<double(double)>& f, double lo,
                   double hi, std::size_t points)
      : lo_(lo), hi_(hi) {
    xs_.reserve(points);
    ys_.reserve(points);
    for (std::size_t i = 0; i < points; ++i) {
      double x = lo + (hi - lo) * static_cast<double>(i) /
                          static_cast<double>(points - 1);
      xs_.push_back(x);
      ys_.push_back(f(x));
    }
  }

  double operator()(double y) const {
    if (y <= ys_.front()) return xs_.front();
    if (y >= ys_.back()) return xs_.back();
    std::size_t lo = 0, hi = ys_.size() - 1;
    while (hi - lo > 1) {
      std::size_t mid = (lo + hi) / 2;
      (ys_[mid] <= y ? lo : hi) = mid;
    }
    double t = (y - ys_[lo]) / (ys_[hi] - ys_[lo]);
    return xs_[lo] + t * (xs_[hi] - xs_[lo]);
  }

 private:
  double lo_, hi_;
  std::vector<double> xs_, ys_;
};

}  // namespace test_oracles

#endif  // COUPLED_TESTS_ORACLES_HPP
