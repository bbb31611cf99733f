#ifndef COUPLED_MATH_HPP
#define COUPLED_MATH_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "coupled/errors.hpp"

namespace coupled {

/// Standard normal CDF. Evaluated through the complementary error function so
/// the far tails keep full relative accuracy instead of rounding to 0 or 1.
inline double std_normal_cdf(double x) {
  return 0.5 * std::erfc(-x * M_SQRT1_2);
}

/// log of the standard normal CDF; usable down to x ~ -37 before erfc
/// underflows.
inline double log_std_normal_cdf(double x) {
  return std::log(0.5) + std::log(std::erfc(-x * M_SQRT1_2));
}

/// Standard normal quantile. Acklam's rational initial guess polished with
/// one Halley step against erfc, which brings the result to within a few ulps.
inline double std_normal_quantile(double p) {
  constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                           -2.759285104469687e+02, 1.383577518672690e+02,
                           -3.066479806614716e+01, 2.506628277459239e+00};
  constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                           -1.556989798598866e+02, 6.680131188771972e+01,
                           -1.328068155288572e+01};
  constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                           -2.400758277161838e+00, -2.549732539343734e+00,
                           4.374664141464968e+00,  2.938163982698783e+00};
  constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                           2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    throw DomainError("std_normal_quantile: p outside [0, 1]");
  }

  double x;
  if (p < p_low) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    double q = p - 0.5;
    double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // Halley refinement: e = F(x) - p, with F evaluated to full precision.
  double e = 0.5 * std::erfc(-x * M_SQRT1_2) - p;
  double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

/// A sign-changing interval handed to the root finder, together with the
/// termination tolerances.
struct RootBracket {
  double lo = 0.0;
  double hi = 0.0;
  double f_lo = 0.0;
  double f_hi = 0.0;
  double tol_x = 1e-12;
  double tol_f = 1e-12;
  int max_iter = 100;
};

/// Evaluates the endpoints and packages a bracket.
template <typename F>
RootBracket make_bracket(F&& f, double lo, double hi, double tol_x = 1e-12,
                         double tol_f = 1e-12, int max_iter = 100) {
  return RootBracket{lo, hi, f(lo), f(hi), tol_x, tol_f, max_iter};
}

/// Chandrupatla's bracketing root finder (1997): keeps a guaranteed bracket
/// and switches between bisection and inverse quadratic interpolation based
/// on how well-conditioned the three retained points are. Never evaluates f
/// outside [bracket.lo, bracket.hi].
template <typename F>
double chandrupatla_root(F&& f, const RootBracket& bracket) {
  double b = bracket.lo;
  double fb = bracket.f_lo;
  double a = bracket.hi;
  double fa = bracket.f_hi;

  if (fb == 0.0) return b;
  if (fa == 0.0) return a;
  if ((fa > 0.0) == (fb > 0.0)) {
    throw NoSignChange("chandrupatla_root: f has the same sign at both ends");
  }

  double c = b;
  double fc = fb;
  double t = 0.5;

  for (int iter = 0; iter < bracket.max_iter; ++iter) {
    double xt = a + t * (b - a);
    double ft = f(xt);
    if (ft == 0.0) return xt;

    if ((ft > 0.0) == (fa > 0.0)) {
      c = a;
      fc = fa;
    } else {
      c = b;
      fc = fb;
      b = a;
      fb = fa;
    }
    a = xt;
    fa = ft;

    double xm = std::fabs(fa) < std::fabs(fb) ? a : b;
    double fm = std::fabs(fa) < std::fabs(fb) ? fa : fb;
    if (std::fabs(fm) <= bracket.tol_f) return xm;

    double tol = 2.0 * std::numeric_limits<double>::epsilon() * std::fabs(xm) +
                 0.5 * bracket.tol_x;
    double tlim = tol / std::fabs(b - a);
    if (tlim > 0.5) return xm;

    double xi = (a - b) / (c - b);
    double phi = (fa - fb) / (fc - fb);
    if (phi * phi < xi && (1.0 - phi) * (1.0 - phi) < 1.0 - xi) {
      t = fa / (fb - fa) * fc / (fb - fc) +
          (c - a) / (b - a) * fa / (fc - fa) * fb / (fc - fb);
    } else {
      t = 0.5;
    }
    t = std::min(std::max(t, tlim), 1.0 - tlim);
  }
  throw MaxIterExceeded("chandrupatla_root: no tolerance met within max_iter");
}

/// Order-fixed pairwise (tree) sum; reductions stay identical no matter how
/// the caller parallelizes the surrounding work.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

inline double pairwise_mean(std::span<const double> v) {
  return v.empty() ? 0.0 : pairwise_sum(v) / static_cast<double>(v.size());
}

namespace detail {

template <typename F>
double simpson_step(F& f, double a, double fa, double b, double fb, double m,
                    double fm, double whole, double tol, int depth) {
  double lm = 0.5 * (a + m);
  double rm = 0.5 * (m + b);
  double flm = f(lm);
  double frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature on [a, b].
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol = 1e-12,
                        int max_depth = 40) {
  double m = 0.5 * (a + b);
  double fa = f(a);
  double fb = f(b);
  double fm = f(m);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

}  // namespace coupled

#endif  // COUPLED_MATH_HPP
