#ifndef COUPLED_COUPLINGS_HPP
#define COUPLED_COUPLINGS_HPP

#include <Eigen/Cholesky>
#include <cmath>
#include <cstdint>
#include <utility>

#include "coupled/errors.hpp"
#include "coupled/rng.hpp"
#include "coupled/types.hpp"

namespace coupled {

/// Mixture-based maximal coupling of two evaluable densities: accept y = x
/// when u p(x) <= q(x), otherwise rejection-loop y from q until u' q(y) >
/// p(y). P(x == y) equals the overlap integral min(p, q).
///
/// All ratio tests run in log space. `steps` is 1 plus the number of
/// rejection-loop iterations.
inline CoupledDraw maximal_coupling_generic(const Density& p, const Density& q,
                                            RngStream& rng,
                                            std::int64_t max_iter = 1000000) {
  CoupledDraw out;
  out.x = p.sample(rng);
  out.steps = 1;
  double log_u = std::log(rng.uniform());
  if (log_u + p.log_pdf(out.x) <= q.log_pdf(out.x)) {
    out.y = out.x;
    out.met = true;
    return out;
  }
  for (std::int64_t it = 0; it < max_iter; ++it) {
    ++out.steps;
    Vector z = q.sample(rng);
    double log_v = std::log(rng.uniform());
    if (log_v + q.log_pdf(z) > p.log_pdf(z)) {
      out.y = std::move(z);
      out.met = false;
      return out;
    }
  }
  throw MaxIterExceeded(
      "maximal_coupling_generic: residual rejection loop exceeded cap; "
      "marginals are likely near-identical");
}

namespace detail {

/// Reflection-maximal coupling of N(a, S) and N(b, S) with the Cholesky
/// factor and reflection direction precomputed. Consumes exactly one
/// standard-normal vector and one uniform per call.
struct ReflectionCoupler {
  Vector a;
  Vector b;
  Matrix chol;   // lower Cholesky factor of the shared covariance
  Vector z;      // chol^{-1} (a - b)
  Vector e;      // z / |z|, zero vector when a == b
  double z_norm = 0.0;

  ReflectionCoupler(Vector mean_a, Vector mean_b, const Matrix& sigma)
      : a(std::move(mean_a)), b(std::move(mean_b)) {
    Eigen::LLT<Matrix> llt(sigma);
    if (llt.info() != Eigen::Success) {
      throw NotPositiveDefinite(
          "reflection_maximal_gaussian: covariance is not SPD");
    }
    chol = llt.matrixL();
    z = chol.triangularView<Eigen::Lower>().solve(a - b);
    z_norm = z.norm();
    e = z_norm > 0.0 ? Vector(z / z_norm) : Vector(Vector::Zero(z.size()));
  }

  ProposalDraw operator()(RngStream& rng) const {
    Vector xdot = standard_normal_vector(rng, a.size());
    double log_u = std::log(rng.uniform());
    ProposalDraw out;
    out.x = a + chol * xdot;
    // log N(xdot + z; 0, I) - log N(xdot; 0, I) = -z.(xdot + z/2)
    if (z_norm == 0.0 || log_u < -z.dot(xdot) - 0.5 * z_norm * z_norm) {
      out.y = out.x;
      out.met = true;
    } else {
      Vector ydot = xdot - 2.0 * e.dot(xdot) * e;
      out.y = b + chol * ydot;
      out.met = false;
    }
    return out;
  }
};

}  // namespace detail

/// Reflection-maximal coupling of N(a, sigma) and N(b, sigma): a shared
/// standard-normal draw is either translated (meeting branch) or Householder-
/// reflected across the mean gap. Meets with probability
/// 2 F(-|sigma^{-1/2}(a - b)| / 2).
inline CoupledDraw reflection_maximal_gaussian(const Vector& a, const Vector& b,
                                               const Matrix& sigma,
                                               RngStream& rng) {
  detail::ReflectionCoupler coupler(a, b, sigma);
  ProposalDraw d = coupler(rng);
  return CoupledDraw{std::move(d.x), std::move(d.y), d.met, 1};
}

struct IndexPair {
  std::size_t i = 0;
  std::size_t j = 0;
  bool met = false;
};

/// Maximal coupling of Cat(wx) and Cat(wy): P(i == j) attains
/// sum_k min(wx_k, wy_k) of the normalized weights. The residual components
/// have disjoint support, so i != j whenever the overlap branch is not taken.
inline IndexPair categorical_maximal_coupling(const CategoricalWeights& wx,
                                              const CategoricalWeights& wy,
                                              RngStream& rng) {
  if (wx.size() != wy.size()) {
    throw LengthMismatch("categorical_maximal_coupling: size mismatch");
  }
  const std::size_t n = wx.size();
  double overlap = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    overlap += std::min(wx.normalized[k], wy.normalized[k]);
  }

  auto pick = [n](double target, auto&& mass) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      acc += mass(k);
      if (target <= acc) return k;
    }
    return n - 1;
  };

  double u = rng.uniform();
  IndexPair out;
  if (u <= overlap) {
    out.i = out.j = pick(u, [&](std::size_t k) {
      return std::min(wx.normalized[k], wy.normalized[k]);
    });
    out.met = true;
    return out;
  }
  double residual = 1.0 - overlap;
  out.i = pick(rng.uniform() * residual, [&](std::size_t k) {
    return wx.normalized[k] - std::min(wx.normalized[k], wy.normalized[k]);
  });
  out.j = pick(rng.uniform() * residual, [&](std::size_t k) {
    return wy.normalized[k] - std::min(wx.normalized[k], wy.normalized[k]);
  });
  out.met = out.i == out.j;
  return out;
}

/// Sub-maximal coupling with tunable diagonal mass: P(x == y) =
/// c * min-overlap of (p, q). Trading away the 1 - c share of the overlap is
/// what keeps the run-time variance finite as p and q approach each other.
/// `steps` counts q-draws in the residual loop (1 on the meeting branch).
inline CoupledDraw thorisson_modified(const Density& p, const Density& q,
                                      double c, RngStream& rng,
                                      std::int64_t max_iter = 1000000) {
  if (!(c > 0.0 && c <= 1.0)) {
    throw DomainError("thorisson_modified: c must lie in (0, 1]");
  }
  CoupledDraw out;
  out.x = p.sample(rng);
  out.steps = 1;
  double log_c = std::log(c);
  double log_u = std::log(rng.uniform());
  if (log_u < log_c + std::min(0.0, q.log_pdf(out.x) - p.log_pdf(out.x))) {
    out.y = out.x;
    out.met = true;
    return out;
  }
  out.steps = 0;
  for (std::int64_t it = 0; it < max_iter; ++it) {
    ++out.steps;
    double log_v = std::log(rng.uniform());
    Vector z = q.sample(rng);
    if (log_v > log_c + std::min(0.0, p.log_pdf(z) - q.log_pdf(z))) {
      out.y = std::move(z);
      out.met = false;
      return out;
    }
  }
  throw MaxIterExceeded(
      "thorisson_modified: residual loop exceeded cap; c is too close to 1 "
      "for near-identical marginals");
}

}  // namespace coupled

#endif  // COUPLED_COUPLINGS_HPP
