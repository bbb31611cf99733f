#ifndef COUPLED_TAILS_HPP
#define COUPLED_TAILS_HPP

#include <cmath>
#include <memory>
#include <utility>

#include "coupled/errors.hpp"
#include "coupled/math.hpp"
#include "coupled/rejection.hpp"
#include "coupled/rng.hpp"
#include "coupled/types.hpp"

namespace coupled {

/// Rate of the translated-exponential proposal Exp(z, rate) that maximizes
/// the acceptance probability when targeting the normal tail beyond z.
inline double optimal_rate(double z) {
  return 0.5 * (z + std::sqrt(z * z + 4.0));
}

/// Acceptance ratio p(x) / (M p_hat(x)) of the tail rejection sampler with
/// the optimal-rate proposal: exp(-(x - rate)^2 / 2), maximal at x = rate.
inline double tail_acceptance_ratio(double x, double m) {
  if (x < m) {
    throw DomainError("tail_acceptance_ratio: x below the truncation point");
  }
  double t = x - optimal_rate(m);
  return std::exp(-0.5 * t * t);
}

/// Translated exponential Exp(x; shift, rate) = rate e^{-rate (x - shift)}
/// on [shift, inf).
struct TranslatedExponential {
  double shift = 0.0;
  double rate = 1.0;

  static TranslatedExponential optimal(double shift) {
    return {shift, optimal_rate(shift)};
  }

  double log_pdf(double x) const {
    if (x < shift) return -std::numeric_limits<double>::infinity();
    return std::log(rate) - rate * (x - shift);
  }

  double sample(RngStream& rng) const {
    return shift - std::log(rng.uniform()) / rate;
  }

  Density density() const {
    TranslatedExponential self = *this;
    Density d;
    d.dim = 1;
    d.log_pdf = [self](const Vector& x) { return self.log_pdf(x[0]); };
    d.sample = [self](RngStream& rng) { return point1(self.sample(rng)); };
    return d;
  }
};

/// Closed-form masses of the maximal coupling of the two optimal
/// translated-exponential proposals for truncation points mu < eta.
///
/// gamma_cross is where the proposal densities cross; the overlap density is
/// the mu-proposal on [eta, gamma_cross] (mass zc1) and the eta-proposal
/// beyond (mass zc2). zp and zq are the residual masses of each proposal;
/// they are equal analytically and both equal 1 - zc. zp1 is evaluated via
/// the crossing identity e^{-am (gamma - mu)} = (ae/am) e^{-ae (gamma - eta)}
/// rather than by direct subtraction, which cancels catastrophically as
/// eta -> mu.
struct TailCouplingTables {
  double mu = 0.0;
  double eta = 0.0;
  double rate_mu = 0.0;    // alpha(mu)
  double rate_eta = 0.0;   // alpha(eta)
  double gamma_cross = 0.0;
  double zc = 0.0, zc1 = 0.0, zc2 = 0.0;
  double zp = 0.0, zp1 = 0.0, zp2 = 0.0;
  double zq = 0.0;
  double zp_zq_gap = 0.0;  // zq - zp, computed from the two defining integrals

  /// Inverse CDF of the overlap branch on [eta, gamma_cross].
  double c1_inverse(double u) const {
    double top = std::exp(-rate_mu * (eta - mu));
    return mu - std::log(top - u * zc1) / rate_mu;
  }

  /// Inverse CDF of the overlap branch on [gamma_cross, inf).
  double c2_inverse(double u) const {
    return gamma_cross - std::log1p(-u) / rate_eta;
  }

  /// Inverse CDF of the p-residual branch on [mu, eta].
  double p_residual2_inverse(double u) const {
    return mu - std::log1p(-u * zp2) / rate_mu;
  }

  /// Inverse CDF of the full overlap density c at mass fraction u in (0, 1).
  double overlap_inverse(double u) const {
    double mass = u * zc;
    if (mass <= zc1) {
      double top = std::exp(-rate_mu * (eta - mu));
      return mu - std::log(top - mass) / rate_mu;
    }
    return c2_inverse((mass - zc1) / zc2);
  }

  /// Inverse CDF of the p residual (proposal minus overlap) at u in (0, 1).
  /// The [mu, eta] piece is closed-form; the tail piece beyond gamma_cross
  /// needs a bracketing root solve of its survival function.
  double p_residual_inverse(double u) const {
    double mass = u * zp;
    if (mass <= zp2) {
      return mu - std::log1p(-mass) / rate_mu;
    }
    double target = zp * (1.0 - u);  // survival mass past the root
    auto survival = [&](double x) {
      return std::exp(-rate_mu * (x - mu)) - std::exp(-rate_eta * (x - eta)) -
             target;
    };
    double lo = gamma_cross;
    double f_lo = survival(lo);
    if (f_lo <= 0.0) return lo;
    double width = 50.0 / rate_mu;
    double hi = lo + width;
    double f_hi = survival(hi);
    for (int k = 0; k < 8 && f_hi > 0.0; ++k) {
      hi += width;
      f_hi = survival(hi);
    }
    return chandrupatla_root(survival,
                             RootBracket{lo, hi, f_lo, f_hi, 1e-13, 0.0, 100});
  }

  /// Inverse CDF of the q residual, supported on [eta, gamma_cross].
  double q_residual_inverse(double u) const {
    double e_gap = std::exp(-rate_mu * (eta - mu));
    auto cdf_gap = [&](double x) {
      return -std::expm1(-rate_eta * (x - eta)) +
             e_gap * std::expm1(-rate_mu * (x - eta)) - zq * u;
    };
    double f_lo = -zq * u;
    double f_hi = zq * (1.0 - u);
    return chandrupatla_root(
        cdf_gap,
        RootBracket{eta, gamma_cross, f_lo, f_hi, 1e-13, 0.0, 100});
  }
};

inline TailCouplingTables build_tail_tables(double mu, double eta) {
  if (!(eta > mu)) {
    throw DegenerateGap("build_tail_tables: requires eta > mu");
  }
  TailCouplingTables t;
  t.mu = mu;
  t.eta = eta;
  t.rate_mu = optimal_rate(mu);
  t.rate_eta = optimal_rate(eta);
  const double am = t.rate_mu;
  const double ae = t.rate_eta;
  t.gamma_cross =
      (std::log(ae) - std::log(am) + ae * eta - am * mu) / (ae - am);

  double gap = eta - mu;
  double past = t.gamma_cross - eta;
  t.zc1 = std::exp(-am * gap) * (-std::expm1(-am * past));
  t.zc2 = std::exp(-ae * past);
  t.zc = t.zc1 + t.zc2;
  t.zp1 = t.zc2 * (ae - am) / am;
  t.zp2 = -std::expm1(-am * gap);
  t.zp = t.zp1 + t.zp2;
  t.zq = -std::expm1(-ae * past) - t.zc1;
  t.zp_zq_gap = t.zq - t.zp;
  return t;
}

/// Maximal coupling of Exp(mu, alpha(mu)) and Exp(eta, alpha(eta)) by exact
/// mixture decomposition: with probability zc both margins return the same
/// draw from the overlap density; otherwise each margin samples its residual.
inline ProposalDraw sample_max_coupled_exponentials(
    const TailCouplingTables& t, RngStream& rng) {
  ProposalDraw out;
  double u = rng.uniform();
  if (u <= t.zc) {
    out.x = point1(t.overlap_inverse(u / t.zc));
    out.y = out.x;
    out.met = true;
    return out;
  }
  double s = (u - t.zc) / (1.0 - t.zc);
  out.x = point1(t.p_residual_inverse(s));
  out.y = point1(t.q_residual_inverse(rng.uniform()));
  out.met = false;
  return out;
}

/// Standard normal conditioned on exceeding `shift`.
struct TruncatedNormalTail {
  double shift = 0.0;
  double log_mass = 0.0;  // log P(N(0,1) > shift)

  explicit TruncatedNormalTail(double s)
      : shift(s), log_mass(log_std_normal_cdf(-s)) {}

  double log_pdf(double x) const {
    if (x < shift) return -std::numeric_limits<double>::infinity();
    return -0.5 * x * x - 0.5 * std::log(2.0 * M_PI) - log_mass;
  }

  /// Tail rejection sampler with the optimal translated-exponential proposal.
  /// `rounds` (when given) accumulates the number of proposals consumed.
  double sample(RngStream& rng, std::int64_t* rounds = nullptr,
                std::int64_t max_iter = 1000000) const {
    double a = optimal_rate(shift);
    for (std::int64_t it = 0; it < max_iter; ++it) {
      if (rounds != nullptr) ++*rounds;
      double x = shift - std::log(rng.uniform()) / a;
      double d = x - a;
      if (std::log(rng.uniform()) < -0.5 * d * d) return x;
    }
    throw MaxIterExceeded("TruncatedNormalTail::sample: cap exceeded");
  }

  /// Bound M(target, optimal exponential proposal); the acceptance ratio
  /// under the bound is exactly exp(-(x - alpha(shift))^2 / 2).
  double m_constant() const {
    double a = optimal_rate(shift);
    double log_m = 0.5 * a * a - a * shift - 0.5 * std::log(2.0 * M_PI) -
                   std::log(a) - log_mass;
    return std::exp(log_m);
  }

  Density density() const {
    TruncatedNormalTail self = *this;
    Density d;
    d.dim = 1;
    d.log_pdf = [self](const Vector& x) { return self.log_pdf(x[0]); };
    d.sample = [self](RngStream& rng) { return point1(self.sample(rng)); };
    return d;
  }
};

/// Dominating pair for the pair of Gaussian tails beyond mu and eta > mu:
/// translated-exponential marginals coupled maximally through the closed-form
/// tables.
inline DominatingPair tail_dominating_pair(double mu, double eta) {
  auto tables = std::make_shared<TailCouplingTables>(build_tail_tables(mu, eta));
  DominatingPair dom;
  dom.p_hat = TranslatedExponential::optimal(mu).density();
  dom.q_hat = TranslatedExponential::optimal(eta).density();
  dom.m_p = TruncatedNormalTail(mu).m_constant();
  dom.m_q = TruncatedNormalTail(eta).m_constant();
  dom.sample_coupled = [tables](RngStream& rng) {
    return sample_max_coupled_exponentials(*tables, rng);
  };
  return dom;
}

/// Coupled sampler for the Gaussian tails beyond mu and eta. Orders the
/// truncation points internally (the tables require eta > mu) and swaps the
/// output pair back. Equal truncation points take a duplicated-proposal
/// path, since the tables divide by alpha(eta) - alpha(mu).
///
/// `steps` on the returned draw counts every proposal round the call
/// consumed: the coupled-proposal rounds of the engine plus the rounds of
/// any marginal fallback rejection sampler. This is the sampler's run-time
/// cost per draw, which stays stable as eta approaches mu.
inline CoupledDraw coupled_tail_sampler(double mu, double eta, int n,
                                        RngStream& rng,
                                        const EngineOptions& opts = {}) {
  if (mu < 0.0 || eta < 0.0) {
    throw DomainError("coupled_tail_sampler: truncation points must be >= 0");
  }
  const bool swapped = mu > eta;
  const double lo = swapped ? eta : mu;
  const double hi = swapped ? mu : eta;

  TruncatedNormalTail target_lo(lo);
  TruncatedNormalTail target_hi(hi);
  auto fallback_rounds = std::make_shared<std::int64_t>(0);
  auto counted_density = [&fallback_rounds](const TruncatedNormalTail& t) {
    Density d;
    d.dim = 1;
    d.log_pdf = [t](const Vector& x) { return t.log_pdf(x[0]); };
    std::shared_ptr<std::int64_t> rounds = fallback_rounds;
    d.sample = [t, rounds](RngStream& r) {
      return point1(t.sample(r, rounds.get()));
    };
    return d;
  };
  Density p = counted_density(target_lo);
  Density q = counted_density(target_hi);

  DominatingPair dom;
  if (lo == hi) {
    dom = duplicated_dominating_pair(
        TranslatedExponential::optimal(lo).density(), target_lo.m_constant(),
        target_hi.m_constant());
  } else {
    dom = tail_dominating_pair(lo, hi);
  }

  CoupledDraw d = n == 1 ? rejection_couple(dom, p, q, rng, opts)
                         : ensemble_rejection_couple(dom, p, q, n, rng, opts);
  d.steps += *fallback_rounds;
  if (swapped) std::swap(d.x, d.y);
  return d;
}

/// Overlap of the two tail densities by adaptive quadrature, for reporting
/// alongside empirical met rates. Not used by the samplers.
inline double tail_overlap_numeric(double mu, double eta) {
  double lo = std::min(mu, eta);
  double hi = std::max(mu, eta);
  TruncatedNormalTail p(lo), q(hi);
  auto integrand = [&](double x) {
    return std::exp(std::min(p.log_pdf(x), q.log_pdf(x)));
  };
  double cutoff = hi + 50.0 / optimal_rate(hi);
  return adaptive_simpson(integrand, hi, cutoff, 1e-12);
}

}  // namespace coupled

#endif  // COUPLED_TAILS_HPP
