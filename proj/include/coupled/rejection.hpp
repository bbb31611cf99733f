#ifndef COUPLED_REJECTION_HPP
#define COUPLED_REJECTION_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "coupled/couplings.hpp"
#include "coupled/errors.hpp"
#include "coupled/math.hpp"
#include "coupled/rng.hpp"
#include "coupled/types.hpp"

namespace coupled {

/// Proposal marginals (p_hat, q_hat) with ratio bounds p <= m_p * p_hat and
/// q <= m_q * q_hat, plus a sampler for a coupling of the pair. Any diagonal
/// coupling of dominating marginals can be plugged into the engines below.
struct DominatingPair {
  Density p_hat;
  Density q_hat;
  double m_p = 1.0;
  double m_q = 1.0;
  std::function<ProposalDraw(RngStream&)> sample_coupled;
};

struct EngineOptions {
  std::int64_t max_iter = 1000000;
  double domination_slack = 1e-9;  // relative tolerance on observed ratios
};

/// Dominating pair that proposes the same draw for both margins, so the
/// proposal coupling meets with probability one.
inline DominatingPair duplicated_dominating_pair(const Density& gamma,
                                                 double m_p, double m_q) {
  DominatingPair dom;
  dom.p_hat = gamma;
  dom.q_hat = gamma;
  dom.m_p = m_p;
  dom.m_q = m_q;
  dom.sample_coupled = [gamma](RngStream& rng) {
    ProposalDraw d;
    d.x = gamma.sample(rng);
    d.y = d.x;
    d.met = true;
    return d;
  };
  return dom;
}

namespace detail {

// log(p(x) / (m p_hat(x))), with a hard error when the observed ratio
// exceeds its stated bound.
inline double log_accept_ratio(const Density& target, const Density& proposal,
                               double m, const Vector& x, double slack,
                               const char* label) {
  double lr = target.log_pdf(x) - proposal.log_pdf(x);
  double log_m = std::log(m);
  if (lr > log_m + std::log1p(slack)) {
    throw DominationViolated(std::string("observed density ratio exceeds its "
                                         "bound for margin ") +
                             label);
  }
  return lr - log_m;
}

inline std::size_t sample_categorical(const std::vector<double>& w,
                                      double total, RngStream& rng) {
  double target = rng.uniform() * total;
  double acc = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    acc += w[k];
    if (target <= acc) return k;
  }
  return w.size() - 1;
}

struct EnsembleStep {
  std::size_t i = 0;
  std::size_t j = 0;
  bool accept_x = false;
  bool accept_y = false;
  bool index_met = false;
};

// One accept/reject round of the ensemble engine given the importance
// weights of the current proposal batch. The index pair comes from a maximal
// coupling of the two weight categoricals and a single shared uniform gates
// both acceptance tests.
inline EnsembleStep ensemble_accept_step(const std::vector<double>& wx,
                                         const std::vector<double>& wy,
                                         double m_p, double m_q,
                                         RngStream& rng) {
  const auto n = static_cast<double>(wx.size());
  double z_hat_x = pairwise_mean(wx);
  double z_hat_y = pairwise_mean(wy);

  EnsembleStep step;
  if (z_hat_x <= 0.0 && z_hat_y <= 0.0) return step;
  if (z_hat_x <= 0.0 || z_hat_y <= 0.0) {
    // One margin has no usable weight this round; the other proceeds alone.
    const auto& w = z_hat_x > 0.0 ? wx : wy;
    std::size_t k = sample_categorical(w, pairwise_sum(w), rng);
    double z_hat = z_hat_x > 0.0 ? z_hat_x : z_hat_y;
    double m = z_hat_x > 0.0 ? m_p : m_q;
    double z_bar = z_hat + (m - w[k]) / n;
    bool accept = rng.uniform() < z_hat / z_bar;
    step.i = step.j = k;
    (z_hat_x > 0.0 ? step.accept_x : step.accept_y) = accept;
    return step;
  }

  IndexPair idx = categorical_maximal_coupling(CategoricalWeights(wx),
                                               CategoricalWeights(wy), rng);
  double z_bar_x = z_hat_x + (m_p - wx[idx.i]) / n;
  double z_bar_y = z_hat_y + (m_q - wy[idx.j]) / n;
  double u = rng.uniform();
  step.i = idx.i;
  step.j = idx.j;
  step.index_met = idx.met;
  step.accept_x = u < z_hat_x / z_bar_x;
  step.accept_y = u < z_hat_y / z_bar_y;
  return step;
}

}  // namespace detail

/// Coupled rejection sampling: proposals come from the dominating coupling
/// and one shared uniform gates both marginal acceptance tests, so the loop
/// exits as soon as either margin accepts. The margin that did not accept
/// falls back to a fresh independent draw from its own target.
inline CoupledDraw rejection_couple(const DominatingPair& dom, const Density& p,
                                    const Density& q, RngStream& rng,
                                    const EngineOptions& opts = {}) {
  std::int64_t steps = 0;
  for (;;) {
    if (++steps > opts.max_iter) {
      throw MaxIterExceeded("rejection_couple: proposal loop exceeded cap");
    }
    ProposalDraw d = dom.sample_coupled(rng);
    double lrx = detail::log_accept_ratio(p, dom.p_hat, dom.m_p, d.x,
                                          opts.domination_slack, "x");
    double lry = detail::log_accept_ratio(q, dom.q_hat, dom.m_q, d.y,
                                          opts.domination_slack, "y");
    double log_u = std::log(rng.uniform());
    bool ax = log_u < lrx;
    bool ay = log_u < lry;
    if (!ax && !ay) continue;

    CoupledDraw out;
    out.steps = steps;
    if (ax && ay) {
      out.x = std::move(d.x);
      out.y = d.met ? out.x : std::move(d.y);
      out.met = d.met;
    } else if (ax) {
      out.x = std::move(d.x);
      out.y = q.sample(rng);
      out.met = false;
    } else {
      out.x = p.sample(rng);
      out.y = std::move(d.y);
      out.met = false;
    }
    return out;
  }
}

/// Ensemble variant: each round draws n coupled proposals, self-normalizes
/// the two importance weight vectors, picks the index pair from a maximal
/// coupling of the weight categoricals, and accepts each margin with the
/// shared-uniform ratio Z_hat / Z_bar. With n = 1 the output law coincides
/// with rejection_couple; as n grows the coupling probability approaches the
/// proposal-coupling success times the overlap of (p, q).
inline CoupledDraw ensemble_rejection_couple(const DominatingPair& dom,
                                             const Density& p, const Density& q,
                                             int n, RngStream& rng,
                                             const EngineOptions& opts = {}) {
  if (n < 1) throw DomainError("ensemble_rejection_couple: n must be >= 1");
  std::vector<Vector> xs(n), ys(n);
  std::vector<char> prop_met(n);
  std::vector<double> wx(n), wy(n);
  double log_mp = std::log(dom.m_p);
  double log_mq = std::log(dom.m_q);
  double bound_x = log_mp + std::log1p(opts.domination_slack);
  double bound_y = log_mq + std::log1p(opts.domination_slack);

  std::int64_t steps = 0;
  for (;;) {
    if (++steps > opts.max_iter) {
      throw MaxIterExceeded(
          "ensemble_rejection_couple: proposal loop exceeded cap");
    }
    for (int i = 0; i < n; ++i) {
      ProposalDraw d = dom.sample_coupled(rng);
      double lrx = p.log_pdf(d.x) - dom.p_hat.log_pdf(d.x);
      double lry = q.log_pdf(d.y) - dom.q_hat.log_pdf(d.y);
      if (lrx > bound_x || lry > bound_y) {
        throw DominationViolated(
            "ensemble_rejection_couple: observed ratio exceeds its bound");
      }
      wx[i] = std::exp(lrx);
      wy[i] = std::exp(lry);
      xs[i] = std::move(d.x);
      ys[i] = std::move(d.y);
      prop_met[i] = d.met ? 1 : 0;
    }
    detail::EnsembleStep step =
        detail::ensemble_accept_step(wx, wy, dom.m_p, dom.m_q, rng);
    if (!step.accept_x && !step.accept_y) continue;

    CoupledDraw out;
    out.steps = steps;
    if (step.accept_x && step.accept_y) {
      bool met = step.i == step.j && prop_met[step.i] != 0;
      out.x = std::move(xs[step.i]);
      out.y = met ? out.x : std::move(ys[step.j]);
      out.met = met;
    } else if (step.accept_x) {
      out.x = std::move(xs[step.i]);
      out.y = q.sample(rng);
      out.met = false;
    } else {
      out.x = p.sample(rng);
      out.y = std::move(ys[step.j]);
      out.met = false;
    }
    return out;
  }
}

/// Rule-of-thumb ensemble size for a target fraction alpha of the maximal
/// coupling probability, given the importance-weight spread u:
/// N = ceil(2 (u / (1/alpha - 1))^2), at least 1.
inline int ensemble_size_rule(double u, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidAlpha("ensemble_size_rule: alpha must lie in (0, 1)");
  }
  if (u < 0.0) throw DomainError("ensemble_size_rule: u must be >= 0");
  double raw = 2.0 * std::pow(u / (1.0 / alpha - 1.0), 2.0);
  double n = std::ceil(raw);
  return n < 1.0 ? 1 : static_cast<int>(n);
}

/// Monte-Carlo estimates of the quantities entering the asymptotic coupling
/// probability bounds, together with simulated met rate and step moments.
struct CouplingDiagnostics {
  std::int64_t n_draws = 0;
  double met_rate = 0.0;
  double tau_mean = 0.0;
  double tau_var = 0.0;
  double lower_bound_lN = 0.0;
  double upper_bound_uN = 0.0;
  double u_stat = 0.0;   // max importance-weight standard deviation
  double px_hat = 0.0;   // conditional acceptance probability, x margin
  double py_hat = 0.0;   // conditional acceptance probability, y margin
};

inline CouplingDiagnostics estimate_diagnostics(const DominatingPair& dom,
                                                const Density& p,
                                                const Density& q, int n,
                                                std::int64_t draws,
                                                RngStream& rng,
                                                const EngineOptions& opts = {}) {
  if (draws < 1000) {
    throw DomainError("estimate_diagnostics: draws must be >= 1000");
  }
  if (n < 3) {
    throw DomainError("estimate_diagnostics: n must be >= 3 (log log N)");
  }

  // Pass 1: proposal-coupling statistics.
  double sum_rx = 0.0, sum_rx2 = 0.0, sum_ry = 0.0, sum_ry2 = 0.0;
  double cond_rx = 0.0, cond_ry = 0.0;
  std::int64_t met_hat = 0;
  for (std::int64_t k = 0; k < draws; ++k) {
    ProposalDraw d = dom.sample_coupled(rng);
    double rx = std::exp(p.log_pdf(d.x) - dom.p_hat.log_pdf(d.x));
    double ry = std::exp(q.log_pdf(d.y) - dom.q_hat.log_pdf(d.y));
    sum_rx += rx;
    sum_rx2 += rx * rx;
    sum_ry += ry;
    sum_ry2 += ry * ry;
    if (d.met) {
      ++met_hat;
      cond_rx += rx / dom.m_p;
      cond_ry += ry / dom.m_q;
    }
  }
  if (met_hat == 0) {
    throw NoCoupledProposals(
        "estimate_diagnostics: dominating coupling never met");
  }
  auto sd = [draws](double s, double s2) {
    double var = (s2 - s * s / static_cast<double>(draws)) /
                 static_cast<double>(draws - 1);
    return std::sqrt(std::max(var, 0.0));
  };
  CouplingDiagnostics diag;
  diag.n_draws = draws;
  diag.u_stat = std::max(sd(sum_rx, sum_rx2), sd(sum_ry, sum_ry2));
  diag.px_hat = cond_rx / static_cast<double>(met_hat);
  diag.py_hat = cond_ry / static_cast<double>(met_hat);
  double p_meet_hat = static_cast<double>(met_hat) / static_cast<double>(draws);

  // Pass 2: overlap of the targets, estimated under p.
  double overlap = 0.0;
  for (std::int64_t k = 0; k < draws; ++k) {
    Vector x = p.sample(rng);
    overlap += std::min(1.0, std::exp(q.log_pdf(x) - p.log_pdf(x)));
  }
  overlap /= static_cast<double>(draws);
  double overlap_max = 2.0 - overlap;

  // Pass 3: engine simulation.
  double tau_sum = 0.0, tau_sum2 = 0.0;
  std::int64_t met = 0;
  for (std::int64_t k = 0; k < draws; ++k) {
    CoupledDraw d = ensemble_rejection_couple(dom, p, q, n, rng, opts);
    auto tau = static_cast<double>(d.steps);
    tau_sum += tau;
    tau_sum2 += tau * tau;
    if (d.met) ++met;
  }
  diag.met_rate = static_cast<double>(met) / static_cast<double>(draws);
  diag.tau_mean = tau_sum / static_cast<double>(draws);
  diag.tau_var = (tau_sum2 - tau_sum * tau_sum / static_cast<double>(draws)) /
                 static_cast<double>(draws - 1);

  double nn = static_cast<double>(n);
  double lil = diag.u_stat * std::sqrt(2.0 * nn * std::log(std::log(nn))) / nn;
  diag.lower_bound_lN = p_meet_hat * overlap / (1.0 + lil) *
                        (nn / (nn - 1.0 + 1.0 / diag.px_hat)) *
                        (nn / (nn - 1.0 + 1.0 / diag.py_hat));
  diag.upper_bound_uN =
      lil < 1.0 ? p_meet_hat * overlap_max / (1.0 - lil)
                : std::numeric_limits<double>::infinity();
  return diag;
}

}  // namespace coupled

#endif  // COUPLED_REJECTION_HPP
