#ifndef COUPLED_MCMC_HPP
#define COUPLED_MCMC_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "coupled/couplings.hpp"
#include "coupled/errors.hpp"
#include "coupled/gaussian.hpp"
#include "coupled/rejection.hpp"
#include "coupled/rng.hpp"
#include "coupled/types.hpp"

namespace coupled {

/// A pair of Markov chains advanced jointly. `met` is true exactly when the
/// two states are bitwise identical; faithful kernels keep them identical
/// from then on.
struct CoupledChainState {
  Vector state_1;
  Vector state_2;
  bool met = false;
  std::int64_t step = 0;
};

inline bool states_equal(const Vector& a, const Vector& b) {
  return a.size() == b.size() && (a.array() == b.array()).all();
}

/// Conditional of one Gibbs block given the other for the target
/// p(x, y) ~ exp(-(x'x y'y + x'x + y'y) / 2): a centered isotropic Gaussian
/// with covariance I / (1 + |other|^2).
inline GaussianParams gibbs_conditional(const Vector& other_block) {
  const Eigen::Index d = other_block.size();
  double scale = 1.0 / (1.0 + other_block.squaredNorm());
  return GaussianParams(Vector::Zero(d), scale * Matrix::Identity(d, d));
}

/// Which coupler the Gibbs kernel uses for its conditional updates.
struct GibbsCoupler {
  enum class Kind { kRejection, kThorisson };
  Kind kind = Kind::kRejection;
  int ensemble_size = 1;
  double thorisson_c = 0.9;

  static GibbsCoupler rejection(int n) {
    return {Kind::kRejection, n, 0.0};
  }
  static GibbsCoupler thorisson(double c) {
    return {Kind::kThorisson, 1, c};
  }
};

namespace detail {

inline CoupledDraw couple_gaussian_pair(const GaussianParams& a,
                                        const GaussianParams& b,
                                        const GibbsCoupler& coupler,
                                        RngStream& rng) {
  if (coupler.kind == GibbsCoupler::Kind::kThorisson) {
    return thorisson_modified(a.density(), b.density(), coupler.thorisson_c,
                              rng);
  }
  DominatingPair dom = gaussian_dominating_pair(a, b, DominatingStrategy::kOpt);
  return ensemble_rejection_couple(dom, a.density(), b.density(),
                                   coupler.ensemble_size, rng);
}

}  // namespace detail

/// One sweep of the coupled Gibbs sampler. The state of each chain stacks the
/// two blocks as [x; y]. Each half-step couples the two conditional Gaussians
/// with the configured coupler; once the chains have met they advance with a
/// single shared draw.
inline CoupledChainState coupled_gibbs_step(const CoupledChainState& s,
                                            const GibbsCoupler& coupler,
                                            RngStream& rng) {
  const Eigen::Index d = s.state_1.size() / 2;
  CoupledChainState out = s;
  out.step = s.step + 1;

  if (s.met) {
    Vector y = s.state_1.tail(d);
    Vector x = gibbs_conditional(y).sample(rng);
    Vector y_new = gibbs_conditional(x).sample(rng);
    out.state_1.head(d) = x;
    out.state_1.tail(d) = y_new;
    out.state_2 = out.state_1;
    return out;
  }

  CoupledDraw dx = detail::couple_gaussian_pair(
      gibbs_conditional(s.state_1.tail(d)),
      gibbs_conditional(s.state_2.tail(d)), coupler, rng);
  out.state_1.head(d) = dx.x;
  out.state_2.head(d) = dx.y;

  CoupledDraw dy = detail::couple_gaussian_pair(
      gibbs_conditional(out.state_1.head(d)),
      gibbs_conditional(out.state_2.head(d)), coupler, rng);
  out.state_1.tail(d) = dy.x;
  out.state_2.tail(d) = dy.y;

  out.met = states_equal(out.state_1, out.state_2);
  return out;
}

using LogDensityGradient =
    std::function<std::pair<double, Vector>(const Vector&)>;
using Preconditioner = std::function<Matrix(const Vector&)>;

namespace detail {

struct MalaProposalParams {
  double log_target = 0.0;
  GaussianParams dist;
};

inline MalaProposalParams mala_proposal_params(const LogDensityGradient& target,
                                               const Preconditioner& precond,
                                               double step_size,
                                               const Vector& x) {
  auto [lp, grad] = target(x);
  Matrix p = precond(x);
  return {lp, GaussianParams(x + 0.5 * step_size * (p * grad),
                             step_size * p)};
}

}  // namespace detail

/// One step of the coupled preconditioned MALA kernel. Each chain's proposal
/// is Gaussian with a state-dependent preconditioned-gradient mean and
/// covariance step_size * precond(state); the two proposals are drawn from
/// the ensemble rejection coupler with the optimal dominating covariance, and
/// a single shared uniform performs both Metropolis-Hastings corrections.
inline CoupledChainState coupled_mala_step(const CoupledChainState& s,
                                           const LogDensityGradient& target,
                                           const Preconditioner& precond,
                                           double step_size, int n,
                                           RngStream& rng,
                                           const EngineOptions& opts = {}) {
  if (!(step_size > 0.0)) {
    throw DomainError("coupled_mala_step: step_size must be positive");
  }
  CoupledChainState out = s;
  out.step = s.step + 1;

  if (s.met) {
    auto fwd = detail::mala_proposal_params(target, precond, step_size,
                                            s.state_1);
    Vector prop = fwd.dist.sample(rng);
    auto rev = detail::mala_proposal_params(target, precond, step_size, prop);
    double log_ar = rev.log_target - fwd.log_target +
                    rev.dist.log_pdf(s.state_1) - fwd.dist.log_pdf(prop);
    if (std::log(rng.uniform()) < log_ar) {
      out.state_1 = prop;
      out.state_2 = prop;
    }
    return out;
  }

  auto fwd1 = detail::mala_proposal_params(target, precond, step_size,
                                           s.state_1);
  auto fwd2 = detail::mala_proposal_params(target, precond, step_size,
                                           s.state_2);
  DominatingPair dom =
      gaussian_dominating_pair(fwd1.dist, fwd2.dist, DominatingStrategy::kOpt);
  CoupledDraw prop = ensemble_rejection_couple(
      dom, fwd1.dist.density(), fwd2.dist.density(), n, rng, opts);

  auto rev1 = detail::mala_proposal_params(target, precond, step_size, prop.x);
  auto rev2 = prop.met
                  ? rev1
                  : detail::mala_proposal_params(target, precond, step_size,
                                                 prop.y);
  double log_ar1 = rev1.log_target - fwd1.log_target +
                   rev1.dist.log_pdf(s.state_1) - fwd1.dist.log_pdf(prop.x);
  double log_ar2 = rev2.log_target - fwd2.log_target +
                   rev2.dist.log_pdf(s.state_2) - fwd2.dist.log_pdf(prop.y);
  double log_u = std::log(rng.uniform());
  if (log_u < log_ar1) out.state_1 = prop.x;
  if (log_u < log_ar2) out.state_2 = prop.met ? prop.x : prop.y;
  out.met = states_equal(out.state_1, out.state_2);
  return out;
}

/// Meeting-time statistics over independent coupled runs. Mean and quantiles
/// are computed over uncensored runs; censored runs are counted separately.
struct MeetingTimeSummary {
  std::vector<std::int64_t> times;  // per run; equals cap when censored
  std::vector<bool> censored;
  std::vector<double> wall_seconds;
  std::int64_t n_censored = 0;
  double mean = 0.0;
  double q05 = 0.0;
  double q50 = 0.0;
  double q95 = 0.0;
};

using CoupledKernel =
    std::function<CoupledChainState(const CoupledChainState&, RngStream&)>;
using InitialLaw = std::function<Vector(RngStream&)>;

/// Runs `runs` independent coupled chains, both started from independent
/// draws of `initial_law`, and records the first step at which they meet
/// (censored at `cap`). Run r uses split_stream(rng, r), so runs can be
/// distributed over any number of workers without changing the result.
inline MeetingTimeSummary measure_meeting_times(const CoupledKernel& kernel,
                                                const InitialLaw& initial_law,
                                                std::int64_t runs,
                                                std::int64_t cap,
                                                RngStream& rng) {
  if (runs < 1 || cap < 1) {
    throw DomainError("measure_meeting_times: runs and cap must be >= 1");
  }
  MeetingTimeSummary out;
  out.times.resize(runs);
  out.censored.resize(runs);
  out.wall_seconds.resize(runs);

  for (std::int64_t r = 0; r < runs; ++r) {
    RngStream lane = split_stream(rng, static_cast<std::uint64_t>(r));
    auto t0 = std::chrono::steady_clock::now();
    CoupledChainState state;
    state.state_1 = initial_law(lane);
    state.state_2 = initial_law(lane);
    state.met = states_equal(state.state_1, state.state_2);

    std::int64_t met_at = cap;
    bool censored = true;
    for (std::int64_t step = 1; step <= cap; ++step) {
      state = kernel(state, lane);
      if (state.met) {
        met_at = step;
        censored = false;
        break;
      }
    }
    auto t1 = std::chrono::steady_clock::now();
    out.times[r] = met_at;
    out.censored[r] = censored;
    out.wall_seconds[r] = std::chrono::duration<double>(t1 - t0).count();
    if (censored) ++out.n_censored;
  }

  std::vector<double> finished;
  finished.reserve(runs);
  for (std::int64_t r = 0; r < runs; ++r) {
    if (!out.censored[r]) finished.push_back(static_cast<double>(out.times[r]));
  }
  if (!finished.empty()) {
    std::sort(finished.begin(), finished.end());
    out.mean = pairwise_mean(finished);
    auto quantile = [&](double p) {
      auto idx = static_cast<std::size_t>(
          std::ceil(p * static_cast<double>(finished.size())) - 1.0);
      idx = std::min(idx, finished.size() - 1);
      return finished[idx];
    };
    out.q05 = quantile(0.05);
    out.q50 = quantile(0.50);
    out.q95 = quantile(0.95);
  }
  return out;
}

inline CoupledKernel make_gibbs_kernel(const GibbsCoupler& coupler) {
  return [coupler](const CoupledChainState& s, RngStream& rng) {
    return coupled_gibbs_step(s, coupler, rng);
  };
}

inline InitialLaw gaussian_initial_law(int dim, double sd) {
  return [dim, sd](RngStream& rng) {
    return Vector(sd * standard_normal_vector(rng, dim));
  };
}

/// Synthetic Bayesian logistic regression with a Gaussian prior; the
/// state-dependent expected-information preconditioner makes the MALA
/// proposal covariances genuinely different between unmet chains.
struct LogisticRegressionTarget {
  Matrix design;        // n_obs x dim
  Vector labels;        // in {0, 1}
  double prior_variance = 25.0;

  std::pair<double, Vector> log_pdf_grad(const Vector& beta) const {
    Vector z = design * beta;
    double lp = -0.5 * beta.squaredNorm() / prior_variance;
    Vector resid(labels.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      double zi = z[i];
      double log1pe = zi > 0.0 ? zi + std::log1p(std::exp(-zi))
                               : std::log1p(std::exp(zi));
      lp += labels[i] * zi - log1pe;
      resid[i] = labels[i] - 1.0 / (1.0 + std::exp(-zi));
    }
    Vector grad = design.transpose() * resid - beta / prior_variance;
    return {lp, grad};
  }

  double log_pdf(const Vector& beta) const { return log_pdf_grad(beta).first; }

  /// Inverse of the expected information (Fisher plus prior precision).
  Matrix precondition(const Vector& beta) const {
    Vector z = design * beta;
    Vector s(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      double sig = 1.0 / (1.0 + std::exp(-z[i]));
      s[i] = sig * (1.0 - sig);
    }
    Matrix info = design.transpose() * s.asDiagonal() * design;
    info += Matrix::Identity(design.cols(), design.cols()) / prior_variance;
    Eigen::LLT<Matrix> llt(info);
    if (llt.info() != Eigen::Success) {
      throw NotPositiveDefinite("LogisticRegressionTarget: information matrix");
    }
    return llt.solve(Matrix::Identity(design.cols(), design.cols()));
  }
};

inline LogisticRegressionTarget make_logistic_regression(int dim, int n_obs,
                                                         std::uint64_t seed) {
  RngStream rng(seed);
  LogisticRegressionTarget t;
  t.design = Matrix(n_obs, dim);
  for (int i = 0; i < n_obs; ++i) {
    for (int j = 0; j < dim; ++j) t.design(i, j) = rng.normal();
  }
  Vector beta = standard_normal_vector(rng, dim);
  t.labels = Vector(n_obs);
  for (int i = 0; i < n_obs; ++i) {
    double z = t.design.row(i).dot(beta);
    double prob = 1.0 / (1.0 + std::exp(-z));
    t.labels[i] = rng.uniform() < prob ? 1.0 : 0.0;
  }
  return t;
}

inline CoupledKernel make_mala_kernel(
    std::shared_ptr<const LogisticRegressionTarget> target, double step_size,
    int n) {
  LogDensityGradient f = [target](const Vector& b) {
    return target->log_pdf_grad(b);
  };
  Preconditioner p = [target](const Vector& b) {
    return target->precondition(b);
  };
  return [f, p, step_size, n](const CoupledChainState& s, RngStream& rng) {
    return coupled_mala_step(s, f, p, step_size, n, rng);
  };
}

}  // namespace coupled

#endif  // COUPLED_MCMC_HPP
