#ifndef COUPLED_RESAMPLING_HPP
#define COUPLED_RESAMPLING_HPP

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "coupled/couplings.hpp"
#include "coupled/errors.hpp"
#include "coupled/math.hpp"
#include "coupled/rejection.hpp"
#include "coupled/rng.hpp"
#include "coupled/types.hpp"

namespace coupled {

/// Unnormalized particle weights together with a known upper bound on them.
struct ParticleWeights {
  std::vector<double> w;
  double w_bar = 0.0;

  ParticleWeights() = default;

  ParticleWeights(std::vector<double> weights, double bound)
      : w(std::move(weights)), w_bar(bound) {
    if (!(w_bar > 0.0)) {
      throw ZeroWeights("ParticleWeights: bound must be positive");
    }
    bool any_positive = false;
    for (double v : w) {
      if (v < 0.0) throw DomainError("ParticleWeights: negative weight");
      if (v > w_bar) {
        throw DomainError("ParticleWeights: weight exceeds its bound");
      }
      any_positive = any_positive || v > 0.0;
    }
    if (!any_positive) {
      throw ZeroWeights("ParticleWeights: all weights are zero");
    }
  }

  std::size_t size() const { return w.size(); }
};

/// Coupled ancestor indices for the two weight vectors; met_mask[m] marks
/// lanes whose ancestors agree.
struct ResampleResult {
  std::vector<std::int64_t> bx;
  std::vector<std::int64_t> by;
  std::vector<bool> met_mask;

  double met_rate() const {
    if (met_mask.empty()) return 0.0;
    std::int64_t hits = 0;
    for (bool b : met_mask) hits += b ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(met_mask.size());
  }
};

struct ResampleOptions {
  std::int64_t max_iter = 10000000;
};

/// Sum over k of min(Wx_k, Wy_k) of the normalized weights: the coupling
/// probability a maximal coupling of the two categoricals would attain.
inline double maximal_coupling_mass(const ParticleWeights& wx,
                                    const ParticleWeights& wy) {
  if (wx.size() != wy.size()) {
    throw LengthMismatch("maximal_coupling_mass: size mismatch");
  }
  double sx = pairwise_sum(wx.w);
  double sy = pairwise_sum(wy.w);
  double acc = 0.0;
  for (std::size_t k = 0; k < wx.size(); ++k) {
    acc += std::min(wx.w[k] / sx, wy.w[k] / sy);
  }
  return acc;
}

/// Coupled parallel rejection resampling. Lane m first tests its own index
/// (the deterministic first proposal of the parallel rejection resampler),
/// then shares uniform index proposals and one uniform per round across both
/// margins until either accepts; the unaccepted margin finishes with its own
/// rejection loop, x margin first. Lane m draws from split_stream(rng, m),
/// so the result does not depend on how lanes are scheduled.
inline ResampleResult coupled_rejection_resample(
    const ParticleWeights& wx, const ParticleWeights& wy, RngStream& rng,
    const ResampleOptions& opts = {}) {
  if (wx.size() != wy.size()) {
    throw LengthMismatch("coupled_rejection_resample: size mismatch");
  }
  const std::size_t m_lanes = wx.size();
  ResampleResult out;
  out.bx.resize(m_lanes);
  out.by.resize(m_lanes);
  out.met_mask.resize(m_lanes);

  for (std::size_t m = 0; m < m_lanes; ++m) {
    RngStream lane = split_stream(rng, m);
    std::int64_t bx = static_cast<std::int64_t>(m);
    std::int64_t by = static_cast<std::int64_t>(m);
    double u = lane.uniform();
    bool ax = u < wx.w[m] / wx.w_bar;
    bool ay = u < wy.w[m] / wy.w_bar;

    std::int64_t iters = 0;
    while (!ax && !ay) {
      if (++iters > opts.max_iter) {
        throw MaxIterExceeded("coupled_rejection_resample: lane cap exceeded");
      }
      u = lane.uniform();
      auto k = static_cast<std::int64_t>(lane.uniform_index(m_lanes));
      if (u < wx.w[k] / wx.w_bar) {
        ax = true;
        bx = k;
      }
      if (u < wy.w[k] / wy.w_bar) {
        ay = true;
        by = k;
      }
    }
    while (!ax) {
      if (++iters > opts.max_iter) {
        throw MaxIterExceeded("coupled_rejection_resample: lane cap exceeded");
      }
      u = lane.uniform();
      auto k = static_cast<std::int64_t>(lane.uniform_index(m_lanes));
      if (u < wx.w[k] / wx.w_bar) {
        ax = true;
        bx = k;
      }
    }
    while (!ay) {
      if (++iters > opts.max_iter) {
        throw MaxIterExceeded("coupled_rejection_resample: lane cap exceeded");
      }
      u = lane.uniform();
      auto k = static_cast<std::int64_t>(lane.uniform_index(m_lanes));
      if (u < wy.w[k] / wy.w_bar) {
        ay = true;
        by = k;
      }
    }
    out.bx[m] = bx;
    out.by[m] = by;
    out.met_mask[m] = bx == by;
  }
  return out;
}

namespace detail {

struct LaneEnsembleDraw {
  std::int64_t index = 0;
  bool accepted = false;
};

// One single-margin ensemble round over n common index proposals.
inline LaneEnsembleDraw lane_ensemble_round(const std::vector<double>& w,
                                            double w_bar,
                                            const std::vector<std::int64_t>& idx,
                                            RngStream& lane) {
  const auto n = static_cast<double>(idx.size());
  std::vector<double> v(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) v[i] = w[idx[i]];
  double s = pairwise_mean(v);
  LaneEnsembleDraw out;
  if (s <= 0.0) return out;
  std::size_t pick = sample_categorical(v, pairwise_sum(v), lane);
  double z_bar = s + (w_bar - v[pick]) / n;
  if (lane.uniform() < s / z_bar) {
    out.index = idx[pick];
    out.accepted = true;
  }
  return out;
}

}  // namespace detail

/// Ensemble variant of the coupled resampler: each round draws n index
/// proposals shared by both margins (common random numbers), weights them by
/// w / w_bar per margin, picks the index pair from a maximal coupling of the
/// two weight categoricals, and gates both margins with one shared uniform.
inline ResampleResult coupled_ensemble_rejection_resample(
    const ParticleWeights& wx, const ParticleWeights& wy, int n,
    RngStream& rng, const ResampleOptions& opts = {}) {
  if (wx.size() != wy.size()) {
    throw LengthMismatch("coupled_ensemble_rejection_resample: size mismatch");
  }
  if (n < 1) {
    throw DomainError("coupled_ensemble_rejection_resample: n must be >= 1");
  }
  const std::size_t m_lanes = wx.size();
  ResampleResult out;
  out.bx.resize(m_lanes);
  out.by.resize(m_lanes);
  out.met_mask.resize(m_lanes);

  std::vector<std::int64_t> idx(n);
  std::vector<double> vx(n), vy(n);

  for (std::size_t m = 0; m < m_lanes; ++m) {
    RngStream lane = split_stream(rng, m);
    bool ax = false, ay = false;
    std::int64_t bx = 0, by = 0;
    std::int64_t iters = 0;

    while (!ax && !ay) {
      if (++iters > opts.max_iter) {
        throw MaxIterExceeded(
            "coupled_ensemble_rejection_resample: lane cap exceeded");
      }
      for (int i = 0; i < n; ++i) {
        idx[i] = static_cast<std::int64_t>(lane.uniform_index(m_lanes));
        vx[i] = wx.w[idx[i]];
        vy[i] = wy.w[idx[i]];
      }
      detail::EnsembleStep step =
          detail::ensemble_accept_step(vx, vy, wx.w_bar, wy.w_bar, lane);
      if (step.accept_x) {
        ax = true;
        bx = idx[step.i];
      }
      if (step.accept_y) {
        ay = true;
        by = idx[step.j];
      }
    }
    while (!ax) {
      if (++iters > opts.max_iter) {
        throw MaxIterExceeded(
            "coupled_ensemble_rejection_resample: lane cap exceeded");
      }
      for (int i = 0; i < n; ++i) {
        idx[i] = static_cast<std::int64_t>(lane.uniform_index(m_lanes));
      }
      detail::LaneEnsembleDraw d =
          detail::lane_ensemble_round(wx.w, wx.w_bar, idx, lane);
      if (d.accepted) {
        ax = true;
        bx = d.index;
      }
    }
    while (!ay) {
      if (++iters > opts.max_iter) {
        throw MaxIterExceeded(
            "coupled_ensemble_rejection_resample: lane cap exceeded");
      }
      for (int i = 0; i < n; ++i) {
        idx[i] = static_cast<std::int64_t>(lane.uniform_index(m_lanes));
      }
      detail::LaneEnsembleDraw d =
          detail::lane_ensemble_round(wy.w, wy.w_bar, idx, lane);
      if (d.accepted) {
        ay = true;
        by = d.index;
      }
    }
    out.bx[m] = bx;
    out.by[m] = by;
    out.met_mask[m] = bx == by;
  }
  return out;
}

/// Inputs of the parallel cost model: m lanes synchronizing on the slowest
/// one, ensemble size n, per-round cost k, and the single-proposal acceptance
/// probability p_rs.
struct CostModelParams {
  std::int64_t m = 1;
  int n = 1;
  double k = 1.0;
  double p_rs = 1.0;
};

/// Monte-Carlo estimate of the expected synchronized run time
/// (k + log2(n)) * E[max of m i.i.d. Geometric(p_ers)] with
/// p_ers = n p_rs / ((n - 1) p_rs + 1). n = 1 reduces to the plain
/// rejection-sampler cost k * E[max Geometric(p_rs)].
inline double expected_parallel_cost(const CostModelParams& params,
                                     std::int64_t replications,
                                     RngStream& rng) {
  if (params.m < 1 || params.n < 1) {
    throw DomainError("expected_parallel_cost: m and n must be >= 1");
  }
  if (!(params.k > 0.0) || !(params.p_rs > 0.0 && params.p_rs <= 1.0)) {
    throw DomainError("expected_parallel_cost: invalid k or p_rs");
  }
  if (replications < 1000) {
    throw DomainError("expected_parallel_cost: replications must be >= 1000");
  }
  double nn = static_cast<double>(params.n);
  double p_ers = nn * params.p_rs / ((nn - 1.0) * params.p_rs + 1.0);
  double log_q = std::log1p(-p_ers);  // -inf when p_ers == 1

  std::vector<double> maxima(replications);
  for (std::int64_t r = 0; r < replications; ++r) {
    RngStream lane = split_stream(rng, static_cast<std::uint64_t>(r));
    double worst = 1.0;
    for (std::int64_t i = 0; i < params.m; ++i) {
      double g = 1.0;
      if (p_ers < 1.0) {
        g = 1.0 + std::floor(std::log1p(-lane.uniform()) / log_q);
      }
      worst = std::max(worst, g);
    }
    maxima[r] = worst;
  }
  double per_round = params.k + std::log2(nn);
  return per_round * pairwise_mean(maxima);
}

}  // namespace coupled

#endif  // COUPLED_RESAMPLING_HPP
