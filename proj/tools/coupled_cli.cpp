// Experiment driver: every subcommand writes a deterministic CSV for a fixed
// seed. Wall-clock columns are zero unless --timings is given, so reruns with
// identical flags are byte-identical.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "coupled/gaussian.hpp"
#include "coupled/mcmc.hpp"
#include "coupled/rejection.hpp"
#include "coupled/resampling.hpp"
#include "coupled/tails.hpp"

namespace {

using coupled::RngStream;
using coupled::split_stream;
using coupled::Vector;
using coupled::Matrix;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt(std::int64_t v) { return std::to_string(v); }
std::string fmt(int v) { return std::to_string(v); }

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open output file: " + path);
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

struct CommonOptions {
  std::uint64_t seed = 0;
  std::string out = "results.csv";
  bool paper_scale = false;
  bool sidecar = false;
  bool timings = false;
  int threads = 0;  // 0: hardware concurrency

  int worker_count() const {
    if (threads > 0) return threads;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
  }
};

void add_common(CLI::App* cmd, CommonOptions& c) {
  cmd->add_option("--seed", c.seed, "RNG seed");
  cmd->add_option("--out", c.out, "output CSV path");
  cmd->add_flag("--paper-scale", c.paper_scale,
                "use the larger experiment sizes from the study setup");
  cmd->add_flag("--sidecar", c.sidecar, "write a JSON config echo next to the CSV");
  cmd->add_flag("--timings", c.timings,
                "record wall-clock columns (breaks byte-identical reruns)");
  cmd->add_option("--threads", c.threads, "worker threads (0 = all cores)");
}

void write_sidecar(const CommonOptions& c, const std::string& subcommand,
                   const nlohmann::json& params) {
  if (!c.sidecar) return;
  nlohmann::json j;
  j["subcommand"] = subcommand;
  j["seed"] = c.seed;
  j["out"] = c.out;
  j["paper_scale"] = c.paper_scale;
  j["timings"] = c.timings;
  j["params"] = params;
  std::ofstream f(c.out + ".json");
  f << j.dump(2) << '\n';
}

// Static fan-out over replication indices; slot i is written by exactly one
// worker, so the result is independent of the worker count.
void parallel_for(std::int64_t n, int workers,
                  const std::function<void(std::int64_t)>& fn) {
  if (workers <= 1 || n < 2) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::vector<std::thread> pool;
  int count = static_cast<int>(std::min<std::int64_t>(workers, n));
  pool.reserve(count);
  for (int t = 0; t < count; ++t) {
    pool.emplace_back([&] {
      for (std::int64_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

class Stopwatch {
 public:
  explicit Stopwatch(bool enabled) : enabled_(enabled) {
    if (enabled_) start_ = std::chrono::steady_clock::now();
  }
  double seconds() const {
    if (!enabled_) return 0.0;
    auto now = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(now - start_).count();
  }

 private:
  bool enabled_;
  std::chrono::steady_clock::time_point start_;
};

double sample_mean(const std::vector<double>& v) {
  return coupled::pairwise_mean(v);
}

double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = sample_mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

// ---------------------------------------------------------------------------
// tails: coupled sampling from Gaussian tails over a grid of truncations.

struct TailsConfig {
  CommonOptions common;
  double mu = 6.0;
  std::vector<double> eta_grid;
  int n = 1;
  std::int64_t samples = 10000;
};

int run_tails(const TailsConfig& cfg) {
  TailsConfig c = cfg;
  if (c.common.paper_scale && c.samples == 10000) c.samples = 100000;
  if (c.eta_grid.empty()) {
    for (int i = 0; i <= 10; ++i) c.eta_grid.push_back(c.mu + 0.1 * i);
  }
  write_sidecar(c.common, "tails",
                {{"mu", c.mu},
                 {"eta_grid", c.eta_grid},
                 {"n", c.n},
                 {"samples", c.samples}});

  CsvWriter csv(c.common.out);
  csv.row({"eta", "empirical_met", "numeric_overlap", "mean_tau", "var_tau",
           "wall_seconds"});
  RngStream base(c.common.seed);
  for (std::size_t row = 0; row < c.eta_grid.size(); ++row) {
    double eta = c.eta_grid[row];
    RngStream row_stream = split_stream(base, row);
    Stopwatch watch(c.common.timings);

    std::vector<double> met(c.samples), tau(c.samples);
    parallel_for(c.samples, c.common.worker_count(), [&](std::int64_t i) {
      RngStream lane = split_stream(row_stream, static_cast<std::uint64_t>(i));
      coupled::CoupledDraw d = coupled::coupled_tail_sampler(c.mu, eta, c.n, lane);
      met[i] = d.met ? 1.0 : 0.0;
      tau[i] = static_cast<double>(d.steps);
    });
    double met_rate = sample_mean(met);
    double tau_mean = sample_mean(tau);
    double tau_sd = sample_sd(tau);
    double overlap = coupled::tail_overlap_numeric(c.mu, eta);
    csv.row({fmt(eta), fmt(met_rate), fmt(overlap), fmt(tau_mean),
             fmt(tau_sd * tau_sd), fmt(watch.seconds())});
  }
  return 0;
}

// ---------------------------------------------------------------------------
// resampling: coupled (ensemble) rejection resampling on fixed particle sets.

struct ResamplingConfig {
  CommonOptions common;
  std::int64_t m = 4096;
  std::vector<double> y_grid{0.0, 1.0, 2.0, 3.0};
  std::vector<int> n_grid{1, 2, 4, 8, 16, 32, 64, 128};
  std::int64_t reps = 20;
};

int run_resampling(const ResamplingConfig& cfg) {
  ResamplingConfig c = cfg;
  if (c.common.paper_scale) {
    if (c.m == 4096) c.m = 16384;
    if (c.reps == 20) c.reps = 100;
  }
  write_sidecar(c.common, "resampling",
                {{"m", c.m}, {"y_grid", c.y_grid}, {"n_grid", c.n_grid},
                 {"reps", c.reps}});

  CsvWriter csv(c.common.out);
  csv.row({"y", "n", "mean_met", "ci_low", "ci_high", "max_mass",
           "wall_seconds"});

  RngStream base(c.common.seed);
  // Two fixed particle sets, drawn once.
  std::vector<double> xs(c.m), zs(c.m);
  for (std::int64_t i = 0; i < c.m; ++i) xs[i] = base.normal();
  for (std::int64_t i = 0; i < c.m; ++i) zs[i] = base.normal();
  const double bound = 1.0 / std::sqrt(2.0 * M_PI);
  auto weight = [](double y, double a) {
    double t = y - a;
    return std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI);
  };

  std::size_t row_id = 0;
  for (double y : c.y_grid) {
    std::vector<double> wx_raw(c.m), wy_raw(c.m);
    for (std::int64_t i = 0; i < c.m; ++i) {
      wx_raw[i] = weight(y, xs[i]);
      wy_raw[i] = weight(y, zs[i]);
    }
    coupled::ParticleWeights wx(wx_raw, bound), wy(wy_raw, bound);
    double max_mass = coupled::maximal_coupling_mass(wx, wy);

    for (int n : c.n_grid) {
      RngStream row_stream = split_stream(base, 1000 + row_id++);
      Stopwatch watch(c.common.timings);
      std::vector<double> met(c.reps);
      parallel_for(c.reps, c.common.worker_count(), [&](std::int64_t r) {
        RngStream lane = split_stream(row_stream, static_cast<std::uint64_t>(r));
        coupled::ResampleResult res =
            n == 1 ? coupled::coupled_rejection_resample(wx, wy, lane)
                   : coupled::coupled_ensemble_rejection_resample(wx, wy, n,
                                                                  lane);
        met[r] = res.met_rate();
      });
      double mean = sample_mean(met);
      double half = 1.96 * sample_sd(met) /
                    std::sqrt(static_cast<double>(c.reps));
      csv.row({fmt(y), fmt(n), fmt(mean), fmt(mean - half), fmt(mean + half),
               fmt(max_mass), fmt(watch.seconds())});
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// gibbs: meeting times of the coupled Gibbs chains.

struct GibbsConfig {
  CommonOptions common;
  std::vector<int> d_grid{1, 2};
  std::vector<int> rejection_n_grid{1, 16};
  std::vector<double> thorisson_c_grid{0.5, 0.7, 0.9, 0.99};
  std::int64_t chains = 100;
  std::int64_t cap = 10000;
};

int run_gibbs(const GibbsConfig& cfg) {
  GibbsConfig c = cfg;
  if (c.common.paper_scale && c.chains == 100) c.chains = 1000;
  write_sidecar(c.common, "gibbs",
                {{"d_grid", c.d_grid},
                 {"rejection_n_grid", c.rejection_n_grid},
                 {"thorisson_c_grid", c.thorisson_c_grid},
                 {"chains", c.chains},
                 {"cap", c.cap}});

  CsvWriter csv(c.common.out);
  csv.row({"d", "coupler", "param", "mean_meeting_time", "mean_wall_seconds",
           "ci"});
  RngStream base(c.common.seed);
  std::size_t row_id = 0;

  auto emit = [&](int d, const std::string& name, double param,
                  const coupled::GibbsCoupler& coupler) {
    RngStream row_stream = split_stream(base, row_id++);
    coupled::CoupledKernel kernel = coupled::make_gibbs_kernel(coupler);
    coupled::InitialLaw init = coupled::gaussian_initial_law(2 * d, 1.0);

    std::vector<double> times(c.chains);
    std::vector<double> walls(c.chains);
    std::vector<char> censored(c.chains);
    parallel_for(c.chains, c.common.worker_count(), [&](std::int64_t r) {
      RngStream lane = split_stream(row_stream, static_cast<std::uint64_t>(r));
      Stopwatch watch(c.common.timings);
      coupled::CoupledChainState state;
      state.state_1 = init(lane);
      state.state_2 = init(lane);
      std::int64_t met_at = c.cap;
      bool cens = true;
      for (std::int64_t step = 1; step <= c.cap; ++step) {
        state = kernel(state, lane);
        if (state.met) {
          met_at = step;
          cens = false;
          break;
        }
      }
      times[r] = static_cast<double>(met_at);
      censored[r] = cens ? 1 : 0;
      walls[r] = watch.seconds();
    });

    std::vector<double> finished;
    for (std::int64_t r = 0; r < c.chains; ++r) {
      if (!censored[r]) finished.push_back(times[r]);
    }
    double mean = finished.empty()
                      ? std::numeric_limits<double>::quiet_NaN()
                      : sample_mean(finished);
    double ci = finished.size() > 1
                    ? 1.96 * sample_sd(finished) /
                          std::sqrt(static_cast<double>(finished.size()))
                    : 0.0;
    csv.row({fmt(d), name, fmt(param), fmt(mean), fmt(sample_mean(walls)),
             fmt(ci)});
  };

  for (int d : c.d_grid) {
    for (int n : c.rejection_n_grid) {
      emit(d, "rejection", n, coupled::GibbsCoupler::rejection(n));
    }
    for (double cc : c.thorisson_c_grid) {
      emit(d, "thorisson", cc, coupled::GibbsCoupler::thorisson(cc));
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// mala: meeting times of coupled preconditioned MALA on synthetic logistic
// regression.

struct MalaConfig {
  CommonOptions common;
  int dim = 5;
  int n_obs = 200;
  std::vector<int> n_grid{1, 4, 16, 64};
  std::int64_t runs = 200;
  std::int64_t cap = 10000;
  double step_size = 0.5;
  std::uint64_t data_seed = 42;
};

int run_mala(const MalaConfig& cfg) {
  MalaConfig c = cfg;
  if (c.common.paper_scale && c.runs == 200) c.runs = 1000;
  write_sidecar(c.common, "mala",
                {{"dim", c.dim},
                 {"n_obs", c.n_obs},
                 {"n_grid", c.n_grid},
                 {"runs", c.runs},
                 {"cap", c.cap},
                 {"step_size", c.step_size},
                 {"data_seed", c.data_seed}});

  CsvWriter csv(c.common.out);
  csv.row({"n", "mean", "std", "q05", "q50", "q95", "mean_wall"});

  auto target = std::make_shared<coupled::LogisticRegressionTarget>(
      coupled::make_logistic_regression(c.dim, c.n_obs, c.data_seed));
  RngStream base(c.common.seed);
  coupled::InitialLaw init = coupled::gaussian_initial_law(c.dim, 0.25);

  std::size_t row_id = 0;
  for (int n : c.n_grid) {
    coupled::CoupledKernel kernel =
        coupled::make_mala_kernel(target, c.step_size, n);
    RngStream row_stream = split_stream(base, row_id++);

    std::vector<double> times(c.runs), walls(c.runs);
    std::vector<char> censored(c.runs);
    parallel_for(c.runs, c.common.worker_count(), [&](std::int64_t r) {
      RngStream lane = split_stream(row_stream, static_cast<std::uint64_t>(r));
      Stopwatch watch(c.common.timings);
      coupled::CoupledChainState state;
      state.state_1 = init(lane);
      state.state_2 = init(lane);
      std::int64_t met_at = c.cap;
      bool cens = true;
      for (std::int64_t step = 1; step <= c.cap; ++step) {
        state = kernel(state, lane);
        if (state.met) {
          met_at = step;
          cens = false;
          break;
        }
      }
      times[r] = static_cast<double>(met_at);
      censored[r] = cens ? 1 : 0;
      walls[r] = watch.seconds();
    });

    std::vector<double> finished;
    for (std::int64_t r = 0; r < c.runs; ++r) {
      if (!censored[r]) finished.push_back(times[r]);
    }
    std::sort(finished.begin(), finished.end());
    auto quantile = [&](double p) {
      if (finished.empty()) return std::numeric_limits<double>::quiet_NaN();
      auto idx = static_cast<std::size_t>(
          std::ceil(p * static_cast<double>(finished.size())) - 1.0);
      return finished[std::min(idx, finished.size() - 1)];
    };
    double mean = finished.empty()
                      ? std::numeric_limits<double>::quiet_NaN()
                      : sample_mean(finished);
    csv.row({fmt(n), fmt(mean), fmt(sample_sd(finished)), fmt(quantile(0.05)),
             fmt(quantile(0.50)), fmt(quantile(0.95)),
             fmt(sample_mean(walls))});
  }
  return 0;
}

// ---------------------------------------------------------------------------
// gauss-bench: dominating-covariance strategies on random covariance pairs.

struct GaussBenchConfig {
  CommonOptions common;
  int d = 10;
  int pairs = 20;
  std::vector<int> n_grid{1, 16};
  std::int64_t reps = 200;
};

int run_gauss_bench(const GaussBenchConfig& cfg) {
  GaussBenchConfig c = cfg;
  if (c.common.paper_scale) {
    if (c.pairs == 20) c.pairs = 200;
    if (c.reps == 200) c.reps = 500;
  }
  write_sidecar(c.common, "gauss-bench",
                {{"d", c.d}, {"pairs", c.pairs}, {"n_grid", c.n_grid},
                 {"reps", c.reps}});

  CsvWriter csv(c.common.out);
  csv.row({"pair_id", "strategy", "n", "met_rate", "mean_tau", "lower_bound",
           "upper_bound"});

  RngStream base(c.common.seed);
  Matrix sigma_p = Matrix::Zero(c.d, c.d);
  for (int i = 0; i < c.d; ++i) sigma_p(i, i) = i + 1.0;
  Vector mu = Vector::Zero(c.d);
  coupled::GaussianParams p(mu, sigma_p);

  for (int pair = 0; pair < c.pairs; ++pair) {
    RngStream pair_stream = split_stream(base, pair);
    Matrix g(c.d, c.d);
    for (int i = 0; i < c.d; ++i) {
      for (int j = 0; j < c.d; ++j) g(i, j) = pair_stream.normal();
    }
    Matrix q_orth = Eigen::HouseholderQR<Matrix>(g).householderQ();
    Matrix sigma_q = q_orth * sigma_p * q_orth.transpose();
    coupled::GaussianParams q(mu, coupled::detail::symmetrize(sigma_q));

    for (auto strategy : {coupled::DominatingStrategy::kOpt,
                          coupled::DominatingStrategy::kMax}) {
      const char* name =
          strategy == coupled::DominatingStrategy::kOpt ? "opt" : "max";
      Matrix sigma_hat = strategy == coupled::DominatingStrategy::kOpt
                             ? coupled::sigma_opt(p.sigma, q.sigma)
                             : coupled::sigma_max(p.sigma, q.sigma);
      coupled::GaussianBounds bounds =
          coupled::gaussian_coupling_bounds(p, q, sigma_hat);
      coupled::DominatingPair dom =
          coupled::gaussian_dominating_pair(p, q, sigma_hat);

      for (int n : c.n_grid) {
        std::vector<double> met(c.reps), tau(c.reps);
        RngStream cell = split_stream(
            pair_stream, 7 + static_cast<std::uint64_t>(n) * 2 +
                             (strategy == coupled::DominatingStrategy::kOpt));
        parallel_for(c.reps, c.common.worker_count(), [&](std::int64_t r) {
          RngStream lane = split_stream(cell, static_cast<std::uint64_t>(r));
          coupled::CoupledDraw d = coupled::ensemble_rejection_couple(
              dom, p.density(), q.density(), n, lane);
          met[r] = d.met ? 1.0 : 0.0;
          tau[r] = static_cast<double>(d.steps);
        });
        csv.row({fmt(pair), name, fmt(n), fmt(sample_mean(met)),
                 fmt(sample_mean(tau)), fmt(bounds.lower), fmt(bounds.upper)});
      }
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// cost-model: expected synchronized run time of the parallel samplers.

struct CostModelConfig {
  CommonOptions common;
  std::vector<double> k_grid{0.5, 1.0, 2.0};
  std::vector<double> p_grid{0.05, 0.5};
  std::vector<std::int64_t> m_grid{1, 1000};
  std::vector<int> n_grid{1, 2, 4, 8, 16, 32, 64, 128, 256};
  std::int64_t reps = 2000;
};

int run_cost_model(const CostModelConfig& cfg) {
  CostModelConfig c = cfg;
  if (c.common.paper_scale && c.reps == 2000) c.reps = 20000;
  write_sidecar(c.common, "cost-model",
                {{"k_grid", c.k_grid},
                 {"p_grid", c.p_grid},
                 {"m_grid", c.m_grid},
                 {"n_grid", c.n_grid},
                 {"reps", c.reps}});

  CsvWriter csv(c.common.out);
  csv.row({"k", "p_rs", "m", "n", "expected_cost"});
  RngStream base(c.common.seed);
  std::size_t row_id = 0;
  for (double k : c.k_grid) {
    for (double p_rs : c.p_grid) {
      for (std::int64_t m : c.m_grid) {
        for (int n : c.n_grid) {
          RngStream row_stream = split_stream(base, row_id++);
          double cost = coupled::expected_parallel_cost(
              {m, n, k, p_rs}, c.reps, row_stream);
          csv.row({fmt(k), fmt(p_rs), fmt(m), fmt(n), fmt(cost)});
        }
      }
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coupled sampling experiments"};
  app.require_subcommand(1);

  TailsConfig tails;
  auto* cmd_tails = app.add_subcommand("tails", "coupled Gaussian-tail sampling");
  add_common(cmd_tails, tails.common);
  cmd_tails->add_option("--mu", tails.mu, "lower truncation point");
  cmd_tails->add_option("--eta-grid", tails.eta_grid, "grid of upper truncation points");
  cmd_tails->add_option("--n", tails.n, "ensemble size");
  cmd_tails->add_option("--samples", tails.samples, "draws per grid point");

  ResamplingConfig res;
  auto* cmd_res = app.add_subcommand("resampling", "coupled parallel resampling");
  add_common(cmd_res, res.common);
  cmd_res->add_option("--m", res.m, "number of particles");
  cmd_res->add_option("--y-grid", res.y_grid, "observation grid");
  cmd_res->add_option("--n-grid", res.n_grid, "ensemble size grid");
  cmd_res->add_option("--reps", res.reps, "replications per grid cell");

  GibbsConfig gibbs;
  auto* cmd_gibbs = app.add_subcommand("gibbs", "coupled Gibbs meeting times");
  add_common(cmd_gibbs, gibbs.common);
  cmd_gibbs->add_option("--d-grid", gibbs.d_grid, "block dimension grid");
  cmd_gibbs->add_option("--rejection-n-grid", gibbs.rejection_n_grid,
                        "ensemble sizes for the rejection coupler");
  cmd_gibbs->add_option("--thorisson-c-grid", gibbs.thorisson_c_grid,
                        "suboptimality parameters for the Thorisson coupler");
  cmd_gibbs->add_option("--chains", gibbs.chains, "coupled chains per row");
  cmd_gibbs->add_option("--cap", gibbs.cap, "step cap (censoring)");

  MalaConfig mala;
  auto* cmd_mala = app.add_subcommand("mala", "coupled preconditioned MALA meeting times");
  add_common(cmd_mala, mala.common);
  cmd_mala->add_option("--dim", mala.dim, "parameter dimension");
  cmd_mala->add_option("--n-obs", mala.n_obs, "observations in the synthetic data");
  cmd_mala->add_option("--n-grid", mala.n_grid, "ensemble size grid");
  cmd_mala->add_option("--runs", mala.runs, "coupled runs per row");
  cmd_mala->add_option("--cap", mala.cap, "step cap (censoring)");
  cmd_mala->add_option("--step-size", mala.step_size, "proposal step size");
  cmd_mala->add_option("--data-seed", mala.data_seed, "seed of the synthetic dataset");

  GaussBenchConfig gauss;
  auto* cmd_gauss = app.add_subcommand("gauss-bench", "dominating-covariance benchmark");
  add_common(cmd_gauss, gauss.common);
  cmd_gauss->add_option("--d", gauss.d, "dimension");
  cmd_gauss->add_option("--pairs", gauss.pairs, "number of random covariance pairs");
  cmd_gauss->add_option("--n-grid", gauss.n_grid, "ensemble size grid");
  cmd_gauss->add_option("--reps", gauss.reps, "draws per cell");

  CostModelConfig cost;
  auto* cmd_cost = app.add_subcommand("cost-model", "parallel cost model surface");
  add_common(cmd_cost, cost.common);
  cmd_cost->add_option("--k-grid", cost.k_grid, "per-round cost grid");
  cmd_cost->add_option("--p-grid", cost.p_grid, "acceptance probability grid");
  cmd_cost->add_option("--m-grid", cost.m_grid, "parallel lane grid");
  cmd_cost->add_option("--n-grid", cost.n_grid, "ensemble size grid");
  cmd_cost->add_option("--reps", cost.reps, "Monte Carlo replications");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_tails->parsed()) return run_tails(tails);
    if (cmd_res->parsed()) return run_resampling(res);
    if (cmd_gibbs->parsed()) return run_gibbs(gibbs);
    if (cmd_mala->parsed()) return run_mala(mala);
    if (cmd_gauss->parsed()) return run_gauss_bench(gauss);
    if (cmd_cost->parsed()) return run_cost_model(cost);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
