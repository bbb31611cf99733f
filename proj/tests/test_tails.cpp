#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "coupled/tails.hpp"
#include "support/oracles.hpp"
#include "support/stats.hpp"

using coupled::RngStream;
using coupled::TailCouplingTables;

namespace {

double exp_pdf(double x, double shift, double rate) {
  return x < shift ? 0.0 : rate * std::exp(-rate * (x - shift));
}

// Truncated-normal CDF oracle built from the continued-fraction tail oracle.
std::function<double(double)> truncated_normal_cdf_oracle(double mu) {
  double mass = test_oracles::normal_upper_tail_oracle(mu);
  return [mu, mass](double x) {
    if (x <= mu) return 0.0;
    return 1.0 - test_oracles::normal_upper_tail_oracle(x) / mass;
  };
}

}  // namespace

TEST(OptimalRate, ClosedFormValues) {
  EXPECT_DOUBLE_EQ(coupled::optimal_rate(0.0), 1.0);
  EXPECT_NEAR(coupled::optimal_rate(2.0), 0.5 * (2.0 + std::sqrt(8.0)), 1e-15);
  EXPECT_GT(coupled::optimal_rate(6.5), coupled::optimal_rate(6.0));
}

TEST(TailAcceptanceRatio, PeaksAtTheRate) {
  double m = 6.0;
  double a = coupled::optimal_rate(m);
  EXPECT_DOUBLE_EQ(coupled::tail_acceptance_ratio(a, m), 1.0);
  EXPECT_NEAR(coupled::tail_acceptance_ratio(a + 1.0, m), std::exp(-0.5),
              1e-15);
  EXPECT_THROW(coupled::tail_acceptance_ratio(5.9, 6.0), coupled::DomainError);
}

TEST(TailAcceptanceRatio, SamplerEfficiencyIsHigh) {
  // Mean acceptance ratio under the proposal beats 0.9 for mu = 6.
  double mu = 6.0;
  coupled::TranslatedExponential prop =
      coupled::TranslatedExponential::optimal(mu);
  RngStream rng(61);
  double acc = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    acc += coupled::tail_acceptance_ratio(prop.sample(rng), mu);
  }
  EXPECT_GT(acc / n, 0.9);
}

TEST(BuildTailTables, OverlapApproachesOneAsTruncationsMerge) {
  TailCouplingTables t = coupled::build_tail_tables(6.0, 6.0 + 1e-4);
  EXPECT_GT(t.zc, 0.999);
  EXPECT_THROW(coupled::build_tail_tables(6.0, 6.0), coupled::DegenerateGap);
  EXPECT_THROW(coupled::build_tail_tables(6.5, 6.0), coupled::DegenerateGap);
}

TEST(BuildTailTables, OverlapMatchesQuadrature) {
  TailCouplingTables t = coupled::build_tail_tables(6.0, 7.0);
  double am = t.rate_mu, ae = t.rate_eta;
  auto min_prop = [&](double x) {
    return std::min(exp_pdf(x, 6.0, am), exp_pdf(x, 7.0, ae));
  };
  double quad = test_oracles::romberg(min_prop, 7.0, 7.0 + 60.0 / am, 24, 1e-12);
  EXPECT_NEAR(t.zc, quad, 1e-8);
}

TEST(BuildTailTables, MassIdentitiesOnRandomGrid) {
  RngStream rng(62);
  for (int k = 0; k < 100; ++k) {
    double mu = 5.0 + 6.0 * rng.uniform();
    double eta = mu + 1e-3 + (12.0 - mu - 1e-3) * rng.uniform();
    TailCouplingTables t = coupled::build_tail_tables(mu, eta);
    EXPECT_NEAR(t.zc, t.zc1 + t.zc2, 1e-12);
    EXPECT_NEAR(t.zp, t.zp1 + t.zp2, 1e-12);
    EXPECT_NEAR(t.zc + t.zp, 1.0, 1e-12);
    EXPECT_NEAR(t.zc + t.zq, 1.0, 1e-12);
    EXPECT_LT(std::fabs(t.zp_zq_gap), 1e-12);
    EXPECT_GE(t.gamma_cross, eta);
    EXPECT_GT(t.zc, 0.0);
    EXPECT_LT(t.zc, 1.0);
  }
}

TEST(TailTables, ClosedFormInverseCdfRoundTrips) {
  TailCouplingTables t = coupled::build_tail_tables(6.0, 6.5);
  double am = t.rate_mu, ae = t.rate_eta;
  auto cdf_c1 = [&](double x) {
    return (std::exp(-am * (t.eta - t.mu)) - std::exp(-am * (x - t.mu))) /
           t.zc1;
  };
  auto cdf_c2 = [&](double x) {
    return 1.0 - std::exp(-ae * (x - t.gamma_cross));
  };
  auto cdf_p2 = [&](double x) {
    return (1.0 - std::exp(-am * (x - t.mu))) / t.zp2;
  };
  for (double u = 0.001; u < 1.0; u += 0.007) {
    EXPECT_NEAR(cdf_c1(t.c1_inverse(u)), u, 1e-10);
    EXPECT_NEAR(cdf_c2(t.c2_inverse(u)), u, 1e-10);
    EXPECT_NEAR(cdf_p2(t.p_residual2_inverse(u)), u, 1e-10);
  }
}

TEST(TailTables, RootBasedInverseCdfRoundTrips) {
  TailCouplingTables t = coupled::build_tail_tables(6.0, 6.5);
  double am = t.rate_mu, ae = t.rate_eta;
  auto p_resid_cdf = [&](double x) {
    // integral of (p_hat - min(p_hat, q_hat)) up to x, normalized.
    double acc = 0.0;
    if (x >= t.mu) {
      acc += 1.0 - std::exp(-am * (std::min(x, t.eta) - t.mu));
    }
    if (x >= t.gamma_cross) {
      acc += (std::exp(-am * (t.gamma_cross - t.mu)) -
              std::exp(-am * (x - t.mu))) -
             (std::exp(-ae * (t.gamma_cross - t.eta)) -
              std::exp(-ae * (x - t.eta)));
    }
    return acc / t.zp;
  };
  auto q_resid_cdf = [&](double x) {
    double acc = (1.0 - std::exp(-ae * (x - t.eta))) -
                 (std::exp(-am * (t.eta - t.mu)) -
                  std::exp(-am * (x - t.mu)));
    return acc / t.zq;
  };
  for (double u = 0.001; u < 1.0; u += 0.007) {
    EXPECT_NEAR(p_resid_cdf(t.p_residual_inverse(u)), u, 1e-8);
    EXPECT_NEAR(q_resid_cdf(t.q_residual_inverse(u)), u, 1e-8);
  }
}

TEST(SampleMaxCoupledExponentials, MetDrawsLiveAboveEta) {
  TailCouplingTables t = coupled::build_tail_tables(6.0, 6.5);
  RngStream rng(63);
  for (int i = 0; i < 20000; ++i) {
    coupled::ProposalDraw d = coupled::sample_max_coupled_exponentials(t, rng);
    if (d.met) {
      ASSERT_EQ(d.x[0], d.y[0]);
      ASSERT_GE(d.x[0], t.eta);
    } else {
      ASSERT_GE(d.x[0], t.mu);
      ASSERT_GE(d.y[0], t.eta);
      ASSERT_LE(d.y[0], t.gamma_cross + 1e-9);
    }
  }
}

TEST(SampleMaxCoupledExponentials, MeetsWithTableMass) {
  TailCouplingTables t = coupled::build_tail_tables(6.0, 6.5);
  RngStream rng(64);
  const int n = 100000;
  std::int64_t met = 0;
  for (int i = 0; i < n; ++i) {
    met += coupled::sample_max_coupled_exponentials(t, rng).met ? 1 : 0;
  }
  double rate = static_cast<double>(met) / n;
  EXPECT_NEAR(rate, t.zc, 3.0 * test_stats::proportion_se(t.zc, n));
}

TEST(SampleMaxCoupledExponentials, MarginalsAreTranslatedExponentials) {
  TailCouplingTables t = coupled::build_tail_tables(6.0, 6.5);
  RngStream rng(65);
  const int n = 100000;
  std::vector<double> xs(n), ys(n);
  for (int i = 0; i < n; ++i) {
    coupled::ProposalDraw d = coupled::sample_max_coupled_exponentials(t, rng);
    xs[i] = d.x[0];
    ys[i] = d.y[0];
  }
  double am = t.rate_mu, ae = t.rate_eta;
  EXPECT_TRUE(test_stats::ks_test(xs, [&](double x) {
    return x < t.mu ? 0.0 : 1.0 - std::exp(-am * (x - t.mu));
  }));
  EXPECT_TRUE(test_stats::ks_test(ys, [&](double y) {
    return y < t.eta ? 0.0 : 1.0 - std::exp(-ae * (y - t.eta));
  }));
}

TEST(CoupledTailSampler, EqualTruncationsEssentiallyAlwaysMeet) {
  RngStream rng(66);
  const int n = 20000;
  std::int64_t met = 0;
  for (int i = 0; i < n; ++i) {
    met += coupled::coupled_tail_sampler(6.0, 6.0, 1, rng).met ? 1 : 0;
  }
  EXPECT_GE(static_cast<double>(met) / n, 0.95);
}

TEST(CoupledTailSampler, TracksMaximalOverlapAcrossTheGrid) {
  RngStream rng(67);
  const int n = 20000;
  for (double eta : {6.1, 6.3, 6.5, 6.7, 7.0}) {
    std::int64_t met = 0;
    for (int i = 0; i < n; ++i) {
      met += coupled::coupled_tail_sampler(6.0, eta, 1, rng).met ? 1 : 0;
    }
    double rate = static_cast<double>(met) / n;
    double overlap = coupled::tail_overlap_numeric(6.0, eta);
    EXPECT_NEAR(rate, overlap, 0.02);
    EXPECT_LE(rate, overlap + 3.0 * test_stats::proportion_se(overlap, n));
  }
}

TEST(CoupledTailSampler, MarginalPassesTruncatedNormalGof) {
  RngStream rng(68);
  const int n = 100000;
  std::vector<double> xs(n), ys(n);
  for (int i = 0; i < n; ++i) {
    coupled::CoupledDraw d = coupled::coupled_tail_sampler(6.0, 6.4, 1, rng);
    xs[i] = d.x[0];
    ys[i] = d.y[0];
  }
  EXPECT_TRUE(test_stats::ks_test(xs, truncated_normal_cdf_oracle(6.0)));
  EXPECT_TRUE(test_stats::ks_test(ys, truncated_normal_cdf_oracle(6.4)));
}

TEST(CoupledTailSampler, RunTimeStaysStableAsTruncationsMerge) {
  RngStream rng(69);
  const int n = 20000;
  auto tau_var = [&](double eta) {
    std::vector<double> taus(n);
    for (int i = 0; i < n; ++i) {
      taus[i] = static_cast<double>(
          coupled::coupled_tail_sampler(6.0, eta, 1, rng).steps);
    }
    return test_stats::variance(taus);
  };
  double narrow = tau_var(6.01);
  double wide = tau_var(7.0);
  EXPECT_LE(narrow, 2.0 * wide + 1e-3);
}

TEST(CoupledTailSampler, SwapsOrderedTruncationsBack) {
  RngStream rng(70);
  for (int i = 0; i < 5000; ++i) {
    coupled::CoupledDraw d = coupled::coupled_tail_sampler(6.5, 6.0, 1, rng);
    ASSERT_GE(d.x[0], 6.5);  // x follows the first argument's tail
    ASSERT_GE(d.y[0], 6.0);
  }
  EXPECT_THROW(coupled::coupled_tail_sampler(-1.0, 6.0, 1, rng),
               coupled::DomainError);
}

TEST(CoupledTailSampler, EnsembleVariantKeepsMarginals) {
  RngStream rng(71);
  const int n = 30000;
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = coupled::coupled_tail_sampler(6.0, 6.3, 8, rng).x[0];
  }
  EXPECT_TRUE(test_stats::ks_test(xs, truncated_normal_cdf_oracle(6.0)));
}
