// Small density builders for the test suites.
#ifndef COUPLED_TESTS_DENSITIES_HPP
#define COUPLED_TESTS_DENSITIES_HPP

#include <cmath>

#include "coupled/math.hpp"
#include "coupled/types.hpp"

namespace test_densities {

inline coupled::Density normal1d(double mu, double sd) {
  coupled::Density d;
  d.dim = 1;
  d.log_pdf = [mu, sd](const coupled::Vector& x) {
    double z = (x[0] - mu) / sd;
    return -0.5 * z * z - std::log(sd) - 0.5 * std::log(2.0 * M_PI);
  };
  d.sample = [mu, sd](coupled::RngStream& rng) {
    return coupled::point1(mu + sd * rng.normal());
  };
  return d;
}

inline coupled::Density uniform1d(double a, double b) {
  coupled::Density d;
  d.dim = 1;
  d.log_pdf = [a, b](const coupled::Vector& x) {
    if (x[0] < a || x[0] > b) {
      return -std::numeric_limits<double>::infinity();
    }
    return -std::log(b - a);
  };
  d.sample = [a, b](coupled::RngStream& rng) {
    return coupled::point1(a + (b - a) * rng.uniform());
  };
  return d;
}

// Two-component Gaussian mixture.
struct Mixture1d {
  double weight;  // of the first component
  double mu1, sd1, mu2, sd2;

  double cdf(double x) const {
    return weight * coupled::std_normal_cdf((x - mu1) / sd1) +
           (1.0 - weight) * coupled::std_normal_cdf((x - mu2) / sd2);
  }

  coupled::Density density() const {
    Mixture1d m = *this;
    coupled::Density d;
    d.dim = 1;
    d.log_pdf = [m](const coupled::Vector& x) {
      auto comp = [&](double mu, double sd) {
        double z = (x[0] - mu) / sd;
        return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * M_PI));
      };
      return std::log(m.weight * comp(m.mu1, m.sd1) +
                      (1.0 - m.weight) * comp(m.mu2, m.sd2));
    };
    d.sample = [m](coupled::RngStream& rng) {
      double mu = m.mu1, sd = m.sd1;
      if (rng.uniform() > m.weight) {
        mu = m.mu2;
        sd = m.sd2;
      }
      return coupled::point1(mu + sd * rng.normal());
    };
    return d;
  }
};

inline std::function<double(double)> normal_cdf(double mu, double sd) {
  return [mu, sd](double x) { return coupled::std_normal_cdf((x - mu) / sd); };
}

// Ratio bound sup p / gamma for two 1-D Gaussians with sd_g > sd_p.
inline double normal1d_ratio_bound(double mu_p, double sd_p, double mu_g,
                                   double sd_g) {
  double gap = mu_p - mu_g;
  return (sd_g / sd_p) *
         std::exp(0.5 * gap * gap / (sd_g * sd_g - sd_p * sd_p));
}

}  // namespace test_densities

#endif  // COUPLED_TESTS_DENSITIES_HPP
