#ifndef COUPLED_TYPES_HPP
#define COUPLED_TYPES_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "coupled/errors.hpp"
#include "coupled/math.hpp"
#include "coupled/rng.hpp"

namespace coupled {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline Vector point1(double x) {
  Vector v(1);
  v[0] = x;
  return v;
}

inline Vector standard_normal_vector(RngStream& rng, Eigen::Index dim) {
  Vector z(dim);
  for (Eigen::Index i = 0; i < dim; ++i) z[i] = rng.normal();
  return z;
}

/// A distribution the samplers can both evaluate (in log space, w.r.t. the
/// implicit common reference measure) and draw from.
struct Density {
  std::function<double(const Vector&)> log_pdf;
  std::function<Vector(RngStream&)> sample;
  int dim = 1;
};

/// One draw (x, y) from a coupling. `met` is true exactly when x and y are
/// bitwise identical; `steps` is the number of proposal rounds consumed.
struct CoupledDraw {
  Vector x;
  Vector y;
  bool met = false;
  std::int64_t steps = 1;
};

/// A draw from a dominating coupling, before any accept/reject decision.
struct ProposalDraw {
  Vector x;
  Vector y;
  bool met = false;
};

/// Nonnegative weights together with their normalization.
struct CategoricalWeights {
  std::vector<double> w;
  std::vector<double> normalized;

  CategoricalWeights() = default;

  explicit CategoricalWeights(std::vector<double> weights)
      : w(std::move(weights)) {
    double total = pairwise_sum(w);
    if (!(total > 0.0)) {
      throw ZeroWeights("CategoricalWeights: weights sum to zero");
    }
    normalized.resize(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] < 0.0) {
        throw DomainError("CategoricalWeights: negative weight");
      }
      normalized[i] = w[i] / total;
    }
  }

  std::size_t size() const { return w.size(); }
};

}  // namespace coupled

#endif  // COUPLED_TYPES_HPP
