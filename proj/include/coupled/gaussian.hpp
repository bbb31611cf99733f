#ifndef COUPLED_GAUSSIAN_HPP
#define COUPLED_GAUSSIAN_HPP

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <memory>
#include <utility>

#include "coupled/couplings.hpp"
#include "coupled/errors.hpp"
#include "coupled/rejection.hpp"
#include "coupled/types.hpp"

namespace coupled {

/// Mean and covariance of a multivariate Gaussian, with the lower Cholesky
/// factor and log-determinant cached at construction.
struct GaussianParams {
  Vector mu;
  Matrix sigma;
  Matrix chol;
  double log_det = 0.0;

  GaussianParams(Vector mean, Matrix covariance)
      : mu(std::move(mean)), sigma(std::move(covariance)) {
    Eigen::LLT<Matrix> llt(sigma);
    if (llt.info() != Eigen::Success) {
      throw NotPositiveDefinite("GaussianParams: covariance is not SPD");
    }
    chol = llt.matrixL();
    log_det = 2.0 * chol.diagonal().array().log().sum();
  }

  Eigen::Index dim() const { return mu.size(); }

  double log_pdf(const Vector& x) const {
    Vector z = chol.triangularView<Eigen::Lower>().solve(x - mu);
    return -0.5 * (static_cast<double>(dim()) * std::log(2.0 * M_PI) +
                   log_det + z.squaredNorm());
  }

  Vector sample(RngStream& rng) const {
    return mu + chol * standard_normal_vector(rng, dim());
  }

  Density density() const {
    auto self = std::make_shared<GaussianParams>(*this);
    Density d;
    d.dim = static_cast<int>(dim());
    d.log_pdf = [self](const Vector& x) { return self->log_pdf(x); };
    d.sample = [self](RngStream& rng) { return self->sample(rng); };
    return d;
  }
};

namespace detail {

inline Matrix symmetrize(const Matrix& a) { return 0.5 * (a + a.transpose()); }

inline Matrix spd_inverse(const Matrix& a, const char* what) {
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite(what);
  return llt.solve(Matrix::Identity(a.rows(), a.cols()));
}

inline void check_spd(const Matrix& a, const char* what) {
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite(what);
}

}  // namespace detail

/// Isotropic dominating covariance: the largest eigenvalue across both
/// spectra times the identity. Always satisfies the precision ordering
/// sigma_hat^{-1} <= sigma_p^{-1} and <= sigma_q^{-1}.
inline Matrix sigma_max(const Matrix& sp, const Matrix& sq) {
  detail::check_spd(sp, "sigma_max: sp is not SPD");
  detail::check_spd(sq, "sigma_max: sq is not SPD");
  Eigen::SelfAdjointEigenSolver<Matrix> ep(detail::symmetrize(sp));
  Eigen::SelfAdjointEigenSolver<Matrix> eq(detail::symmetrize(sq));
  if (ep.info() != Eigen::Success || eq.info() != Eigen::Success) {
    throw EigDecompositionFailed("sigma_max: eigendecomposition failed");
  }
  double lam = std::max(ep.eigenvalues().maxCoeff(), eq.eigenvalues().maxCoeff());
  return lam * Matrix::Identity(sp.rows(), sp.cols());
}

/// Closed-form maximizer of log det(sigma_hat^{-1}) over dominating
/// precisions: with C the lower Cholesky factor of sq and
/// V D V^T = C^T sp^{-1} C, the optimum is C V U V^T C^T where
/// U_ii = 1 / min(1, D_ii).
inline Matrix sigma_opt(const Matrix& sp, const Matrix& sq) {
  Eigen::LLT<Matrix> llt_q(sq);
  if (llt_q.info() != Eigen::Success) {
    throw NotPositiveDefinite("sigma_opt: sq is not SPD");
  }
  Eigen::LLT<Matrix> llt_p(sp);
  if (llt_p.info() != Eigen::Success) {
    throw NotPositiveDefinite("sigma_opt: sp is not SPD");
  }
  Matrix c = llt_q.matrixL();
  Matrix b = detail::symmetrize(c.transpose() * llt_p.solve(c));
  Eigen::SelfAdjointEigenSolver<Matrix> eig(b);
  if (eig.info() != Eigen::Success) {
    throw EigDecompositionFailed("sigma_opt: eigendecomposition failed");
  }
  Vector u = eig.eigenvalues();
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    u[i] = 1.0 / std::min(1.0, u[i]);
  }
  Matrix v = eig.eigenvectors();
  Matrix inner = v * u.asDiagonal() * v.transpose();
  return detail::symmetrize(c * inner * c.transpose());
}

/// Ratio bound M(target, N(mu, sigma_hat)) as the square-rooted determinant
/// ratio, after checking the precision (Loewner) ordering with eigenvalue
/// tolerance 1e-9 relative to the precision scale.
inline double gaussian_m_constant(const GaussianParams& target,
                                  const Matrix& dominating_sigma) {
  Matrix prec_t = detail::spd_inverse(
      target.sigma, "gaussian_m_constant: target covariance is not SPD");
  Eigen::LLT<Matrix> llt_hat(dominating_sigma);
  if (llt_hat.info() != Eigen::Success) {
    throw NotPositiveDefinite(
        "gaussian_m_constant: dominating covariance is not SPD");
  }
  Matrix prec_hat =
      llt_hat.solve(Matrix::Identity(dominating_sigma.rows(),
                                     dominating_sigma.cols()));
  Eigen::SelfAdjointEigenSolver<Matrix> diff(
      detail::symmetrize(prec_t - prec_hat));
  if (diff.info() != Eigen::Success) {
    throw EigDecompositionFailed("gaussian_m_constant: eig of precision gap");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> scale(detail::symmetrize(prec_t));
  double tol = 1e-9 * std::max(1.0, scale.eigenvalues().cwiseAbs().maxCoeff());
  if (diff.eigenvalues().minCoeff() < -tol) {
    throw DominationViolated(
        "gaussian_m_constant: dominating precision is not below the target "
        "precision");
  }
  Matrix l_hat = llt_hat.matrixL();
  double log_det_hat = 2.0 * l_hat.diagonal().array().log().sum();
  return std::exp(0.5 * (log_det_hat - target.log_det));
}

/// Intermediate quantities and the resulting coupling probability bounds for
/// the Gaussian rejection coupler with a reflection-maximal dominating pair.
struct GaussianBounds {
  double lower = 0.0;
  double upper = 1.0;
  Matrix h;
  Vector alpha_vec;
  double beta = 0.0;
  Vector delta_vec;
  double gamma = 0.0;
};

/// Lower and upper bounds on P(x == y) for the Gaussian rejection coupler
/// with dominating covariance sigma_hat. The two bounds coincide when
/// sigma_p = sigma_q = sigma_hat. With equal means the discriminating
/// half-space degenerates; both orthant probabilities are then 1/2, the
/// continuous limit along mu_q -> mu_p.
inline GaussianBounds gaussian_coupling_bounds(const GaussianParams& p,
                                               const GaussianParams& q,
                                               const Matrix& sigma_hat) {
  Eigen::LLT<Matrix> llt_hat(sigma_hat);
  if (llt_hat.info() != Eigen::Success) {
    throw NotPositiveDefinite("gaussian_coupling_bounds: sigma_hat not SPD");
  }
  const Eigen::Index d = p.dim();
  Matrix eye = Matrix::Identity(d, d);
  Matrix prec_p = detail::spd_inverse(p.sigma, "bounds: sigma_p not SPD");
  Matrix prec_q = detail::spd_inverse(q.sigma, "bounds: sigma_q not SPD");
  Matrix prec_hat = llt_hat.solve(eye);
  Matrix l_hat = llt_hat.matrixL();
  double log_det_hat = 2.0 * l_hat.diagonal().array().log().sum();

  Matrix a = detail::symmetrize(prec_p + prec_q - prec_hat);
  Eigen::LLT<Matrix> llt_a(a);
  if (llt_a.info() != Eigen::Success) {
    throw SingularH(
        "gaussian_coupling_bounds: precision combination is singular");
  }
  Matrix h = detail::symmetrize(llt_a.solve(eye));
  Matrix l_a = llt_a.matrixL();
  double log_det_h = -2.0 * l_a.diagonal().array().log().sum();

  GaussianBounds out;
  out.h = h;
  out.alpha_vec = h * (prec_p * p.mu + (prec_q - prec_hat) * q.mu);
  out.beta = p.mu.dot(prec_p * p.mu) + q.mu.dot((prec_q - prec_hat) * q.mu) -
             out.alpha_vec.dot(a * out.alpha_vec);
  out.delta_vec = h * (prec_q * q.mu + (prec_p - prec_hat) * p.mu);
  out.gamma = q.mu.dot(prec_q * q.mu) + p.mu.dot((prec_p - prec_hat) * p.mu) -
              out.delta_vec.dot(a * out.delta_vec);

  Vector gap = p.mu - q.mu;
  double det_ratio = std::exp(0.5 * (log_det_h - log_det_hat));
  double f_alpha = 0.5;
  double f_delta = 0.5;
  if (gap.norm() > 0.0) {
    Vector s = prec_hat * gap;
    Eigen::LLT<Matrix> llt_h(h);
    if (llt_h.info() != Eigen::Success) {
      throw SingularH("gaussian_coupling_bounds: H is not SPD");
    }
    Matrix l_h = llt_h.matrixL();
    double denom = (l_h.transpose() * s).norm();
    double base = p.mu.dot(prec_hat * p.mu) - q.mu.dot(prec_hat * q.mu);
    f_alpha = std_normal_cdf(0.5 * (base - 2.0 * out.alpha_vec.dot(s)) / denom);
    f_delta = std_normal_cdf(0.5 * (base - 2.0 * out.delta_vec.dot(s)) / denom);
  }
  out.lower = det_ratio * (std::exp(-0.5 * out.beta) * f_alpha +
                           std::exp(-0.5 * out.gamma) * (1.0 - f_delta));
  Vector z = l_hat.triangularView<Eigen::Lower>().solve(gap);
  out.upper = 2.0 * std_normal_cdf(-0.5 * z.norm());
  return out;
}

enum class DominatingStrategy { kOpt, kMax };

/// Ready-made Gaussian dominating pair: a reflection-maximal coupling of
/// N(mu_p, sigma_hat) and N(mu_q, sigma_hat) with determinant-ratio bounds.
inline DominatingPair gaussian_dominating_pair(const GaussianParams& p,
                                               const GaussianParams& q,
                                               const Matrix& sigma_hat) {
  DominatingPair dom;
  auto p_hat = std::make_shared<GaussianParams>(p.mu, sigma_hat);
  auto q_hat = std::make_shared<GaussianParams>(q.mu, sigma_hat);
  dom.p_hat = p_hat->density();
  dom.q_hat = q_hat->density();
  dom.m_p = gaussian_m_constant(p, sigma_hat);
  dom.m_q = gaussian_m_constant(q, sigma_hat);
  auto coupler =
      std::make_shared<detail::ReflectionCoupler>(p.mu, q.mu, sigma_hat);
  dom.sample_coupled = [coupler](RngStream& rng) { return (*coupler)(rng); };
  return dom;
}

inline DominatingPair gaussian_dominating_pair(
    const GaussianParams& p, const GaussianParams& q,
    DominatingStrategy strategy = DominatingStrategy::kOpt) {
  Matrix sigma_hat = strategy == DominatingStrategy::kOpt
                         ? sigma_opt(p.sigma, q.sigma)
                         : sigma_max(p.sigma, q.sigma);
  return gaussian_dominating_pair(p, q, sigma_hat);
}

}  // namespace coupled

#endif  // COUPLED_GAUSSIAN_HPP
