#include "risdoa/covariance_est.hpp"

#include <cmath>
#include <sstream>

namespace risdoa {

SampleCovariance SampleCovariance::from_matrix(const CMatrix& r_y) {
  if (r_y.rows() != r_y.cols() || r_y.rows() == 0) {
    throw std::invalid_argument("SampleCovariance: matrix must be square and nonempty");
  }
  if (!is_hermitian(r_y)) {
    throw std::invalid_argument("SampleCovariance: matrix is not Hermitian");
  }
  return SampleCovariance(hermitian_part(r_y));
}

SampleCovariance sample_covariance(const CMatrix& y) {
  if (y.size() == 0) throw std::invalid_argument("sample_covariance: empty observation matrix");
  return SampleCovariance::from_matrix(y * y.adjoint());
}

SampleCovariance sample_covariance(const ObservationMatrix& obs) {
  return sample_covariance(obs.y);
}

NoiseEstimate estimate_noise_variance(const SampleCovariance& r_y, const NoiseOptions& opts) {
  const CMatrix& r = r_y.matrix();
  const Index l = r.rows();
  if (l < 2) throw std::invalid_argument("estimate_noise_variance: need L >= 2");
  if (!is_hermitian(r)) throw std::invalid_argument("estimate_noise_variance: R_Y not Hermitian");
  if (opts.max_iter < 1 || !(opts.tol > 0.0)) {
    throw std::invalid_argument("estimate_noise_variance: need max_iter >= 1 and tol > 0");
  }

  // R_Y - sigma0 I shares eigenvectors with R_Y; only the leading
  // eigenvalue shifts, so one decomposition serves every iteration.
  const HermitianEigen eig = eigh_descending(r);
  const double trace = r.trace().real();
  const double lambda1 = eig.values(0);
  const CVector u1 = eig.vectors.col(0);

  NoiseEstimate est;
  est.c = CVector::Zero(l);
  double sigma_prev = 0.0;
  for (int i = 1; i <= opts.max_iter; ++i) {
    const double sigma11 = std::max(lambda1 - sigma_prev, 0.0);
    est.c = u1 * std::sqrt(sigma11);
    const double sigma = std::max((trace - est.c.squaredNorm()) / static_cast<double>(l), 0.0);
    est.history.push_back(sigma);
    est.iterations = i;

    const double change = std::abs(sigma - sigma_prev);
    sigma_prev = sigma;
    if (change == 0.0 || (est.history.size() > 1 && change < opts.tol * std::abs(est.history[est.history.size() - 2]))) {
      est.converged = true;
      break;
    }
  }
  est.sigma0 = sigma_prev;
  return est;
}

CMatrix transpose_pinv(const CMatrix& b) {
  const CMatrix bt = b.transpose();  // L x N
  Eigen::JacobiSVD<CMatrix> svd(bt, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& sv = svd.singularValues();
  const Index n = bt.cols();
  if (sv.size() < n || sv(sv.size() - 1) < 1e-10 * sv(0)) {
    std::ostringstream msg;
    msg << "measurement matrix B (" << b.rows() << "x" << b.cols() << ") has numerical rank below N="
        << n;
    if (b.cols() < b.rows()) msg << " (need L >= N)";
    throw RankDeficientError(msg.str());
  }
  return svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
}

RisCovariance denoised_ris_covariance(const SampleCovariance& r_y, double sigma0, const CMatrix& b) {
  if (b.cols() != r_y.dim()) {
    throw std::invalid_argument("denoised_ris_covariance: B must be N x L with L = dim(R_Y)");
  }
  if (!(sigma0 >= 0.0)) throw std::invalid_argument("denoised_ris_covariance: sigma0 < 0");
  const CMatrix p = transpose_pinv(b);  // N x L
  CMatrix centred = r_y.matrix();
  centred.diagonal().array() -= sigma0;
  return RisCovariance{hermitian_part(p * centred * p.adjoint())};
}

}  // namespace risdoa
