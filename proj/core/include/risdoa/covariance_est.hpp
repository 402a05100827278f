#pragma once

// Covariance-domain preprocessing: sample covariance of Y, white-noise
// variance estimation by rank-1 + scaled-identity fitting, and removal of
// the RIS measurement operator.

#include <stdexcept>
#include <string>
#include <vector>

#include "risdoa/linalg.hpp"
#include "risdoa/scene_sim.hpp"

namespace risdoa {

/// R_Y = Y Y^H (L x L), Hermitian PSD. No 1/M normalisation: the noise
/// floor of R_Y is therefore M times the per-entry noise variance.
class SampleCovariance {
 public:
  SampleCovariance() = default;

  /// Validates that `r_y` is square and Hermitian, then symmetrises it.
  static SampleCovariance from_matrix(const CMatrix& r_y);

  const CMatrix& matrix() const { return r_y_; }
  Index dim() const { return r_y_.rows(); }

 private:
  explicit SampleCovariance(CMatrix r_y) : r_y_(std::move(r_y)) {}
  CMatrix r_y_;
};

SampleCovariance sample_covariance(const CMatrix& y);
SampleCovariance sample_covariance(const ObservationMatrix& obs);

struct NoiseOptions {
  int max_iter = 100;   // I1
  double tol = 1e-8;    // eps1, relative change of sigma0
};

struct NoiseEstimate {
  double sigma0 = 0.0;
  CVector c;            // rank-1 signal factor, length L
  int iterations = 0;
  bool converged = false;
  std::vector<double> history;  // sigma0 after each iteration
};

/// Alternates the closed-form updates
///   c      <- u1 * sqrt(lambda1(R_Y - sigma0 I))   (clamped at 0)
///   sigma0 <- (tr R_Y - ||c||^2) / L
/// from sigma0 = 0 until the relative change drops below `tol` or
/// `max_iter` iterations have run. The fixed point is
/// sigma0 = (tr R_Y - lambda_max) / (L - 1).
NoiseEstimate estimate_noise_variance(const SampleCovariance& r_y, const NoiseOptions& opts = {});

/// Raised when B does not have full row rank N.
class RankDeficientError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// N x N RIS-domain covariance with the noise floor removed.
struct RisCovariance {
  CMatrix r_hat;
  Index dim() const { return r_hat.rows(); }
};

/// Moore-Penrose pseudoinverse of B^T (N x L) for an N x L measurement
/// matrix B. Throws RankDeficientError when sigma_min < 1e-10 sigma_max.
CMatrix transpose_pinv(const CMatrix& b);

/// R_hat = (B^T)^+ (R_Y - sigma0 I) (B^*)^+, symmetrised.
RisCovariance denoised_ris_covariance(const SampleCovariance& r_y, double sigma0, const CMatrix& b);

}  // namespace risdoa
