#pragma once

// Covariance-domain atomic norm minimisation
//
//   min  tr T(mu) + tr W + gamma ||R - R_hat||_F^2
//   s.t. Z = [[W, R^H], [R, T(mu)]],  Z >= 0
//
// solved by ADMM on the split (mu, W, R) / Z with scaled dual Pi.

#include <functional>

#include "risdoa/covariance_est.hpp"
#include "risdoa/linalg.hpp"

namespace risdoa {

/// First column of a Hermitian Toeplitz matrix. mu(0) is real.
struct ToeplitzParam {
  CVector mu;
  Index dim() const { return mu.size(); }
};

/// T(mu)(i, j) = mu(i - j) for i >= j, conj(mu(j - i)) otherwise.
CMatrix toeplitz_build(const ToeplitzParam& p);

/// Adjoint of toeplitz_build under <X, Y> = Re tr(X^H Y):
/// w(0) = tr Q, w(k) = sum of k-th subdiagonal + conj(sum of k-th superdiagonal).
CVector toeplitz_adjoint(const CMatrix& q);

/// The pairing that makes toeplitz_adjoint an adjoint: Re sum conj(w_k) mu_k.
double toeplitz_pairing(const CVector& w, const CVector& mu);

/// Inverse of T* T: [1/N, 1/(2(N-1)), ..., 1/2].
RVector toeplitz_scale(Index n);

struct AdmmIterationRecord {
  int iter;
  double primal_res;
  double dual_res;
  double objective;
};

struct AdmmConfig {
  double tau = 1.0;     // augmented Lagrangian penalty
  double gamma = 1e4;   // data-fit weight
  int max_iter = 5000;
  double eps_abs = 1e-6;
  double eps_rel = 1e-5;
  // W-step coefficient. 2 gives the closed form
  // W = Z0 - (2/tau)(Pi0 - I); 1 is the stationarity solution
  // W = Z0 + (1/tau)(Pi0 - I).
  int w_update_factor = 1;
  // Solve the equivalent problem on R_hat / c with gamma * c, where
  // c = ||R_hat||_F / N, and map the iterates back. Same minimiser, but
  // tau = 1 is then matched to the data scale.
  bool normalize = true;
  // Optional per-iteration diagnostics.
  std::function<void(const AdmmIterationRecord&)> on_iteration;

  void validate() const;

  /// 10 / sigma0, or 1e4 when sigma0 is zero or below 1e-12 * scale
  /// (round-off relative to the covariance level `scale`).
  static double default_gamma(double sigma0, double scale);
};

struct AdmmState {
  ToeplitzParam mu;
  CMatrix w;   // N x N Hermitian
  CMatrix r;   // N x N
  CMatrix z;   // 2N x 2N Hermitian PSD
  CMatrix pi;  // 2N x 2N Hermitian dual
  int iter = 0;
  double primal_res = 0.0;
  double dual_res = 0.0;
  bool converged = false;

  /// Cold start: Z = Pi = 0, mu = 0, W = 0, R = R_hat.
  static AdmmState initial(const RisCovariance& r_hat);
};

struct PrimalBlocks {
  ToeplitzParam mu;
  CMatrix w;
  CMatrix r;
};

/// Closed-form minimisation of the augmented Lagrangian over (mu, W, R)
/// at fixed (Z, Pi).
PrimalBlocks admm_primal_update(const AdmmState& state, const RisCovariance& r_hat,
                                const AdmmConfig& cfg);

/// [[W, R^H], [R, T]].
CMatrix assemble_block(const CMatrix& w, const CMatrix& r, const CMatrix& t);

/// Frobenius-nearest PSD matrix (negative eigenvalues clamped to zero).
CMatrix psd_project(const CMatrix& s);

/// tr T(mu) + tr W + gamma ||R - R_hat||_F^2.
double admm_objective(const PrimalBlocks& blocks, const RisCovariance& r_hat, double gamma);

struct AdmmResult {
  ToeplitzParam mu;
  AdmmState state;
  CMatrix toeplitz() const { return toeplitz_build(mu); }
};

/// One full ADMM sweep in the units of `r_hat`: primal update, Z
/// projection of S - Pi / tau, dual ascent. Updates residuals and iter.
void admm_step(AdmmState& state, const RisCovariance& r_hat, const AdmmConfig& cfg);

/// Runs ADMM until both residuals meet the absolute/relative tolerances or
/// max_iter is reached. Non-convergence is reported via state.converged.
AdmmResult admm_solve(const RisCovariance& r_hat, const AdmmConfig& cfg);

}  // namespace risdoa
