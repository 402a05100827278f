#include "risdoa/anm_admm.hpp"

#include <cmath>
#include <stdexcept>

namespace risdoa {

CMatrix toeplitz_build(const ToeplitzParam& p) {
  const Index n = p.dim();
  if (n < 1) throw std::invalid_argument("toeplitz_build: empty parameter");
  CMatrix t(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      t(i, j) = i >= j ? p.mu(i - j) : std::conj(p.mu(j - i));
    }
  }
  return t;
}

CVector toeplitz_adjoint(const CMatrix& q) {
  if (q.rows() != q.cols()) throw std::invalid_argument("toeplitz_adjoint: matrix is not square");
  const Index n = q.rows();
  CVector w(n);
  w(0) = q.trace();
  for (Index k = 1; k < n; ++k) {
    cdouble sub = 0.0;
    cdouble super = 0.0;
    for (Index i = k; i < n; ++i) {
      sub += q(i, i - k);
      super += q(i - k, i);
    }
    w(k) = sub + std::conj(super);
  }
  return w;
}

double toeplitz_pairing(const CVector& w, const CVector& mu) {
  return w.dot(mu).real();  // Eigen's dot conjugates the left operand
}

RVector toeplitz_scale(Index n) {
  RVector lambda(n);
  lambda(0) = 1.0 / static_cast<double>(n);
  for (Index k = 1; k < n; ++k) lambda(k) = 1.0 / (2.0 * static_cast<double>(n - k));
  return lambda;
}

void AdmmConfig::validate() const {
  if (!(tau > 0.0) || !(gamma > 0.0)) throw std::invalid_argument("AdmmConfig: tau, gamma must be > 0");
  if (max_iter < 1) throw std::invalid_argument("AdmmConfig: max_iter must be >= 1");
  if (!(eps_abs > 0.0) || !(eps_rel > 0.0)) {
    throw std::invalid_argument("AdmmConfig: eps_abs, eps_rel must be > 0");
  }
  if (w_update_factor != 1 && w_update_factor != 2) {
    throw std::invalid_argument("AdmmConfig: w_update_factor must be 1 or 2");
  }
}

double AdmmConfig::default_gamma(double sigma0, double scale) {
  // sigma0 at round-off level relative to the covariance scale counts as zero.
  if (sigma0 > 1e-12 * scale && sigma0 > 0.0) return 10.0 / sigma0;
  return 1e4;
}

AdmmState AdmmState::initial(const RisCovariance& r_hat) {
  const Index n = r_hat.dim();
  AdmmState s;
  s.mu.mu = CVector::Zero(n);
  s.w = CMatrix::Zero(n, n);
  s.r = r_hat.r_hat;
  s.z = CMatrix::Zero(2 * n, 2 * n);
  s.pi = CMatrix::Zero(2 * n, 2 * n);
  return s;
}

PrimalBlocks admm_primal_update(const AdmmState& state, const RisCovariance& r_hat,
                                const AdmmConfig& cfg) {
  const Index n = r_hat.dim();
  const double tau = cfg.tau;
  const double gamma = cfg.gamma;
  const auto z0 = state.z.topLeftCorner(n, n);
  const auto z1 = state.z.bottomLeftCorner(n, n);
  const auto z2 = state.z.bottomRightCorner(n, n);
  const auto pi0 = state.pi.topLeftCorner(n, n);
  const auto pi1 = state.pi.bottomLeftCorner(n, n);
  const auto pi2 = state.pi.bottomRightCorner(n, n);
  const CMatrix eye = CMatrix::Identity(n, n);

  PrimalBlocks out;
  if (cfg.w_update_factor == 2) {
    out.w = z0 - (2.0 / tau) * (pi0 - eye);
  } else {
    out.w = z0 + (1.0 / tau) * (pi0 - eye);
  }
  out.w = hermitian_part(out.w);

  out.r = (gamma * r_hat.r_hat + pi1 + tau * z1) / (tau + gamma);

  const CMatrix target = z2 + pi2 / tau;
  CVector mu = toeplitz_adjoint(target);
  mu(0) -= static_cast<double>(n) / tau;
  mu.array() *= toeplitz_scale(n).array().cast<cdouble>();
  mu(0) = mu(0).real();
  out.mu.mu = std::move(mu);
  return out;
}

CMatrix assemble_block(const CMatrix& w, const CMatrix& r, const CMatrix& t) {
  const Index n = w.rows();
  CMatrix s(2 * n, 2 * n);
  s.topLeftCorner(n, n) = w;
  s.topRightCorner(n, n) = r.adjoint();
  s.bottomLeftCorner(n, n) = r;
  s.bottomRightCorner(n, n) = t;
  return s;
}

CMatrix psd_project(const CMatrix& s) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(s));
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("psd_project: eigendecomposition failed");
  }
  const RVector clamped = solver.eigenvalues().cwiseMax(0.0);
  const CMatrix& v = solver.eigenvectors();
  return hermitian_part(v * clamped.cast<cdouble>().asDiagonal() * v.adjoint());
}

double admm_objective(const PrimalBlocks& blocks, const RisCovariance& r_hat, double gamma) {
  const double n = static_cast<double>(blocks.mu.dim());
  return n * blocks.mu.mu(0).real() + blocks.w.trace().real() +
         gamma * (blocks.r - r_hat.r_hat).squaredNorm();
}

void admm_step(AdmmState& state, const RisCovariance& r_hat, const AdmmConfig& cfg) {
  PrimalBlocks blocks = admm_primal_update(state, r_hat, cfg);
  const CMatrix s = assemble_block(blocks.w, blocks.r, toeplitz_build(blocks.mu));

  CMatrix z_next = psd_project(s - state.pi / cfg.tau);
  const CMatrix gap = z_next - s;
  state.pi += cfg.tau * gap;

  state.primal_res = gap.norm();
  state.dual_res = cfg.tau * (z_next - state.z).norm();
  state.z = std::move(z_next);
  state.mu = std::move(blocks.mu);
  state.w = std::move(blocks.w);
  state.r = std::move(blocks.r);
  ++state.iter;
}

AdmmResult admm_solve(const RisCovariance& r_hat, const AdmmConfig& cfg) {
  cfg.validate();
  if (r_hat.r_hat.rows() != r_hat.r_hat.cols() || r_hat.dim() < 1) {
    throw std::invalid_argument("admm_solve: R_hat must be square and nonempty");
  }
  const Index n = r_hat.dim();
  const double sqrt_dim = std::sqrt(2.0 * static_cast<double>(n));

  double scale = 1.0;
  if (cfg.normalize) {
    const double level = r_hat.r_hat.norm() / static_cast<double>(n);
    if (level > 0.0 && std::isfinite(level)) scale = level;
  }
  const RisCovariance data{r_hat.r_hat / scale};
  AdmmConfig inner = cfg;
  inner.gamma = cfg.gamma * scale;

  AdmmState state = AdmmState::initial(data);
  while (state.iter < cfg.max_iter) {
    admm_step(state, data, inner);

    if (cfg.on_iteration) {
      const PrimalBlocks current{ToeplitzParam{state.mu.mu * scale}, state.w * scale, state.r * scale};
      cfg.on_iteration({state.iter, state.primal_res * scale, state.dual_res * scale,
                        admm_objective(current, r_hat, cfg.gamma)});
    }

    const double s_norm = assemble_block(state.w, state.r, toeplitz_build(state.mu)).norm();
    const double eps_primal = sqrt_dim * cfg.eps_abs + cfg.eps_rel * std::max(state.z.norm(), s_norm);
    const double eps_dual = sqrt_dim * cfg.eps_abs + cfg.eps_rel * state.pi.norm();
    if (state.primal_res <= eps_primal && state.dual_res <= eps_dual) {
      state.converged = true;
      break;
    }
  }

  // Back to the units of r_hat. The multiplier is scale-invariant.
  state.mu.mu *= scale;
  state.w *= scale;
  state.r *= scale;
  state.z *= scale;
  state.primal_res *= scale;
  state.dual_res *= scale;
  return AdmmResult{state.mu, std::move(state)};
}

}  // namespace risdoa
