#pragma once

// Test-only reference computations. Deliberately naive and independent of
// the library code paths they check.

#include <complex>
#include <random>

#include <Eigen/Dense>

namespace risdoa::testing {

using C = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat random_complex(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Mat m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = C(normal(rng), normal(rng));
  }
  return m;
}

inline Mat random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
  const Mat g = random_complex(n, n, rng);
  return 0.5 * (g + g.adjoint());
}

inline Mat random_psd(Eigen::Index n, std::mt19937_64& rng, Eigen::Index rank = -1) {
  const Mat g = random_complex(n, rank < 0 ? n : rank, rng);
  return g * g.adjoint();
}

inline Vec random_vector(Eigen::Index n, std::mt19937_64& rng) {
  return random_complex(n, 1, rng);
}

/// Hermitian Toeplitz matrix filled entry by entry from its first column.
inline Mat naive_toeplitz(const Vec& mu) {
  const Eigen::Index n = mu.size();
  Mat t(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      t(i, j) = (i >= j) ? mu(i - j) : std::conj(mu(j - i));
    }
  }
  return t;
}

/// Re tr(Q^H X) by explicit double loop.
inline double real_inner(const Mat& q, const Mat& x) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < q.rows(); ++i) {
    for (Eigen::Index j = 0; j < q.cols(); ++j) acc += (std::conj(q(i, j)) * x(i, j)).real();
  }
  return acc;
}

/// Largest eigenvalue through the general (non-Hermitian) complex solver.
inline double lambda_max_general(const Mat& x) {
  Eigen::ComplexEigenSolver<Mat> solver(x);
  double best = -1e300;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    best = std::max(best, solver.eigenvalues()(i).real());
  }
  return best;
}

/// Textbook noise-variance alternation with a fresh eigendecomposition of
/// R - sigma I on every pass, run for a fixed number of passes.
inline double brute_noise_variance(const Mat& r, int passes) {
  const Eigen::Index l = r.rows();
  double sigma = 0.0;
  for (int i = 0; i < passes; ++i) {
    const Mat shifted = r - sigma * Mat::Identity(l, l);
    Eigen::ComplexEigenSolver<Mat> solver(shifted);
    Eigen::Index top = 0;
    for (Eigen::Index k = 1; k < l; ++k) {
      if (solver.eigenvalues()(k).real() > solver.eigenvalues()(top).real()) top = k;
    }
    const double s11 = std::max(solver.eigenvalues()(top).real(), 0.0);
    Vec u = solver.eigenvectors().col(top);
    u.normalize();
    const Vec c = u * std::sqrt(s11);
    sigma = (r - c * c.adjoint()).trace().real() / static_cast<double>(l);
  }
  return sigma;
}

/// exp(j*pi*n*sin(theta)) for a half-wavelength array, written out directly.
inline Vec ula_steering(double theta_deg, Eigen::Index n) {
  const double pi = 3.14159265358979323846;
  Vec a(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    a(k) = std::polar(1.0, pi * static_cast<double>(k) * std::sin(theta_deg * pi / 180.0));
  }
  return a;
}

}  // namespace risdoa::testing
