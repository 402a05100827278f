#include "risdoa/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace risdoa {

CMatrix hermitian_part(const CMatrix& x) {
  if (x.rows() != x.cols()) {
    throw std::invalid_argument("hermitian_part: matrix is not square");
  }
  return 0.5 * (x + x.adjoint());
}

double hermitian_defect(const CMatrix& x) {
  return (x - x.adjoint()).norm();
}

bool is_hermitian(const CMatrix& x, double rel_tol) {
  if (x.rows() != x.cols()) return false;
  return hermitian_defect(x) <= rel_tol * std::max(1.0, x.norm());
}

HermitianEigen eigh_descending(const CMatrix& x) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(x);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigh_descending: eigendecomposition failed");
  }
  // Eigen returns ascending order.
  HermitianEigen out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t tag0,
                            std::uint64_t tag1, std::uint64_t tag2) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(seed), hi(seed), lo(tag0), hi(tag0),
                    lo(tag1), hi(tag1), lo(tag2), hi(tag2)};
  return std::mt19937_64(seq);
}

cdouble complex_gaussian(std::mt19937_64& rng, double variance) {
  std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

}  // namespace risdoa
