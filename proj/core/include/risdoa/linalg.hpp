#pragma once

// Shared numeric types and small helpers used across the risdoa modules.

#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

#include <Eigen/Dense>

namespace risdoa {

using cdouble = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kPi = std::numbers::pi;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// (X + X^H) / 2. Input must be square.
CMatrix hermitian_part(const CMatrix& x);

/// ||X - X^H||_F.
double hermitian_defect(const CMatrix& x);

/// True when ||X - X^H||_F <= rel_tol * max(1, ||X||_F).
bool is_hermitian(const CMatrix& x, double rel_tol = 1e-9);

/// Eigenvalues (descending) and matching eigenvectors of a Hermitian matrix.
struct HermitianEigen {
  RVector values;
  CMatrix vectors;
};
HermitianEigen eigh_descending(const CMatrix& x);

/// Deterministic RNG stream for (seed, tags...). Distinct tag tuples give
/// independent-looking streams; identical tuples give identical streams.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t tag0 = 0,
                            std::uint64_t tag1 = 0, std::uint64_t tag2 = 0);

/// Circular complex Gaussian sample with E|z|^2 = variance.
cdouble complex_gaussian(std::mt19937_64& rng, double variance = 1.0);

}  // namespace risdoa
