#pragma once

// RIS-assisted NLoS scene: K far-field sources illuminate an N-element RIS,
// which reflects toward an M-antenna base station over L time slots.

#include <cstdint>
#include <limits>
#include <vector>

#include "risdoa/linalg.hpp"

namespace risdoa {

struct SceneConfig {
  int num_antennas = 4;   // M
  int num_ris = 16;       // N
  int num_sources = 3;    // K
  int num_slots = 32;     // L
  std::vector<double> source_doas_deg{5.345, 25.789, 45.456};
  double dod_alpha_deg = 30.0;  // RIS -> BS departure
  double doa_beta_deg = -20.0;  // arrival at BS
  double wavelength = 1.0;
  // Empty means the half-wavelength default p_n = (n-1) * wavelength / 2.
  std::vector<double> ris_positions;
  std::vector<double> antenna_positions;
  // +inf disables noise.
  double snr_db = std::numeric_limits<double>::infinity();
  std::uint64_t rng_seed = 0;

  /// Structural checks only: positive sizes, finite angles in [-90, 90),
  /// matching position vectors. Enough to synthesize data.
  void validate_geometry() const;
  /// validate_geometry() plus the estimation invariants K < N, K < L,
  /// L >= N and distinct source angles. Throws std::invalid_argument.
  void validate() const;

  RVector ris_positions_or_default() const;
  RVector antenna_positions_or_default() const;
  bool noiseless() const { return snr_db == std::numeric_limits<double>::infinity(); }
};

/// Half-wavelength uniform linear array positions 0, lambda/2, ...
RVector half_wavelength_positions(Index count, double wavelength);

/// Per-slot RIS reflection coefficients. Rows are slots, columns elements.
struct RisProfile {
  RMatrix gains;   // L x N, strictly positive
  RMatrix phases;  // L x N, radians

  Index num_slots() const { return gains.rows(); }
  Index num_elements() const { return gains.cols(); }

  /// Unit gains, phases i.i.d. uniform on {0, pi} per slot and element.
  static RisProfile random_binary(Index num_slots, Index num_elements,
                                  std::mt19937_64& rng);
  /// random_binary() on the profile stream of cfg.rng_seed.
  static RisProfile draw(const SceneConfig& cfg);
};

struct ObservationMatrix {
  CMatrix y;       // L x M
  CMatrix clean;   // noiseless copy
  double noise_var = 0.0;
};

/// exp(j * 2*pi/lambda * p_n * sin(theta)).
CVector steering_vector(double theta_deg, const RVector& positions, double wavelength);

/// N x K array manifold.
CMatrix array_manifold(const std::vector<double>& thetas_deg, const RVector& positions,
                       double wavelength);

/// b(l): G_n(l) exp(j phi_n(l)) exp(j 2*pi/lambda p_n sin(alpha)). `slot` is 0-based.
CVector ris_gain_vector(const RisProfile& profile, Index slot, double alpha_deg,
                        const RVector& positions, double wavelength);

/// B = [b(0) ... b(L-1)], N x L.
CMatrix measurement_matrix(const RisProfile& profile, double alpha_deg,
                           const RVector& positions, double wavelength);

/// K i.i.d. CN(0, 1) source amplitudes, held constant over the slot block.
CVector draw_source_signals(const SceneConfig& cfg);

/// Y = B^T A(theta) s exp(j 2*pi/lambda sin(beta) q^T) + V.
ObservationMatrix synthesize_observations(const SceneConfig& cfg, const RisProfile& profile,
                                          const CVector& s);

/// Noise variance that realises cfg.snr_db for the given clean block.
double noise_variance_for_snr(const CMatrix& clean, double snr_db);

}  // namespace risdoa
