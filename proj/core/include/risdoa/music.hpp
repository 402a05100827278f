#pragma once

// MUSIC angle extraction from a reconstructed covariance-like matrix.

#include <vector>

#include "risdoa/linalg.hpp"

namespace risdoa {

/// Element positions and carrier wavelength used to build a(theta).
struct ArrayGeometry {
  RVector positions;
  double wavelength = 1.0;

  static ArrayGeometry half_wavelength(Index n, double wavelength = 1.0);
};

struct MusicConfig {
  double grid_step = 0.01;  // degrees
  double scan_min = -90.0;  // inclusive
  double scan_max = 90.0;   // exclusive
  int num_sources = 3;
  bool refine = true;       // parabolic interpolation in log-spectrum

  void validate(Index n) const;
};

struct DoaEstimate {
  std::vector<double> angles;  // degrees, ascending
  std::vector<double> grid;
  std::vector<double> spectrum;
  bool degenerate = false;     // fewer than K local maxima were found
};

/// scan_min, scan_min + step, ... strictly below scan_max.
std::vector<double> scan_grid(const MusicConfig& cfg);

/// P(theta) = 1 / ||E_n^H a(theta)||^2 with E_n the N-K weakest eigenvectors.
std::vector<double> music_spectrum(const CMatrix& t, int num_sources, const std::vector<double>& grid,
                                   const ArrayGeometry& geometry);

DoaEstimate estimate_doas(const CMatrix& t, const MusicConfig& cfg, const ArrayGeometry& geometry);

/// Peak picking on a sampled spectrum; exposed for testing. Returns grid
/// indices of the `count` strongest local maxima (ties to the smaller
/// index), padded with the largest remaining samples when short.
std::vector<Index> pick_peaks(const std::vector<double>& spectrum, int count, bool* degenerate = nullptr);

}  // namespace risdoa
