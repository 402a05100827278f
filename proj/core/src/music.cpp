#include "risdoa/music.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "risdoa/scene_sim.hpp"

namespace risdoa {
namespace {

constexpr double kDenominatorFloor = 1e-18;

}  // namespace

ArrayGeometry ArrayGeometry::half_wavelength(Index n, double wavelength) {
  return ArrayGeometry{half_wavelength_positions(n, wavelength), wavelength};
}

void MusicConfig::validate(Index n) const {
  if (!(grid_step > 0.0)) throw std::invalid_argument("MusicConfig: grid_step must be > 0");
  if (!(scan_min < scan_max)) throw std::invalid_argument("MusicConfig: empty scan range");
  if (num_sources < 1 || num_sources >= n) {
    throw std::invalid_argument("MusicConfig: need 1 <= K < N");
  }
}

std::vector<double> scan_grid(const MusicConfig& cfg) {
  std::vector<double> grid;
  const auto count = static_cast<std::size_t>(std::ceil((cfg.scan_max - cfg.scan_min) / cfg.grid_step - 1e-9));
  grid.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double theta = cfg.scan_min + static_cast<double>(i) * cfg.grid_step;
    if (theta >= cfg.scan_max) break;
    grid.push_back(theta);
  }
  return grid;
}

std::vector<double> music_spectrum(const CMatrix& t, int num_sources, const std::vector<double>& grid,
                                   const ArrayGeometry& geometry) {
  const Index n = t.rows();
  if (t.cols() != n) throw std::invalid_argument("music_spectrum: matrix is not square");
  if (num_sources < 0 || num_sources >= n) {
    throw std::invalid_argument("music_spectrum: need K < N");
  }
  if (geometry.positions.size() != n) {
    throw std::invalid_argument("music_spectrum: geometry does not match matrix size");
  }
  const HermitianEigen eig = eigh_descending(hermitian_part(t));
  const CMatrix noise = eig.vectors.rightCols(n - num_sources);
  const CMatrix noise_h = noise.adjoint();

  std::vector<double> p(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const CVector a = steering_vector(grid[g], geometry.positions, geometry.wavelength);
    const double denom = (noise_h * a).squaredNorm();
    p[g] = 1.0 / std::max(denom, kDenominatorFloor);
  }
  return p;
}

std::vector<Index> pick_peaks(const std::vector<double>& spectrum, int count, bool* degenerate) {
  const auto size = static_cast<Index>(spectrum.size());
  std::vector<Index> maxima;
  // A plateau counts once, at its leftmost sample.
  for (Index i = 1; i + 1 < size; ++i) {
    if (spectrum[i] > spectrum[i - 1] && spectrum[i] >= spectrum[i + 1]) maxima.push_back(i);
  }
  auto stronger = [&](Index a, Index b) {
    if (spectrum[a] != spectrum[b]) return spectrum[a] > spectrum[b];
    return a < b;
  };
  std::stable_sort(maxima.begin(), maxima.end(), stronger);

  std::vector<Index> picked(maxima.begin(), maxima.begin() + std::min<Index>(count, maxima.size()));
  const bool short_of_peaks = static_cast<Index>(picked.size()) < count;
  if (degenerate) *degenerate = short_of_peaks;
  if (short_of_peaks) {
    std::vector<Index> rest(size);
    std::iota(rest.begin(), rest.end(), Index{0});
    std::stable_sort(rest.begin(), rest.end(), stronger);
    for (Index i : rest) {
      if (static_cast<Index>(picked.size()) >= count) break;
      if (std::find(picked.begin(), picked.end(), i) == picked.end()) picked.push_back(i);
    }
  }
  return picked;
}

DoaEstimate estimate_doas(const CMatrix& t, const MusicConfig& cfg, const ArrayGeometry& geometry) {
  cfg.validate(t.rows());
  DoaEstimate out;
  out.grid = scan_grid(cfg);
  out.spectrum = music_spectrum(t, cfg.num_sources, out.grid, geometry);

  const std::vector<Index> peaks = pick_peaks(out.spectrum, cfg.num_sources, &out.degenerate);
  const auto size = static_cast<Index>(out.grid.size());
  for (Index i : peaks) {
    double theta = out.grid[i];
    if (cfg.refine && i > 0 && i + 1 < size) {
      const double ym = std::log(out.spectrum[i - 1]);
      const double y0 = std::log(out.spectrum[i]);
      const double yp = std::log(out.spectrum[i + 1]);
      const double curvature = ym - 2.0 * y0 + yp;
      if (curvature < 0.0) {
        const double offset = std::clamp(0.5 * (ym - yp) / curvature, -0.5, 0.5);
        theta += offset * cfg.grid_step;
      }
    }
    out.angles.push_back(theta);
  }
  std::sort(out.angles.begin(), out.angles.end());
  return out;
}

}  // namespace risdoa
