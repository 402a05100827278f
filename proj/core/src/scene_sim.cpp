#include "risdoa/scene_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace risdoa {
namespace {

// Sub-stream tags under a scene seed.
constexpr std::uint64_t kSignalStream = 1;
constexpr std::uint64_t kProfileStream = 2;
constexpr std::uint64_t kNoiseStream = 3;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("SceneConfig: " + what);
}

}  // namespace

void SceneConfig::validate_geometry() const {
  require(num_antennas >= 1, "num_antennas must be positive");
  require(num_ris >= 1, "num_ris must be positive");
  require(num_sources >= 0, "num_sources must be nonnegative");
  require(num_slots >= 1, "num_slots must be positive");
  require(std::isfinite(wavelength) && wavelength > 0.0, "wavelength must be positive");
  require(static_cast<int>(source_doas_deg.size()) == num_sources,
          "source_doas has " + std::to_string(source_doas_deg.size()) +
              " entries, expected " + std::to_string(num_sources));
  for (double t : source_doas_deg) {
    require(std::isfinite(t) && t >= -90.0 && t < 90.0, "source angle outside [-90, 90)");
  }
  require(std::isfinite(dod_alpha_deg) && std::isfinite(doa_beta_deg), "alpha/beta must be finite");
  require(ris_positions.empty() || static_cast<int>(ris_positions.size()) == num_ris,
          "ris_positions size mismatch");
  require(antenna_positions.empty() || static_cast<int>(antenna_positions.size()) == num_antennas,
          "antenna_positions size mismatch");
  require(!std::isnan(snr_db) && snr_db != -std::numeric_limits<double>::infinity(),
          "snr_db must be a number or +inf");
}

void SceneConfig::validate() const {
  validate_geometry();
  require(num_sources >= 1, "num_sources must be positive");
  require(num_sources < num_ris, "need num_sources < num_ris");
  require(num_sources < num_slots, "need num_sources < num_slots");
  require(num_slots >= num_ris, "need num_slots >= num_ris");
  std::vector<double> sorted = source_doas_deg;
  std::sort(sorted.begin(), sorted.end());
  require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
          "source angles must be distinct");
}

RVector half_wavelength_positions(Index count, double wavelength) {
  RVector p(count);
  for (Index n = 0; n < count; ++n) p(n) = static_cast<double>(n) * wavelength / 2.0;
  return p;
}

RVector SceneConfig::ris_positions_or_default() const {
  if (ris_positions.empty()) return half_wavelength_positions(num_ris, wavelength);
  return Eigen::Map<const RVector>(ris_positions.data(), static_cast<Index>(ris_positions.size()));
}

RVector SceneConfig::antenna_positions_or_default() const {
  if (antenna_positions.empty()) return half_wavelength_positions(num_antennas, wavelength);
  return Eigen::Map<const RVector>(antenna_positions.data(),
                                   static_cast<Index>(antenna_positions.size()));
}

RisProfile RisProfile::random_binary(Index num_slots, Index num_elements, std::mt19937_64& rng) {
  RisProfile profile;
  profile.gains = RMatrix::Ones(num_slots, num_elements);
  profile.phases.resize(num_slots, num_elements);
  std::bernoulli_distribution coin(0.5);
  for (Index l = 0; l < num_slots; ++l) {
    for (Index n = 0; n < num_elements; ++n) {
      profile.phases(l, n) = coin(rng) ? kPi : 0.0;
    }
  }
  return profile;
}

RisProfile RisProfile::draw(const SceneConfig& cfg) {
  auto rng = make_stream(cfg.rng_seed, kProfileStream);
  return random_binary(cfg.num_slots, cfg.num_ris, rng);
}

CVector steering_vector(double theta_deg, const RVector& positions, double wavelength) {
  if (!std::isfinite(theta_deg)) {
    throw std::invalid_argument("steering_vector: angle is not finite");
  }
  if (!(wavelength > 0.0)) {
    throw std::invalid_argument("steering_vector: wavelength must be positive");
  }
  const double k = 2.0 * kPi / wavelength * std::sin(deg_to_rad(theta_deg));
  CVector a(positions.size());
  for (Index n = 0; n < positions.size(); ++n) {
    a(n) = std::polar(1.0, k * positions(n));
  }
  return a;
}

CMatrix array_manifold(const std::vector<double>& thetas_deg, const RVector& positions,
                       double wavelength) {
  CMatrix a(positions.size(), static_cast<Index>(thetas_deg.size()));
  for (std::size_t k = 0; k < thetas_deg.size(); ++k) {
    a.col(static_cast<Index>(k)) = steering_vector(thetas_deg[k], positions, wavelength);
  }
  return a;
}

CVector ris_gain_vector(const RisProfile& profile, Index slot, double alpha_deg,
                        const RVector& positions, double wavelength) {
  if (slot < 0 || slot >= profile.num_slots()) {
    throw std::out_of_range("ris_gain_vector: slot " + std::to_string(slot) +
                            " outside [0, " + std::to_string(profile.num_slots()) + ")");
  }
  if (positions.size() != profile.num_elements()) {
    throw std::invalid_argument("ris_gain_vector: positions do not match RIS size");
  }
  CVector b = steering_vector(alpha_deg, positions, wavelength);
  for (Index n = 0; n < b.size(); ++n) {
    b(n) *= std::polar(profile.gains(slot, n), profile.phases(slot, n));
  }
  return b;
}

CMatrix measurement_matrix(const RisProfile& profile, double alpha_deg, const RVector& positions,
                           double wavelength) {
  CMatrix b(profile.num_elements(), profile.num_slots());
  for (Index l = 0; l < profile.num_slots(); ++l) {
    b.col(l) = ris_gain_vector(profile, l, alpha_deg, positions, wavelength);
  }
  return b;
}

CVector draw_source_signals(const SceneConfig& cfg) {
  auto rng = make_stream(cfg.rng_seed, kSignalStream);
  CVector s(std::max(cfg.num_sources, 0));
  for (Index k = 0; k < s.size(); ++k) s(k) = complex_gaussian(rng, 1.0);
  return s;
}

double noise_variance_for_snr(const CMatrix& clean, double snr_db) {
  if (snr_db == std::numeric_limits<double>::infinity()) return 0.0;
  const double signal_power = clean.squaredNorm() / static_cast<double>(clean.size());
  return signal_power / std::pow(10.0, snr_db / 10.0);
}

ObservationMatrix synthesize_observations(const SceneConfig& cfg, const RisProfile& profile,
                                          const CVector& s) {
  cfg.validate_geometry();
  if (s.size() != cfg.num_sources) {
    throw std::invalid_argument("synthesize_observations: expected " +
                                std::to_string(cfg.num_sources) + " source signals, got " +
                                std::to_string(s.size()));
  }
  if (profile.num_slots() != cfg.num_slots || profile.num_elements() != cfg.num_ris) {
    throw std::invalid_argument("synthesize_observations: RIS profile is " +
                                std::to_string(profile.num_slots()) + "x" +
                                std::to_string(profile.num_elements()) + ", scene needs " +
                                std::to_string(cfg.num_slots) + "x" + std::to_string(cfg.num_ris));
  }
  if ((profile.gains.array() <= 0.0).any()) {
    throw std::invalid_argument("synthesize_observations: RIS gains must be positive");
  }

  const RVector p = cfg.ris_positions_or_default();
  const RVector q = cfg.antenna_positions_or_default();
  const CMatrix b = measurement_matrix(profile, cfg.dod_alpha_deg, p, cfg.wavelength);
  const CMatrix a = array_manifold(cfg.source_doas_deg, p, cfg.wavelength);
  const CVector column = b.transpose() * (a * s);  // L
  const CVector antenna_phase = steering_vector(cfg.doa_beta_deg, q, cfg.wavelength);  // M

  ObservationMatrix obs;
  obs.clean = column * antenna_phase.transpose();
  obs.noise_var = noise_variance_for_snr(obs.clean, cfg.snr_db);
  obs.y = obs.clean;
  if (obs.noise_var > 0.0) {
    auto rng = make_stream(cfg.rng_seed, kNoiseStream);
    // Column-major fill keeps the draw order independent of Eigen internals.
    for (Index m = 0; m < obs.y.cols(); ++m) {
      for (Index l = 0; l < obs.y.rows(); ++l) {
        obs.y(l, m) += complex_gaussian(rng, obs.noise_var);
      }
    }
  }
  return obs;
}

}  // namespace risdoa
