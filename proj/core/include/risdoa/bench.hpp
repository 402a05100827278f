#pragma once

// Monte-Carlo harness: one trial runs the full estimation chain on a
// freshly simulated scene; an experiment sweeps one scene parameter.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "risdoa/anm_admm.hpp"
#include "risdoa/covariance_est.hpp"
#include "risdoa/music.hpp"
#include "risdoa/scene_sim.hpp"

namespace risdoa {

/// Estimator settings shared by every trial of an experiment.
struct EstimatorSettings {
  NoiseOptions noise;
  AdmmConfig admm;
  // Unset: gamma follows AdmmConfig::default_gamma(sigma0_hat).
  std::optional<double> gamma;
  MusicConfig music;
  std::optional<double> clip_deg = 4.0;
};

struct TrialResult {
  double sweep_value = 0.0;
  int trial_index = 0;
  std::vector<double> true_deg;
  std::vector<double> est_deg;     // NaN entries when the trial failed
  std::vector<double> per_source_errors_deg;
  double rmse_deg = 0.0;
  double wall_time_s = 0.0;
  int admm_iters = 0;
  bool admm_converged = false;
  double sigma0_est = 0.0;
  bool failed = false;
  std::string failure;
};

/// Everything the estimation chain produced, for the `simulate` and
/// `spectrum` commands and for tests.
struct PipelineTrace {
  ObservationMatrix obs;
  CMatrix b;
  NoiseEstimate noise;
  RisCovariance r_hat;
  double gamma = 0.0;
  AdmmResult admm;
  DoaEstimate doa;
};

/// Simulates the scene described by `cfg` (seeded by cfg.rng_seed) and runs
/// the estimator. `profile` overrides the RIS profile draw when given.
PipelineTrace run_pipeline(const SceneConfig& cfg, const EstimatorSettings& est,
                           const RisProfile* profile = nullptr);

/// One Monte-Carlo trial. Rank deficiency of B is recorded as a failed
/// trial whose errors all equal the clip value.
TrialResult run_trial(const SceneConfig& cfg, const EstimatorSettings& est,
                      const RisProfile* profile = nullptr);

/// Absolute errors between sorted truths and sorted estimates, clipped.
std::vector<double> paired_errors(std::vector<double> truth, std::vector<double> estimate,
                                  std::optional<double> clip_deg);

enum class Preset { snr_sweep, ris_sweep, measurement_sweep, cpu_time, custom };

std::string to_string(Preset p);
Preset parse_preset(const std::string& name);

/// Scene parameter varied across a sweep.
enum class SweepParam { snr_db, num_ris, num_slots };

std::string to_string(SweepParam p);
SweepParam parse_sweep_param(const std::string& name);

struct ExperimentSpec {
  Preset preset = Preset::custom;
  SweepParam sweep_param = SweepParam::snr_db;
  std::vector<double> sweep_values;
  int trials = 100;
  SceneConfig base;
  EstimatorSettings estimator;
  std::uint64_t seed = 1;
  bool ris_redraw_per_trial = true;
  bool serial = false;
  int threads = 0;  // 0: hardware concurrency

  void validate() const;
  /// Scene for one sweep point (sweep value applied, seed left untouched).
  SceneConfig scene_at(double sweep_value) const;
};

/// Preset parameter grids: M = 4, K = 3 sources at 5.345/25.789/45.456 deg,
/// 7-point uniform grids over the quoted ranges.
ExperimentSpec preset_spec(Preset p);

/// Seed of trial `trial` at sweep point `point`.
std::uint64_t trial_seed(std::uint64_t seed, std::size_t point, std::size_t trial);

struct SweepSummary {
  double sweep_value = 0.0;
  double mean_rmse_deg = 0.0;  // pooled over trials and sources
  double std_rmse_deg = 0.0;   // population std of per-trial RMSE
  double mean_time_s = 0.0;
  int n_trials = 0;
};

/// Pooled RMSE sqrt(sum err^2 / (trials * K)) over one sweep point.
SweepSummary aggregate_rmse(const std::vector<TrialResult>& results);

struct ExperimentResult {
  std::vector<TrialResult> trials;     // ordered by (sweep point, trial)
  std::vector<SweepSummary> summary;   // one per sweep value
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_trial_csv(std::ostream& os, const std::vector<TrialResult>& trials);
void write_aggregate_csv(std::ostream& os, const std::vector<SweepSummary>& summary);

struct ExperimentFiles {
  std::filesystem::path trials;
  std::filesystem::path aggregate;
  std::filesystem::path config;
};

ExperimentFiles experiment_files(const ExperimentSpec& spec, const std::filesystem::path& dir);

/// Checks that `dir` exists (creating it) and is writable; throws IoError.
void ensure_writable_dir(const std::filesystem::path& dir);

/// Validates the output location, runs the sweep, writes the trial CSV,
/// the aggregate CSV and the effective configuration.
ExperimentResult run_experiment_to_dir(const ExperimentSpec& spec, const std::filesystem::path& dir);

}  // namespace risdoa
