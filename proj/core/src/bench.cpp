#include "risdoa/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <thread>

#include "risdoa/config.hpp"

namespace risdoa {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Error charged per source when a trial fails and clipping is disabled.
constexpr double kUnclippedFailureDeg = 90.0;

constexpr std::uint64_t kTrialTag = 0x7472u;
constexpr std::uint64_t kPointProfileTag = 0x7072u;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::uint64_t point_profile_seed(std::uint64_t seed, std::size_t point) {
  auto rng = make_stream(seed, point, kPointProfileTag);
  return rng();
}

}  // namespace

namespace {

// Estimation chain only: R_Y -> noise floor -> R_hat -> ADMM -> MUSIC.
void run_estimator(const SceneConfig& cfg, const EstimatorSettings& est, PipelineTrace& trace) {
  const SampleCovariance r_y = sample_covariance(trace.obs);
  trace.noise = estimate_noise_variance(r_y, est.noise);
  trace.r_hat = denoised_ris_covariance(r_y, trace.noise.sigma0, trace.b);

  AdmmConfig admm = est.admm;
  const double floor_scale = r_y.matrix().trace().real() / static_cast<double>(r_y.dim());
  admm.gamma = est.gamma ? *est.gamma : AdmmConfig::default_gamma(trace.noise.sigma0, floor_scale);
  trace.gamma = admm.gamma;
  trace.admm = admm_solve(trace.r_hat, admm);

  MusicConfig music = est.music;
  music.num_sources = cfg.num_sources;
  trace.doa = estimate_doas(trace.admm.toeplitz(), music,
                            ArrayGeometry{cfg.ris_positions_or_default(), cfg.wavelength});
}

void simulate_into(const SceneConfig& cfg, const RisProfile* profile, PipelineTrace& trace) {
  const CVector s = draw_source_signals(cfg);
  const RisProfile drawn = profile ? *profile : RisProfile::draw(cfg);
  trace.obs = synthesize_observations(cfg, drawn, s);
  trace.b = measurement_matrix(drawn, cfg.dod_alpha_deg, cfg.ris_positions_or_default(), cfg.wavelength);
}

}  // namespace

PipelineTrace run_pipeline(const SceneConfig& cfg, const EstimatorSettings& est,
                           const RisProfile* profile) {
  cfg.validate();
  PipelineTrace trace;
  simulate_into(cfg, profile, trace);
  run_estimator(cfg, est, trace);
  return trace;
}

std::vector<double> paired_errors(std::vector<double> truth, std::vector<double> estimate,
                                  std::optional<double> clip_deg) {
  if (truth.size() != estimate.size()) {
    throw std::invalid_argument("paired_errors: truth and estimate sizes differ");
  }
  std::sort(truth.begin(), truth.end());
  std::sort(estimate.begin(), estimate.end());
  std::vector<double> err(truth.size());
  for (std::size_t k = 0; k < truth.size(); ++k) {
    double e = std::abs(estimate[k] - truth[k]);
    if (clip_deg) e = std::min(e, *clip_deg);
    err[k] = e;
  }
  return err;
}

namespace {

double rmse_of(const std::vector<double>& errors) {
  if (errors.empty()) return 0.0;
  double sum = 0.0;
  for (double e : errors) sum += e * e;
  return std::sqrt(sum / static_cast<double>(errors.size()));
}

}  // namespace

TrialResult run_trial(const SceneConfig& cfg, const EstimatorSettings& est, const RisProfile* profile) {
  cfg.validate();
  TrialResult out;
  out.true_deg = cfg.source_doas_deg;
  std::sort(out.true_deg.begin(), out.true_deg.end());

  // Synthesis is excluded from timing.
  PipelineTrace trace;
  simulate_into(cfg, profile, trace);

  const auto start = Clock::now();
  try {
    run_estimator(cfg, est, trace);
    out.wall_time_s = seconds_since(start);
    out.sigma0_est = trace.noise.sigma0;
    out.admm_iters = trace.admm.state.iter;
    out.admm_converged = trace.admm.state.converged;
    out.est_deg = trace.doa.angles;
    out.per_source_errors_deg = paired_errors(out.true_deg, out.est_deg, est.clip_deg);
  } catch (const RankDeficientError& e) {
    out.wall_time_s = seconds_since(start);
    out.failed = true;
    out.failure = e.what();
    out.sigma0_est = trace.noise.sigma0;
    out.est_deg.assign(out.true_deg.size(), kNaN);
    out.per_source_errors_deg.assign(out.true_deg.size(), est.clip_deg.value_or(kUnclippedFailureDeg));
  }
  out.rmse_deg = rmse_of(out.per_source_errors_deg);
  return out;
}

std::string to_string(Preset p) {
  switch (p) {
    case Preset::snr_sweep: return "snr_sweep";
    case Preset::ris_sweep: return "ris_sweep";
    case Preset::measurement_sweep: return "measurement_sweep";
    case Preset::cpu_time: return "cpu_time";
    case Preset::custom: return "custom";
  }
  return "custom";
}

Preset parse_preset(const std::string& name) {
  for (Preset p : {Preset::snr_sweep, Preset::ris_sweep, Preset::measurement_sweep, Preset::cpu_time,
                   Preset::custom}) {
    if (to_string(p) == name) return p;
  }
  throw std::invalid_argument("unknown preset '" + name + "'");
}

std::string to_string(SweepParam p) {
  switch (p) {
    case SweepParam::snr_db: return "snr_db";
    case SweepParam::num_ris: return "num_ris";
    case SweepParam::num_slots: return "num_slots";
  }
  return "snr_db";
}

SweepParam parse_sweep_param(const std::string& name) {
  for (SweepParam p : {SweepParam::snr_db, SweepParam::num_ris, SweepParam::num_slots}) {
    if (to_string(p) == name) return p;
  }
  throw std::invalid_argument("unknown sweep parameter '" + name + "'");
}

void ExperimentSpec::validate() const {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (sweep_values.empty()) throw std::invalid_argument("sweep_values must be nonempty");
  if (threads < 0) throw std::invalid_argument("threads must be >= 0");
  estimator.admm.validate();
  if (estimator.gamma && !(*estimator.gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
  if (estimator.clip_deg && !(*estimator.clip_deg > 0.0)) throw std::invalid_argument("clip_deg must be > 0");
  for (double v : sweep_values) {
    const SceneConfig cfg = scene_at(v);
    cfg.validate();
    estimator.music.validate(cfg.num_ris);
  }
}

SceneConfig ExperimentSpec::scene_at(double sweep_value) const {
  SceneConfig cfg = base;
  auto as_count = [&](double v) {
    if (v != std::floor(v) || v < 1.0) {
      throw std::invalid_argument("sweep value " + std::to_string(v) + " is not a positive integer");
    }
    return static_cast<int>(v);
  };
  switch (sweep_param) {
    case SweepParam::snr_db: cfg.snr_db = sweep_value; break;
    case SweepParam::num_ris:
      cfg.num_ris = as_count(sweep_value);
      cfg.ris_positions.clear();
      break;
    case SweepParam::num_slots: cfg.num_slots = as_count(sweep_value); break;
  }
  return cfg;
}

ExperimentSpec preset_spec(Preset p) {
  ExperimentSpec spec;
  spec.preset = p;
  spec.base = SceneConfig{};
  spec.base.num_antennas = 4;
  spec.base.num_sources = 3;
  spec.base.source_doas_deg = {5.345, 25.789, 45.456};
  switch (p) {
    case Preset::snr_sweep:
      spec.sweep_param = SweepParam::snr_db;
      spec.sweep_values = {-6, -3, 0, 3, 6, 9, 12};
      spec.base.num_ris = 16;
      spec.base.num_slots = 32;
      break;
    case Preset::ris_sweep:
      spec.sweep_param = SweepParam::num_ris;
      spec.sweep_values = {12, 15, 18, 21, 24, 27, 30};
      spec.base.snr_db = 3;
      spec.base.num_slots = 32;
      break;
    case Preset::measurement_sweep:
      spec.sweep_param = SweepParam::num_slots;
      spec.sweep_values = {20, 23, 26, 29, 32, 35, 38};
      spec.base.snr_db = 3;
      spec.base.num_ris = 16;
      break;
    case Preset::cpu_time:
      spec.sweep_param = SweepParam::num_ris;
      spec.sweep_values = {12, 15, 18, 21, 24, 27, 30};
      spec.base.snr_db = 3;
      spec.base.num_slots = 36;
      spec.serial = true;
      break;
    case Preset::custom:
      spec.sweep_param = SweepParam::snr_db;
      spec.sweep_values = {3};
      spec.base.snr_db = 3;
      break;
  }
  return spec;
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t point, std::size_t trial) {
  auto rng = make_stream(seed, point, trial, kTrialTag);
  return rng();
}

SweepSummary aggregate_rmse(const std::vector<TrialResult>& results) {
  if (results.empty()) throw std::invalid_argument("aggregate_rmse: no trials");
  SweepSummary s;
  s.sweep_value = results.front().sweep_value;
  s.n_trials = static_cast<int>(results.size());
  double sq = 0.0;
  std::size_t count = 0;
  double time = 0.0;
  double mean_trial_rmse = 0.0;
  for (const TrialResult& r : results) {
    for (double e : r.per_source_errors_deg) sq += e * e;
    count += r.per_source_errors_deg.size();
    time += r.wall_time_s;
    mean_trial_rmse += r.rmse_deg;
  }
  const double n = static_cast<double>(results.size());
  mean_trial_rmse /= n;
  double var = 0.0;
  for (const TrialResult& r : results) var += (r.rmse_deg - mean_trial_rmse) * (r.rmse_deg - mean_trial_rmse);
  s.mean_rmse_deg = count ? std::sqrt(sq / static_cast<double>(count)) : 0.0;
  s.std_rmse_deg = std::sqrt(var / n);
  s.mean_time_s = time / n;
  return s;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const std::size_t points = spec.sweep_values.size();
  const auto trials = static_cast<std::size_t>(spec.trials);

  std::vector<SceneConfig> scenes;
  std::vector<std::optional<RisProfile>> fixed_profiles(points);
  for (std::size_t pt = 0; pt < points; ++pt) {
    scenes.push_back(spec.scene_at(spec.sweep_values[pt]));
    if (!spec.ris_redraw_per_trial) {
      SceneConfig profile_cfg = scenes.back();
      profile_cfg.rng_seed = point_profile_seed(spec.seed, pt);
      fixed_profiles[pt] = RisProfile::draw(profile_cfg);
    }
  }

  ExperimentResult result;
  result.trials.resize(points * trials);
  auto run_job = [&](std::size_t job) {
    const std::size_t pt = job / trials;
    const std::size_t tr = job % trials;
    SceneConfig cfg = scenes[pt];
    cfg.rng_seed = trial_seed(spec.seed, pt, tr);
    const RisProfile* profile = fixed_profiles[pt] ? &*fixed_profiles[pt] : nullptr;
    TrialResult r = run_trial(cfg, spec.estimator, profile);
    r.sweep_value = spec.sweep_values[pt];
    r.trial_index = static_cast<int>(tr);
    result.trials[job] = std::move(r);
  };

  const bool serial = spec.serial || spec.preset == Preset::cpu_time;
  unsigned workers = spec.threads > 0 ? static_cast<unsigned>(spec.threads)
                                      : std::max(1u, std::thread::hardware_concurrency());
  if (serial) workers = 1;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, result.trials.size()));

  if (workers <= 1) {
    for (std::size_t job = 0; job < result.trials.size(); ++job) run_job(job);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t job = next++; job < result.trials.size(); job = next++) run_job(job);
      });
    }
  }

  for (std::size_t pt = 0; pt < points; ++pt) {
    const auto first = result.trials.begin() + static_cast<std::ptrdiff_t>(pt * trials);
    result.summary.push_back(aggregate_rmse({first, first + static_cast<std::ptrdiff_t>(trials)}));
  }
  return result;
}

namespace {

void put_number(std::ostream& os, double v) {
  if (std::isnan(v)) {
    os << "nan";
  } else {
    os << v;
  }
}

}  // namespace

void write_trial_csv(std::ostream& os, const std::vector<TrialResult>& trials) {
  os << "sweep_value,trial,src_index,true_deg,est_deg,err_deg,sigma0_est,admm_iters,admm_converged,time_s\n";
  os << std::setprecision(12);
  for (const TrialResult& r : trials) {
    for (std::size_t k = 0; k < r.true_deg.size(); ++k) {
      put_number(os, r.sweep_value);
      os << ',' << r.trial_index << ',' << k << ',';
      put_number(os, r.true_deg[k]);
      os << ',';
      put_number(os, r.est_deg[k]);
      os << ',';
      put_number(os, r.per_source_errors_deg[k]);
      os << ',';
      put_number(os, r.sigma0_est);
      os << ',' << r.admm_iters << ',' << (r.admm_converged ? 1 : 0) << ',';
      put_number(os, r.wall_time_s);
      os << '\n';
    }
  }
}

void write_aggregate_csv(std::ostream& os, const std::vector<SweepSummary>& summary) {
  os << "sweep_value,mean_rmse_deg,std_rmse_deg,mean_time_s,n_trials\n";
  os << std::setprecision(12);
  for (const SweepSummary& s : summary) {
    put_number(os, s.sweep_value);
    os << ',';
    put_number(os, s.mean_rmse_deg);
    os << ',';
    put_number(os, s.std_rmse_deg);
    os << ',';
    put_number(os, s.mean_time_s);
    os << ',' << s.n_trials << '\n';
  }
}

ExperimentFiles experiment_files(const ExperimentSpec& spec, const std::filesystem::path& dir) {
  const std::string stem = to_string(spec.preset);
  return {dir / (stem + "_trials.csv"), dir / (stem + "_aggregate.csv"), dir / (stem + "_config.txt")};
}

void ensure_writable_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir.string() + "'");
  }
  const auto probe = dir / ".risdoa_write_probe";
  {
    std::ofstream out(probe);
    if (!out || !(out << "ok")) throw IoError("output directory '" + dir.string() + "' is not writable");
  }
  std::filesystem::remove(probe, ec);
}

namespace {

void write_file(const std::filesystem::path& path, const auto& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  writer(out);
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace

ExperimentResult run_experiment_to_dir(const ExperimentSpec& spec, const std::filesystem::path& dir) {
  spec.validate();
  ensure_writable_dir(dir);
  const ExperimentFiles files = experiment_files(spec, dir);
  write_file(files.config, [&](std::ostream& os) { write_config(os, spec); });
  ExperimentResult result = run_experiment(spec);
  write_file(files.trials, [&](std::ostream& os) { write_trial_csv(os, result.trials); });
  write_file(files.aggregate, [&](std::ostream& os) { write_aggregate_csv(os, result.summary); });
  return result;
}

}  // namespace risdoa
