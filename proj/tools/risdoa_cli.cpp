// risdoa: simulate single trials, run Monte-Carlo sweeps and dump MUSIC
// pseudospectra for RIS-assisted gridless DoA estimation.
//
// Exit codes: 0 success, 2 configuration error, 3 I/O error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "risdoa/bench.hpp"
#include "risdoa/config.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  bool serial = false;
  bool verbose = false;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "key = value configuration file");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--trials", o.trials, "Monte-Carlo trials per sweep point");
  cmd->add_option("--seed", o.seed, "master RNG seed");
  cmd->add_option("--threads", o.threads, "worker threads (0 = all cores)");
  cmd->add_flag("--serial", o.serial, "run trials sequentially");
  cmd->add_flag("--verbose", o.verbose, "progress and per-iteration diagnostics");
  cmd->add_option("--set", o.overrides, "override a config key, e.g. --set snr_db=12")->take_all();
}

risdoa::ExperimentSpec build_spec(risdoa::ExperimentSpec spec, const CommonOptions& o) {
  if (!o.config_path.empty()) spec = risdoa::load_config_file(o.config_path, std::move(spec));
  for (const std::string& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw risdoa::ConfigError("--set expects key=value, got '" + kv + "'");
    risdoa::apply_config_value(spec, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (o.trials) spec.trials = *o.trials;
  if (o.seed) spec.seed = *o.seed;
  if (o.threads) spec.threads = *o.threads;
  if (o.serial) spec.serial = true;
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw risdoa::ConfigError(e.what());
  }
  return spec;
}

// Base scene (sweep values ignored) seeded like trial 0 of sweep point 0.
risdoa::SceneConfig single_scene(const risdoa::ExperimentSpec& spec) {
  risdoa::SceneConfig cfg = spec.base;
  cfg.validate();
  cfg.rng_seed = risdoa::trial_seed(spec.seed, 0, 0);
  return cfg;
}

void print_angles(std::ostream& os, const char* label, const std::vector<double>& v) {
  os << label;
  for (double x : v) os << ' ' << x;
  os << '\n';
}

std::unique_ptr<std::ostream> open_output(const std::string& dir, const std::string& name,
                                          std::ostream*& sink) {
  if (dir.empty()) {
    sink = &std::cout;
    return nullptr;
  }
  risdoa::ensure_writable_dir(dir);
  const auto path = std::filesystem::path(dir) / name;
  auto file = std::make_unique<std::ofstream>(path);
  if (!*file) throw risdoa::IoError("cannot open '" + path.string() + "'");
  sink = file.get();
  return file;
}

int cmd_simulate(const CommonOptions& o) {
  const risdoa::ExperimentSpec spec = build_spec(risdoa::preset_spec(risdoa::Preset::custom), o);
  const risdoa::SceneConfig cfg = single_scene(spec);

  risdoa::EstimatorSettings est = spec.estimator;
  std::ostream* trace_sink = nullptr;
  std::unique_ptr<std::ostream> trace_file;
  if (o.verbose) {
    if (o.out_dir.empty()) {
      trace_sink = &std::cerr;
    } else {
      trace_file = open_output(o.out_dir, "admm_trace.csv", trace_sink);
    }
    *trace_sink << "iter,primal_res,dual_res,objective\n" << std::setprecision(10);
    est.admm.on_iteration = [trace_sink](const risdoa::AdmmIterationRecord& r) {
      *trace_sink << r.iter << ',' << r.primal_res << ',' << r.dual_res << ',' << r.objective << '\n';
    };
  }

  const risdoa::PipelineTrace t = risdoa::run_pipeline(cfg, est);
  std::cout << std::setprecision(8);
  std::cout << "scene: M=" << cfg.num_antennas << " N=" << cfg.num_ris << " K=" << cfg.num_sources
            << " L=" << cfg.num_slots << " snr_db=" << cfg.snr_db << " seed=" << cfg.rng_seed << '\n';
  std::cout << "noise_var_injected: " << t.obs.noise_var << " (R_Y floor M*var = "
            << t.obs.noise_var * cfg.num_antennas << ")\n";
  std::cout << "sigma0_est: " << t.noise.sigma0 << " iterations=" << t.noise.iterations
            << " converged=" << t.noise.converged << '\n';
  std::cout << "gamma: " << t.gamma << " w_update_factor=" << est.admm.w_update_factor << '\n';
  std::cout << "admm: iterations=" << t.admm.state.iter << " converged=" << t.admm.state.converged
            << " primal_res=" << t.admm.state.primal_res << " dual_res=" << t.admm.state.dual_res << '\n';
  const risdoa::HermitianEigen eig = risdoa::eigh_descending(t.admm.toeplitz());
  std::cout << "T(mu) eigenvalues:";
  for (risdoa::Index i = 0; i < eig.values.size(); ++i) std::cout << ' ' << eig.values(i);
  std::cout << '\n';
  std::vector<double> truth = cfg.source_doas_deg;
  std::sort(truth.begin(), truth.end());
  print_angles(std::cout, "true_deg:", truth);
  print_angles(std::cout, "est_deg:", t.doa.angles);
  print_angles(std::cout, "err_deg:", risdoa::paired_errors(truth, t.doa.angles, spec.estimator.clip_deg));
  if (t.doa.degenerate) std::cout << "warning: fewer local maxima than sources\n";
  return 0;
}

int cmd_sweep(const std::string& preset_name, const CommonOptions& o) {
  risdoa::Preset preset;
  try {
    preset = risdoa::parse_preset(preset_name);
  } catch (const std::invalid_argument& e) {
    throw risdoa::ConfigError(e.what());
  }
  risdoa::ExperimentSpec spec = build_spec(risdoa::preset_spec(preset), o);
  const std::string dir = o.out_dir.empty() ? "." : o.out_dir;
  if (o.verbose) {
    std::cerr << "running " << risdoa::to_string(spec.preset) << ": " << spec.sweep_values.size()
              << " points x " << spec.trials << " trials\n";
  }
  const risdoa::ExperimentResult result = risdoa::run_experiment_to_dir(spec, dir);
  const risdoa::ExperimentFiles files = risdoa::experiment_files(spec, dir);
  risdoa::write_aggregate_csv(std::cout, result.summary);
  if (o.verbose) {
    std::cerr << "wrote " << files.trials.string() << ", " << files.aggregate.string() << ", "
              << files.config.string() << '\n';
  }
  return 0;
}

int cmd_spectrum(const CommonOptions& o) {
  const risdoa::ExperimentSpec spec = build_spec(risdoa::preset_spec(risdoa::Preset::custom), o);
  std::ostream* sink = nullptr;
  auto file = open_output(o.out_dir, "spectrum.csv", sink);
  const risdoa::SceneConfig cfg = single_scene(spec);
  const risdoa::PipelineTrace t = risdoa::run_pipeline(cfg, spec.estimator);
  *sink << "angle_deg,pseudospectrum\n" << std::setprecision(12);
  for (std::size_t i = 0; i < t.doa.grid.size(); ++i) {
    *sink << t.doa.grid[i] << ',' << t.doa.spectrum[i] << '\n';
  }
  if (!*sink) throw risdoa::IoError("failed writing spectrum");
  if (o.verbose) print_angles(std::cerr, "est_deg:", t.doa.angles);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIS-assisted gridless DoA estimation: simulation and Monte-Carlo benchmarks"};
  app.require_subcommand(1);

  CommonOptions simulate_opts;
  auto* simulate = app.add_subcommand("simulate", "run one trial and print every pipeline stage");
  add_common(simulate, simulate_opts);

  CommonOptions sweep_opts;
  std::string preset = "custom";
  auto* sweep = app.add_subcommand("sweep", "run a Monte-Carlo sweep and write CSV files");
  sweep->add_option("preset", preset, "snr_sweep | ris_sweep | measurement_sweep | cpu_time | custom");
  add_common(sweep, sweep_opts);

  CommonOptions spectrum_opts;
  auto* spectrum = app.add_subcommand("spectrum", "dump the MUSIC pseudospectrum of one trial as CSV");
  add_common(spectrum, spectrum_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*simulate) return cmd_simulate(simulate_opts);
    if (*sweep) return cmd_sweep(preset, sweep_opts);
    if (*spectrum) return cmd_spectrum(spectrum_opts);
  } catch (const risdoa::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const risdoa::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
