#include "risdoa/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

namespace risdoa {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = lower(trim(text));
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  if (t == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(key + ": '" + text + "' is not a number");
  }
  return v;
}

long long parse_integer(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(key + ": '" + text + "' is not an integer");
  }
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  const long long v = parse_integer(key, text);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ConfigError(key + ": value out of range");
  }
  return static_cast<int>(v);
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = lower(trim(text));
  if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  throw ConfigError(key + ": '" + text + "' is not a boolean");
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(parse_double(key, item));
  }
  return out;
}

std::optional<double> parse_optional(const std::string& key, const std::string& text,
                                     const std::string& none_word) {
  if (lower(trim(text)) == none_word) return std::nullopt;
  return parse_double(key, text);
}

void put_list(std::ostream& os, const std::vector<double>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
}

}  // namespace

void apply_config_value(ExperimentSpec& spec, const std::string& raw_key, const std::string& value) {
  const std::string key = lower(trim(raw_key));
  SceneConfig& scene = spec.base;
  EstimatorSettings& est = spec.estimator;
  try {
    if (key == "preset") {
      spec = preset_spec(parse_preset(lower(trim(value))));
    } else if (key == "sweep_param") {
      spec.sweep_param = parse_sweep_param(lower(trim(value)));
    } else if (key == "sweep_values") {
      spec.sweep_values = parse_list(key, value);
    } else if (key == "trials") {
      spec.trials = parse_int(key, value);
    } else if (key == "seed") {
      const long long s = parse_integer(key, value);
      if (s < 0) throw ConfigError("seed must be nonnegative");
      spec.seed = static_cast<std::uint64_t>(s);
    } else if (key == "threads") {
      spec.threads = parse_int(key, value);
    } else if (key == "serial") {
      spec.serial = parse_bool(key, value);
    } else if (key == "ris_redraw_per_trial") {
      spec.ris_redraw_per_trial = parse_bool(key, value);
    } else if (key == "num_antennas") {
      scene.num_antennas = parse_int(key, value);
    } else if (key == "num_ris") {
      scene.num_ris = parse_int(key, value);
    } else if (key == "num_sources") {
      scene.num_sources = parse_int(key, value);
    } else if (key == "num_slots") {
      scene.num_slots = parse_int(key, value);
    } else if (key == "source_doas") {
      scene.source_doas_deg = parse_list(key, value);
    } else if (key == "dod_alpha") {
      scene.dod_alpha_deg = parse_double(key, value);
    } else if (key == "doa_beta") {
      scene.doa_beta_deg = parse_double(key, value);
    } else if (key == "wavelength") {
      scene.wavelength = parse_double(key, value);
    } else if (key == "ris_positions") {
      scene.ris_positions = parse_list(key, value);
    } else if (key == "antenna_positions") {
      scene.antenna_positions = parse_list(key, value);
    } else if (key == "snr_db") {
      scene.snr_db = parse_double(key, value);
    } else if (key == "noise_max_iter") {
      est.noise.max_iter = parse_int(key, value);
    } else if (key == "noise_tol") {
      est.noise.tol = parse_double(key, value);
    } else if (key == "tau") {
      est.admm.tau = parse_double(key, value);
    } else if (key == "gamma") {
      est.gamma = parse_optional(key, value, "auto");
    } else if (key == "admm_max_iter") {
      est.admm.max_iter = parse_int(key, value);
    } else if (key == "eps_abs") {
      est.admm.eps_abs = parse_double(key, value);
    } else if (key == "eps_rel") {
      est.admm.eps_rel = parse_double(key, value);
    } else if (key == "w_update_factor") {
      est.admm.w_update_factor = parse_int(key, value);
      if (est.admm.w_update_factor != 1 && est.admm.w_update_factor != 2) {
        throw ConfigError("w_update_factor must be 1 or 2");
      }
    } else if (key == "grid_step") {
      est.music.grid_step = parse_double(key, value);
    } else if (key == "scan_min") {
      est.music.scan_min = parse_double(key, value);
    } else if (key == "scan_max") {
      est.music.scan_max = parse_double(key, value);
    } else if (key == "refine") {
      est.music.refine = parse_bool(key, value);
    } else if (key == "clip_deg") {
      est.clip_deg = parse_optional(key, value, "none");
    } else {
      throw ConfigError("unknown key '" + raw_key + "'");
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

void parse_config(std::istream& is, ExperimentSpec& spec, const std::string& source) {
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    try {
      apply_config_value(spec, line.substr(0, eq), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

ExperimentSpec load_config_file(const std::string& path, ExperimentSpec spec) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  parse_config(in, spec, path);
  return spec;
}

void write_config(std::ostream& os, const ExperimentSpec& spec) {
  const SceneConfig& scene = spec.base;
  const EstimatorSettings& est = spec.estimator;
  os << std::setprecision(17);
  os << "# risdoa effective configuration\n";
  os << "preset = " << to_string(spec.preset) << '\n';
  os << "sweep_param = " << to_string(spec.sweep_param) << '\n';
  os << "sweep_values = ";
  put_list(os, spec.sweep_values);
  os << '\n';
  os << "trials = " << spec.trials << '\n';
  os << "seed = " << spec.seed << '\n';
  os << "serial = " << (spec.serial ? "true" : "false") << '\n';
  os << "ris_redraw_per_trial = " << (spec.ris_redraw_per_trial ? "true" : "false") << '\n';
  os << "num_antennas = " << scene.num_antennas << '\n';
  os << "num_ris = " << scene.num_ris << '\n';
  os << "num_sources = " << scene.num_sources << '\n';
  os << "num_slots = " << scene.num_slots << '\n';
  os << "source_doas = ";
  put_list(os, scene.source_doas_deg);
  os << '\n';
  os << "dod_alpha = " << scene.dod_alpha_deg << '\n';
  os << "doa_beta = " << scene.doa_beta_deg << '\n';
  os << "wavelength = " << scene.wavelength << '\n';
  if (!scene.ris_positions.empty()) {
    os << "ris_positions = ";
    put_list(os, scene.ris_positions);
    os << '\n';
  }
  if (!scene.antenna_positions.empty()) {
    os << "antenna_positions = ";
    put_list(os, scene.antenna_positions);
    os << '\n';
  }
  os << "snr_db = " << scene.snr_db << '\n';
  os << "noise_max_iter = " << est.noise.max_iter << '\n';
  os << "noise_tol = " << est.noise.tol << '\n';
  os << "tau = " << est.admm.tau << '\n';
  os << "gamma = ";
  if (est.gamma) {
    os << *est.gamma;
  } else {
    os << "auto";
  }
  os << '\n';
  os << "admm_max_iter = " << est.admm.max_iter << '\n';
  os << "eps_abs = " << est.admm.eps_abs << '\n';
  os << "eps_rel = " << est.admm.eps_rel << '\n';
  os << "w_update_factor = " << est.admm.w_update_factor << '\n';
  os << "grid_step = " << est.music.grid_step << '\n';
  os << "scan_min = " << est.music.scan_min << '\n';
  os << "scan_max = " << est.music.scan_max << '\n';
  os << "refine = " << (est.music.refine ? "true" : "false") << '\n';
  os << "clip_deg = ";
  if (est.clip_deg) {
    os << *est.clip_deg;
  } else {
    os << "none";
  }
  os << '\n';
}

}  // namespace risdoa
