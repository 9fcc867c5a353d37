#include "pirs/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "pirs/errors.hpp"

namespace pirs {

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  return out;
}

double to_double(const std::string& v) {
  if (v.empty()) throw InvalidArgument("expected a number, got an empty value");
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (*end != '\0' || errno == ERANGE || !std::isfinite(x))
    throw InvalidArgument("expected a finite number, got '" + v + "'");
  return x;
}

long long to_integer(const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (v.empty() || *end != '\0' || errno == ERANGE) throw InvalidArgument("expected an integer, got '" + v + "'");
  return x;
}

int to_int(const std::string& v) {
  const long long x = to_integer(v);
  if (x < -1000000000LL || x > 1000000000LL) throw InvalidArgument("integer out of range: '" + v + "'");
  return static_cast<int>(x);
}

Point3 to_point(const std::string& v) {
  const auto parts = split(v, ',');
  if (parts.size() != 3) throw InvalidArgument("expected 'x, y, z', got '" + v + "'");
  return {to_double(parts[0]), to_double(parts[1]), to_double(parts[2])};
}

std::vector<int> to_int_list(const std::string& v) {
  std::vector<int> out;
  for (const auto& p : split(v, ',')) out.push_back(to_int(p));
  if (out.empty()) throw InvalidArgument("expected a nonempty comma-separated list");
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const std::vector<std::pair<std::string, Setter>> table = {
      {"frame.N", [](ExperimentConfig& c, const std::string& v) { c.frame.N = to_int(v); }},
      {"frame.M", [](ExperimentConfig& c, const std::string& v) { c.frame.M = to_int(v); }},
      {"frame.I0", [](ExperimentConfig& c, const std::string& v) { c.frame.I0 = to_int(v); }},
      {"frame.M0", [](ExperimentConfig& c, const std::string& v) { c.frame.M0 = to_int(v); }},
      {"power.P_dbm", [](ExperimentConfig& c, const std::string& v) { c.frame.P = dbm_to_watts(to_double(v)); }},
      {"power.sigma2_dbm",
       [](ExperimentConfig& c, const std::string& v) { c.frame.sigma2 = dbm_to_watts(to_double(v)); }},
      {"rate.gamma_db", [](ExperimentConfig& c, const std::string& v) { c.frame.gamma = db_to_linear(to_double(v)); }},
      {"phase.bits", [](ExperimentConfig& c, const std::string& v) { c.frame.bits = to_int(v); }},
      {"estimation.scheme",
       [](ExperimentConfig& c, const std::string& v) { c.frame.scheme = parse_partition_scheme(v); }},
      {"estimation.basis", [](ExperimentConfig& c, const std::string& v) { c.frame.basis = parse_basis_kind(v); }},
      {"beamforming.init", [](ExperimentConfig& c, const std::string& v) { c.frame.init = parse_init_policy(v); }},
      {"beamforming.epsilon", [](ExperimentConfig& c, const std::string& v) { c.frame.epsilon = to_double(v); }},
      {"beamforming.draws", [](ExperimentConfig& c, const std::string& v) { c.frame.draws = to_int(v); }},
      {"geometry.user", [](ExperimentConfig& c, const std::string& v) { c.frame.geometry.user = to_point(v); }},
      {"geometry.ap", [](ExperimentConfig& c, const std::string& v) { c.frame.geometry.ap = to_point(v); }},
      {"geometry.irs_center",
       [](ExperimentConfig& c, const std::string& v) { c.frame.geometry.irs_center = to_point(v); }},
      {"geometry.rows", [](ExperimentConfig& c, const std::string& v) { c.frame.geometry.rows = to_int(v); }},
      {"geometry.cols", [](ExperimentConfig& c, const std::string& v) { c.frame.geometry.cols = to_int(v); }},
      {"geometry.spacing", [](ExperimentConfig& c, const std::string& v) { c.frame.geometry.spacing = to_double(v); }},
      {"link.beta0_db", [](ExperimentConfig& c, const std::string& v) { c.frame.link.beta0 = db_to_linear(to_double(v)); }},
      {"link.alpha_ui", [](ExperimentConfig& c, const std::string& v) { c.frame.link.alpha_ui = to_double(v); }},
      {"link.alpha_ia", [](ExperimentConfig& c, const std::string& v) { c.frame.link.alpha_ia = to_double(v); }},
      // "inf" is a valid Rician factor (pure line of sight), so allow it here.
      {"link.k_ui_db",
       [](ExperimentConfig& c, const std::string& v) {
         c.frame.link.k_ui = v == "inf" ? INFINITY : db_to_linear(to_double(v));
       }},
      {"link.k_ia_db",
       [](ExperimentConfig& c, const std::string& v) {
         c.frame.link.k_ia = v == "inf" ? INFINITY : db_to_linear(to_double(v));
       }},
      {"sweep.M", [](ExperimentConfig& c, const std::string& v) { c.sweep_M = to_int_list(v); }},
      {"sweep.bits", [](ExperimentConfig& c, const std::string& v) { c.sweep_bits = to_int_list(v); }},
      {"trials", [](ExperimentConfig& c, const std::string& v) { c.trials = to_int(v); }},
      {"seed",
       [](ExperimentConfig& c, const std::string& v) {
         const long long s = to_integer(v);
         if (s < 0) throw InvalidArgument("seed must be >= 0");
         c.frame.seed = static_cast<std::uint64_t>(s);
       }},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, _] : setters()) k.push_back(name);
    return k;
  }();
  return keys;
}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  std::map<std::string, const Setter*> lookup;
  for (const auto& [name, fn] : setters()) lookup[name] = &fn;

  ExperimentConfig cfg;
  std::vector<std::string> errors;
  std::map<std::string, int> seen;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string where = source + ":" + std::to_string(line_no);
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back(where + ": expected 'key = value', got '" + line + "'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = lookup.find(key);
    if (it == lookup.end()) {
      errors.push_back(where + ": unknown key '" + key + "'");
      continue;
    }
    if (auto prev = seen.find(key); prev != seen.end()) {
      errors.push_back(where + ": duplicate key '" + key + "' (first set on line " + std::to_string(prev->second) + ")");
      continue;
    }
    seen[key] = line_no;
    try {
      (*it->second)(cfg, value);
    } catch (const std::exception& e) {
      errors.push_back(where + ": " + key + ": " + e.what());
    }
  }

  for (const auto& v : cfg.frame.violations()) errors.push_back(source + ": " + v);
  if (cfg.trials < 1) errors.push_back(source + ": trials must be >= 1");
  for (int M : cfg.sweep_M)
    if (M < 1) errors.push_back(source + ": sweep.M entries must be >= 1");
  for (int b : cfg.sweep_bits)
    if (b < 0 || b > PhaseAlphabet::kMaxBits) errors.push_back(source + ": sweep.bits entries must be in 0..16");

  if (!errors.empty()) {
    std::ostringstream os;
    os << errors.size() << " configuration error" << (errors.size() == 1 ? "" : "s") << ":";
    for (const auto& e : errors) os << "\n  " << e;
    throw ConfigError(os.str());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), path);
}

FrameConfig validate_config(const std::string& path) { return load_config(path).frame; }

}  // namespace pirs
