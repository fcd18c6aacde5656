#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qed/arrivals.hpp"
#include "qed/errors.hpp"
#include "qed/service.hpp"

namespace qed {

enum class RunMode { model, finite, limit, event, compare, validate };

inline RunMode parse_run_mode(const std::string& s) {
  if (s == "model") return RunMode::model;
  if (s == "finite") return RunMode::finite;
  if (s == "limit") return RunMode::limit;
  if (s == "event") return RunMode::event;
  if (s == "compare") return RunMode::compare;
  if (s == "validate") return RunMode::validate;
  fail(errc::config_error, "unknown run.mode '" + s + "'");
}

inline std::string run_mode_name(RunMode m) {
  switch (m) {
    case RunMode::model: return "model";
    case RunMode::finite: return "finite";
    case RunMode::limit: return "limit";
    case RunMode::event: return "event";
    case RunMode::compare: return "compare";
    case RunMode::validate: return "validate";
  }
  return "?";
}

/// Flat sectioned key=value config. Hand-editable and diff-friendly; every
/// resolved value lands in the manifest.
class ConfigFile {
 public:
  static ConfigFile parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::config_error, "cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str());
  }

  static ConfigFile parse_string(const std::string& text) {
    ConfigFile cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find_first_of("#;");
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']')
          fail(errc::config_error, "line " + std::to_string(lineno) + ": unterminated section");
        section = trim(line.substr(1, line.size() - 2));
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        fail(errc::config_error, "line " + std::to_string(lineno) + ": expected key = value");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (section.empty() || key.empty())
        fail(errc::config_error, "line " + std::to_string(lineno) + ": key outside a section");
      cfg.values_[section + "." + key] = value;
    }
    return cfg;
  }

  bool has(const std::string& dotted) const { return values_.count(dotted) > 0; }

  std::string get(const std::string& dotted) const {
    const auto it = values_.find(dotted);
    if (it == values_.end()) fail(errc::config_error, "missing key " + dotted);
    return it->second;
  }

  std::string get_or(const std::string& dotted, const std::string& fallback) const {
    const auto it = values_.find(dotted);
    return it == values_.end() ? fallback : it->second;
  }

  double get_double(const std::string& dotted) const { return to_double(get(dotted), dotted); }
  double get_double_or(const std::string& dotted, double fallback) const {
    return has(dotted) ? get_double(dotted) : fallback;
  }
  long get_long(const std::string& dotted) const { return to_long(get(dotted), dotted); }
  long get_long_or(const std::string& dotted, long fallback) const {
    return has(dotted) ? get_long(dotted) : fallback;
  }

  std::vector<double> get_doubles_or(const std::string& dotted,
                                     std::vector<double> fallback) const {
    if (!has(dotted)) return fallback;
    std::vector<double> out;
    for (const auto& tok : split_list(get(dotted))) out.push_back(to_double(tok, dotted));
    return out;
  }

  std::vector<long> get_longs_or(const std::string& dotted, std::vector<long> fallback) const {
    if (!has(dotted)) return fallback;
    std::vector<long> out;
    for (const auto& tok : split_list(get(dotted))) out.push_back(to_long(tok, dotted));
    return out;
  }

  const std::map<std::string, std::string>& values() const { return values_; }

  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }

  static std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s + ",") {
      if (c == ',' || c == ' ' || c == '\t') {
        if (!cur.empty()) out.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    return out;
  }

 private:
  static double to_double(const std::string& s, const std::string& key) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      fail(errc::config_error, "key " + key + ": '" + s + "' is not a number");
    }
  }
  static long to_long(const std::string& s, const std::string& key) {
    try {
      std::size_t used = 0;
      const long v = std::stol(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      fail(errc::config_error, "key " + key + ": '" + s + "' is not an integer");
    }
  }

  std::map<std::string, std::string> values_;
};

inline ArrivalFamily parse_family(const std::string& text) {
  const std::string s = ConfigFile::trim(text);
  if (s == "deterministic") return ArrivalFamily::deterministic();
  if (s == "exponential") return ArrivalFamily::exponential();
  if (s == "uniform") return ArrivalFamily::uniform0_2();
  const auto open = s.find('(');
  if (open != std::string::npos && s.back() == ')') {
    const std::string head = s.substr(0, open);
    const std::string arg = s.substr(open + 1, s.size() - open - 2);
    try {
      if (head == "erlang") return ArrivalFamily::erlang(std::stoi(arg));
      if (head == "hyperexp" || head == "hyperexponential")
        return ArrivalFamily::hyperexponential(std::stod(arg));
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      fail(errc::config_error, "bad family argument in '" + text + "'");
    }
  }
  fail(errc::config_error, "unknown arrival family '" + text + "'");
}

inline std::map<int, double> parse_service_mass(const std::string& text) {
  std::map<int, double> mass;
  for (const auto& tok : ConfigFile::split_list(text)) {
    const auto colon = tok.find(':');
    if (colon == std::string::npos)
      fail(errc::config_error, "service mass entry '" + tok + "' is not k:p");
    try {
      mass[std::stoi(tok.substr(0, colon))] = std::stod(tok.substr(colon + 1));
    } catch (const std::exception&) {
      fail(errc::config_error, "service mass entry '" + tok + "' is not k:p");
    }
  }
  if (mass.empty()) fail(errc::config_error, "empty service mass");
  return mass;
}

/// Fully resolved experiment description.
struct ExperimentConfig {
  // model
  std::map<int, double> service_mass;
  double beta = 1.0;
  // arrivals
  ArrivalFamily family = ArrivalFamily::exponential();
  bool family_given = false;
  double ca_override = -1.0;  // limit mode may pin c_a without a family
  // run
  RunMode mode = RunMode::limit;
  int n = 50;
  std::vector<long> n_list{25, 100, 400};
  long warmup = 0;  // 0: per-mode default
  long samples = 1000000;
  int replications = 1;
  int workers = 1;
  std::uint64_t seed = 1;
  // analysis
  double bin_width = 0.02;
  double hist_max = 50.0;
  int batches = 32;
  long tail_min_bin_count = 100;
  std::vector<double> theta_grid;
  std::vector<double> drift_multipliers{0.5, 1.5};
  long drift_steps = 1000000;
  // output
  std::string out_dir = "out";
  bool write_csv = true;
  bool write_json = true;

  double ca() const { return ca_override >= 0.0 ? ca_override : family.ca(); }

  ServiceDistribution dist() const { return ServiceDistribution::from_mass(service_mass); }

  static ExperimentConfig from_file(const std::string& path) {
    return from_config(ConfigFile::parse_file(path));
  }

  static ExperimentConfig from_string(const std::string& text) {
    return from_config(ConfigFile::parse_string(text));
  }

  static ExperimentConfig from_config(const ConfigFile& cfg) {
    ExperimentConfig e;
    e.service_mass = parse_service_mass(cfg.get("model.service"));
    e.beta = cfg.get_double("model.beta");

    if (cfg.has("arrivals.family")) {
      e.family = parse_family(cfg.get("arrivals.family"));
      e.family_given = true;
    }
    if (cfg.has("arrivals.c_a")) e.ca_override = cfg.get_double("arrivals.c_a");

    e.mode = parse_run_mode(cfg.get_or("run.mode", "limit"));
    e.n = static_cast<int>(cfg.get_long_or("run.n", 50));
    e.n_list = cfg.get_longs_or("run.n_list", e.n_list);
    e.warmup = cfg.get_long_or("run.warmup", cfg.get_long_or("run.warmup_slots", 0));
    e.samples = cfg.get_long_or("run.samples", cfg.get_long_or("run.sample_slots", 1000000));
    e.replications = static_cast<int>(cfg.get_long_or("run.replications", 1));
    e.workers = static_cast<int>(cfg.get_long_or("run.workers", 1));
    e.seed = static_cast<std::uint64_t>(cfg.get_long_or("run.seed", 1));

    e.bin_width = cfg.get_double_or("analysis.bin_width", 0.02);
    e.hist_max = cfg.get_double_or("analysis.hist_max", 50.0);
    e.batches = static_cast<int>(cfg.get_long_or("analysis.batches", 32));
    e.tail_min_bin_count = cfg.get_long_or("analysis.tail_min_bin_count", 100);
    e.theta_grid = cfg.get_doubles_or("analysis.theta_grid", {});
    e.drift_multipliers = cfg.get_doubles_or("analysis.drift_theta_multipliers", {0.5, 1.5});
    e.drift_steps = cfg.get_long_or("analysis.drift_steps", 1000000);

    e.out_dir = cfg.get_or("output.dir", "out");
    const std::string formats = cfg.get_or("output.formats", "csv,json");
    e.write_csv = formats.find("csv") != std::string::npos;
    e.write_json = formats.find("json") != std::string::npos;

    if (e.replications < 1) fail(errc::config_error, "run.replications must be >= 1");
    if (e.workers < 1) fail(errc::config_error, "run.workers must be >= 1");
    if (e.samples < 1) fail(errc::config_error, "run.samples must be >= 1");
    if (e.bin_width <= 0.0) fail(errc::config_error, "analysis.bin_width must be positive");
    if (e.batches < 20) fail(errc::config_error, "analysis.batches must be >= 20");
    return e;
  }
};

}  // namespace qed
