#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qed/convergence.hpp"
#include "qed/derived.hpp"
#include "qed/drift.hpp"
#include "qed/errors.hpp"
#include "qed/estimate.hpp"
#include "qed/mat.hpp"
#include "qed/mgf.hpp"
#include "qed/reflected_walk.hpp"
#include "qed/service.hpp"
#include "qed/tail_fit.hpp"
#include "qed/waiting.hpp"

namespace qed {

using json = nlohmann::json;

/// Round-trip-exact decimal form, used everywhere a double lands in a CSV so
/// that re-runs are byte-comparable.
inline std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) fail(errc::io_error, "cannot open '" + path + "' for writing");
    for (std::size_t i = 0; i < header.size(); ++i)
      out_ << (i ? "," : "") << header[i];
    out_ << "\n";
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) fail(errc::io_error, "cannot open '" + path + "' for writing");
  out << text;
}

inline json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

inline json service_to_json(const ServiceDistribution& d) {
  json p = json::object();
  for (int k = 1; k <= d.max_service(); ++k)
    if (d.pmf_at(k) > 0.0) p[std::to_string(k)] = d.pmf_at(k);
  return json{{"p", p}};
}

inline ServiceDistribution service_from_json(const json& j) {
  if (!j.contains("p") || !j.at("p").is_object())
    fail(errc::config_error, "service json must carry an object under 'p'");
  std::map<int, double> mass;
  for (const auto& [key, value] : j.at("p").items()) mass[std::stoi(key)] = value.get<double>();
  return ServiceDistribution::from_mass(mass);
}

inline json derived_to_json(const DerivedConstants& d) {
  return json{{"theta_star", d.theta_star},
              {"sigma", matrix_to_json(d.sigma)},
              {"alpha", d.alpha},
              {"gamma", matrix_to_json(d.gamma)},
              {"psi", d.psi}};
}

inline json estimate_to_json(const StationaryEstimate& e) {
  return json{{"mean", e.mean},
              {"variance", e.variance},
              {"atom_at_zero", e.atom_at_zero},
              {"batch_ci", e.batch_ci},
              {"batch_count", e.batch_count},
              {"sample_count", e.sample_count},
              {"bin_width", e.bin_width},
              {"x_lo", e.x_lo},
              {"x_hi", e.x_hi},
              {"below_range", e.below_range},
              {"above_range", e.above_range}};
}

inline void write_histogram_csv(const StationaryEstimate& e, const std::string& path) {
  CsvWriter csv(path, {"bin_lo", "bin_hi", "count"});
  for (std::size_t i = 0; i < e.counts.size(); ++i)
    csv.row({fmt_double(e.bin_lo(i)), fmt_double(e.bin_lo(i) + e.bin_width),
             std::to_string(e.counts[i])});
}

inline json tail_fit_to_json(const TailFit& f) {
  return json{{"x_lo", f.x_lo},
              {"x_hi", f.x_hi},
              {"slope", f.slope},
              {"intercept", f.intercept},
              {"r_squared", f.r_squared},
              {"slope_se", f.slope_se},
              {"theta_star_ref", f.theta_star_ref},
              {"rel_error", f.rel_error},
              {"bins_used", f.bins_used},
              {"points", {{"x", f.xs}, {"log_ccdf", f.log_ccdf}}}};
}

inline json drift_to_json(const DriftReport& r) {
  json j{{"mode", r.mode == DriftMode::geometric ? "geometric" : "quadratic"},
         {"theta", r.theta},
         {"exception_frequency", r.exception_frequency},
         {"steps", r.steps},
         {"steps_outside", r.steps_outside}};
  if (r.mode == DriftMode::geometric) {
    j["ratio_outside"] = r.ratio_outside;
    j["ratio_outside_se"] = r.ratio_outside_se;
    j["growth_ratio_all"] = r.growth_ratio_all;
    j["growth_ratio_all_se"] = r.growth_ratio_all_se;
  } else {
    j["delta"] = r.delta;
    j["delta_se"] = r.delta_se;
    j["psi_intercept"] = r.psi_intercept;
  }
  return j;
}

inline json mgf_to_json(const std::vector<MgfPoint>& pts) {
  json rows = json::array();
  for (const auto& p : pts)
    rows.push_back(json{{"theta", p.theta},
                        {"estimate", p.estimate},
                        {"se", p.se},
                        {"top_share", p.top_share},
                        {"unreliable", p.unreliable}});
  return rows;
}

inline json convergence_to_json(const ConvergenceTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows)
    rows.push_back(json{{"n", r.n}, {"ks", r.ks}, {"se", r.se}, {"samples", r.samples}});
  return json{{"rows", rows},
              {"limit_samples", t.limit_samples},
              {"non_increasing_within_slack", t.non_increasing_within_slack}};
}

inline void write_convergence_csv(const ConvergenceTable& t, const std::string& path) {
  CsvWriter csv(path, {"n", "ks", "se", "samples"});
  for (const auto& r : t.rows)
    csv.row({std::to_string(r.n), fmt_double(r.ks), fmt_double(r.se), std::to_string(r.samples)});
}

inline void write_oracle_csv(const ReflectedWalkCdf& cdf, const std::string& path) {
  CsvWriter csv(path, {"x", "cdf"});
  for (std::size_t i = 0; i < cdf.grid.size(); ++i)
    csv.row({fmt_double(cdf.grid[i]), fmt_double(cdf.cdf[i])});
}

}  // namespace qed
