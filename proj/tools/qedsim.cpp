// Batch experiment driver: runs the simulators and the analysis layer from a
// sectioned config file and writes CSV/JSON artifacts for external plotting.
//
// Exit codes: 0 success, 2 config error, 3 runtime error, 4 validation
// failure. Failures also leave a machine-readable error.json in the output
// directory when it is writable.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include "qed/qed.hpp"

namespace {

int exit_code_for(const qed::Error& e) {
  return e.code() == qed::errc::config_error ? 2 : 3;
}

void write_error_json(const std::string& out_dir, const std::string& code,
                      const std::string& message) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) return;
  qed::json j{{"error", {{"code", code}, {"message", message}}}};
  try {
    qed::write_text_file(out_dir + "/error.json", j.dump(2) + "\n");
  } catch (const std::exception&) {
    // the error report is best effort
  }
}

void print_model_summary(const qed::json& j) {
  std::printf("K            = %s\n", j.at("K").dump().c_str());
  std::printf("E[S] (1/mu)  = %s\n", j.at("mean_service").dump().c_str());
  std::printf("sigma_s      = %s\n", j.at("sigma_s").dump().c_str());
  std::printf("c_s          = %s\n", j.at("c_s").dump().c_str());
  std::printf("theta_star   = %s\n", j.at("theta_star").dump().c_str());
  std::printf("sigma        = %s\n", j.at("sigma").dump().c_str());
  std::printf("alpha        = %s\n", j.at("alpha").dump().c_str());
  std::printf("gamma        = %s\n", j.at("gamma").dump().c_str());
  std::printf("psi          = %s\n", j.at("psi").dump().c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-server queue simulator and verification toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "experiment config file")->required();
    sub->add_option("-o,--out", out_override, "override the output directory");
  };

  CLI::App* cmd_run = app.add_subcommand("run", "execute the config's run mode");
  CLI::App* cmd_model = app.add_subcommand("model", "print and export derived constants");
  CLI::App* cmd_sim_finite = app.add_subcommand("simulate-finite", "embedded-chain trace");
  CLI::App* cmd_sim_limit = app.add_subcommand("simulate-limit", "limiting-chain trace");
  CLI::App* cmd_sim_event = app.add_subcommand("simulate-event", "event-driven oracle trace");
  CLI::App* cmd_sim_arrivals = app.add_subcommand("simulate-arrivals", "arrival slot trace");
  CLI::App* cmd_estimate = app.add_subcommand("estimate", "stationary estimate of the queue");
  CLI::App* cmd_exponent = app.add_subcommand("exponent", "tail-exponent fit against theta*");
  CLI::App* cmd_drift = app.add_subcommand("drift", "Lyapunov drift ratios");
  CLI::App* cmd_validate = app.add_subcommand("validate", "invariant sweep, exit 4 on violation");
  CLI::App* cmd_compare = app.add_subcommand("compare", "finite-n vs limit convergence table");
  for (CLI::App* sub : {cmd_run, cmd_model, cmd_sim_finite, cmd_sim_limit, cmd_sim_event,
                        cmd_sim_arrivals, cmd_estimate, cmd_exponent, cmd_drift, cmd_validate,
                        cmd_compare})
    add_common(sub);

  CLI11_PARSE(app, argc, argv);

  std::string out_dir = "out";
  try {
    qed::ExperimentConfig cfg = qed::ExperimentConfig::from_file(config_path);
    if (!out_override.empty()) cfg.out_dir = out_override;
    out_dir = cfg.out_dir;

    qed::RunResult result;
    if (cmd_run->parsed()) {
      result = qed::run_config(cfg);
    } else if (cmd_model->parsed()) {
      result = qed::run_model(cfg);
      print_model_summary(result.summary);
    } else if (cmd_sim_finite->parsed()) {
      result = qed::run_simulate_finite(cfg);
    } else if (cmd_sim_limit->parsed()) {
      result = qed::run_simulate_limit(cfg);
    } else if (cmd_sim_event->parsed()) {
      result = qed::run_simulate_event(cfg);
    } else if (cmd_sim_arrivals->parsed()) {
      result = qed::run_simulate_arrivals(cfg);
    } else if (cmd_estimate->parsed()) {
      result = qed::run_estimate(cfg);
    } else if (cmd_exponent->parsed()) {
      result = qed::run_exponent(cfg);
    } else if (cmd_drift->parsed()) {
      result = qed::run_drift(cfg);
    } else if (cmd_validate->parsed()) {
      result = qed::run_validate(cfg);
      std::printf("total violations: %s\n",
                  result.summary.at("total_violations").dump().c_str());
    } else if (cmd_compare->parsed()) {
      result = qed::run_compare(cfg);
    }

    for (const auto& name : result.artifacts)
      std::fprintf(stderr, "wrote %s/%s\n", cfg.out_dir.c_str(), name.c_str());
    return result.exit_code;
  } catch (const qed::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    write_error_json(out_dir, qed::errc_name(e.code()), e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    write_error_json(out_dir, "Internal", e.what());
    return 3;
  }
}
