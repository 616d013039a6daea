// Command-line front end; talks to the simulator through the C API only.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trihbf_c.h"

namespace {

int die(const char* what) {
  std::fprintf(stderr, "error: %s: %s\n", what, thbf_last_error());
  return 1;
}

thbf_scenario* load_scenario(const std::string& config_path, int workers) {
  thbf_scenario* scenario = nullptr;
  const thbf_status rc = config_path.empty()
                             ? thbf_scenario_defaults(&scenario)
                             : thbf_scenario_from_file(config_path.c_str(), &scenario);
  if (rc != THBF_OK) return nullptr;
  if (workers > 0 && thbf_scenario_set_workers(scenario, workers) != THBF_OK) {
    thbf_scenario_free(scenario);
    return nullptr;
  }
  return scenario;
}

int emit_table(thbf_table* table, const std::string& out_path, const std::string& format) {
  if (!out_path.empty()) {
    if (thbf_table_write(table, out_path.c_str(), format.c_str()) != THBF_OK) {
      thbf_table_free(table);
      return die("write output");
    }
    std::printf("wrote %zu rows to %s\n", thbf_table_rows(table), out_path.c_str());
  } else {
    char* text = nullptr;
    const thbf_status rc = format == "json" ? thbf_table_to_json(table, &text)
                                            : thbf_table_to_csv(table, &text);
    if (rc != THBF_OK) {
      thbf_table_free(table);
      return die("serialize output");
    }
    std::fputs(text, stdout);
    thbf_string_free(text);
  }
  thbf_table_free(table);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tri-hybrid ISAC beamforming simulator"};
  app.require_subcommand(1);

  std::string config_path, out_path, format = "csv", values_arg = "8,16,24,32,40,48";
  std::string trace_out = "trace.csv", method = "mm";
  double delta_c = 0.075;
  int workers = 0;

  auto add_common = [&](CLI::App* cmd, bool config_required) {
    auto* opt = cmd->add_option("--config", config_path, "scenario config (JSON)");
    if (config_required) opt->required();
    cmd->add_option("--out", out_path, "output file (default: stdout)");
    cmd->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--workers", workers, "parallel workers");
  };

  auto* run = app.add_subcommand("run", "Monte-Carlo run, one row per instance");
  add_common(run, true);

  auto* tradeoff = app.add_subcommand("sweep-tradeoff",
                                      "per-delta_c means of rate, sensing power, EE");
  add_common(tradeoff, true);

  auto* nu = app.add_subcommand("sweep-nu", "sweep over elements per waveguide");
  add_common(nu, true);
  nu->add_option("--values", values_arg, "comma-separated N_u values");

  auto* conv = app.add_subcommand("convergence", "single-instance iteration trace");
  conv->add_option("--config", config_path, "scenario config (JSON)");
  conv->add_option("--delta-c", delta_c, "communications weight");
  conv->add_option("--trace-out", trace_out, "trace CSV path");
  conv->add_option("--method", method, "mm or manifold")
      ->check(CLI::IsMember({"mm", "manifold"}));

  auto* verify = app.add_subcommand("verify", "run the oracle suite");
  (void)verify;

  CLI11_PARSE(app, argc, argv);

  if (verify->parsed()) {
    char* report = nullptr;
    int failures = 0;
    if (thbf_verify(&report, &failures) != THBF_OK) return die("verify");
    std::fputs(report, stdout);
    thbf_string_free(report);
    std::printf("%s (%d failure%s)\n", failures == 0 ? "PASS" : "FAIL", failures,
                failures == 1 ? "" : "s");
    return failures == 0 ? 0 : 1;
  }

  thbf_scenario* scenario = load_scenario(config_path, workers);
  if (!scenario) return die("load scenario");

  int rc = 0;
  if (run->parsed() || tradeoff->parsed()) {
    thbf_table* table = nullptr;
    const thbf_status st = run->parsed() ? thbf_run(scenario, &table)
                                         : thbf_sweep_tradeoff(scenario, &table);
    rc = (st == THBF_OK) ? emit_table(table, out_path, format) : die("run scenario");
  } else if (nu->parsed()) {
    std::vector<int> values;
    for (std::size_t pos = 0; pos < values_arg.size();) {
      const std::size_t comma = values_arg.find(',', pos);
      values.push_back(std::stoi(values_arg.substr(pos, comma - pos)));
      pos = comma == std::string::npos ? values_arg.size() : comma + 1;
    }
    thbf_table* table = nullptr;
    rc = (thbf_sweep_nu(scenario, values.data(), values.size(), &table) == THBF_OK)
             ? emit_table(table, out_path, format)
             : die("sweep-nu");
  } else if (conv->parsed()) {
    char* csv = nullptr;
    if (thbf_convergence_trace(scenario, delta_c, method == "manifold", &csv) != THBF_OK) {
      rc = die("convergence");
    } else {
      FILE* f = std::fopen(trace_out.c_str(), "wb");
      if (!f) {
        std::fprintf(stderr, "error: cannot open %s\n", trace_out.c_str());
        rc = 1;
      } else {
        std::fputs(csv, f);
        std::fclose(f);
        std::printf("wrote trace to %s\n", trace_out.c_str());
      }
      thbf_string_free(csv);
    }
  }

  thbf_scenario_free(scenario);
  return rc;
}
