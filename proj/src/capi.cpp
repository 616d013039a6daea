#include "trihbf_c.h"

#include <cstring>
#include <fstream>

#include <json.hpp>
#include <sstream>
#include <stdexcept>
#include <string>

#include "trihbf/harness.hpp"
#include "trihbf/oracle.hpp"

using namespace trihbf;

struct thbf_scenario {
  ScenarioConfig config;
};

struct thbf_table {
  bool aggregated = false;
  std::vector<ResultRow> rows;
  std::vector<AggregateRow> aggregates;
};

namespace {

thread_local std::string g_last_error;

thbf_status fail(thbf_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
thbf_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    return fail(THBF_ERR_INVALID_ARG, e.what());
  } catch (const std::domain_error& e) {
    return fail(THBF_ERR_NUMERIC, e.what());
  } catch (const std::exception& e) {
    return fail(THBF_ERR_INTERNAL, e.what());
  }
}

std::string table_csv(const thbf_table& table) {
  return table.aggregated ? aggregates_to_csv(table.aggregates)
                          : rows_to_csv(table.rows);
}

std::string table_json(const thbf_table& table) {
  return table.aggregated ? aggregates_to_json(table.aggregates)
                          : rows_to_json(table.rows);
}

}  // namespace

extern "C" {

const char* thbf_version(void) { return "0.1.0"; }

const char* thbf_last_error(void) { return g_last_error.c_str(); }

void thbf_string_free(char* s) { delete[] s; }

thbf_status thbf_scenario_from_json(const char* json_text, thbf_scenario** out) {
  if (!json_text || !out) return fail(THBF_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    try {
      *out = new thbf_scenario{scenario_from_json(json_text)};
    } catch (const nlohmann::json::exception& e) {
      return fail(THBF_ERR_PARSE, e.what());
    }
    return THBF_OK;
  });
}

thbf_status thbf_scenario_from_file(const char* path, thbf_scenario** out) {
  if (!path || !out) return fail(THBF_ERR_INVALID_ARG, "null argument");
  std::ifstream in(path, std::ios::binary);
  if (!in) return fail(THBF_ERR_IO, std::string("cannot read config file: ") + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return thbf_scenario_from_json(buf.str().c_str(), out);
}

thbf_status thbf_scenario_defaults(thbf_scenario** out) {
  if (!out) return fail(THBF_ERR_INVALID_ARG, "null argument");
  *out = new thbf_scenario{};
  return THBF_OK;
}

thbf_status thbf_scenario_to_json(const thbf_scenario* scenario, char** json_out) {
  if (!scenario || !json_out) return fail(THBF_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    *json_out = dup_string(scenario_to_json(scenario->config));
    return THBF_OK;
  });
}

thbf_status thbf_scenario_set_workers(thbf_scenario* scenario, int workers) {
  if (!scenario) return fail(THBF_ERR_INVALID_ARG, "null scenario");
  if (workers < 1) return fail(THBF_ERR_INVALID_ARG, "workers must be >= 1");
  scenario->config.workers = workers;
  return THBF_OK;
}

void thbf_scenario_free(thbf_scenario* scenario) { delete scenario; }

thbf_status thbf_run(const thbf_scenario* scenario, thbf_table** out) {
  if (!scenario || !out) return fail(THBF_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    auto* table = new thbf_table{};
    table->rows = run_scenario(scenario->config);
    *out = table;
    return THBF_OK;
  });
}

thbf_status thbf_sweep_tradeoff(const thbf_scenario* scenario, thbf_table** out) {
  if (!scenario || !out) return fail(THBF_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    auto* table = new thbf_table{};
    table->aggregated = true;
    table->aggregates = sweep_tradeoff(scenario->config);
    *out = table;
    return THBF_OK;
  });
}

thbf_status thbf_sweep_nu(const thbf_scenario* scenario, const int* nu_values,
                          size_t n_values, thbf_table** out) {
  if (!scenario || !out || (!nu_values && n_values > 0))
    return fail(THBF_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    auto* table = new thbf_table{};
    table->aggregated = true;
    table->aggregates =
        sweep_nu(scenario->config, std::vector<int>(nu_values, nu_values + n_values));
    *out = table;
    return THBF_OK;
  });
}

size_t thbf_table_rows(const thbf_table* table) {
  if (!table) return 0;
  return table->aggregated ? table->aggregates.size() : table->rows.size();
}

thbf_status thbf_table_to_csv(const thbf_table* table, char** csv_out) {
  if (!table || !csv_out) return fail(THBF_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    *csv_out = dup_string(table_csv(*table));
    return THBF_OK;
  });
}

thbf_status thbf_table_to_json(const thbf_table* table, char** json_out) {
  if (!table || !json_out) return fail(THBF_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    *json_out = dup_string(table_json(*table));
    return THBF_OK;
  });
}

thbf_status thbf_table_write(const thbf_table* table, const char* path,
                             const char* format) {
  if (!table || !path || !format) return fail(THBF_ERR_INVALID_ARG, "null argument");
  const std::string fmt = format;
  if (fmt != "csv" && fmt != "json")
    return fail(THBF_ERR_INVALID_ARG, "format must be csv or json");
  return guarded([&] {
    try {
      write_file(path, fmt == "csv" ? table_csv(*table) : table_json(*table));
    } catch (const std::runtime_error& e) {
      return fail(THBF_ERR_IO, e.what());
    }
    return THBF_OK;
  });
}

void thbf_table_free(thbf_table* table) { delete table; }

thbf_status thbf_convergence_trace(const thbf_scenario* scenario, double delta_c,
                                   int use_manifold, char** csv_out) {
  if (!scenario || !csv_out) return fail(THBF_ERR_INVALID_ARG, "null argument");
  if (delta_c < 0.0 || delta_c > 1.0)
    return fail(THBF_ERR_INVALID_ARG, "delta_c must lie in [0, 1]");
  return guarded([&] {
    const Solution sol = convergence_run(scenario->config, delta_c, use_manifold != 0);
    *csv_out = dup_string(trace_to_csv(sol.trace));
    return THBF_OK;
  });
}

thbf_status thbf_verify(char** report_out, int* n_failures) {
  if (!report_out || !n_failures) return fail(THBF_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    std::string report;
    *n_failures = run_verification(report);
    *report_out = dup_string(report);
    return THBF_OK;
  });
}

}  // extern "C"
