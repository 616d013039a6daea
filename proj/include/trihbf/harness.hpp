#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trihbf/baselines.hpp"
#include "trihbf/channel.hpp"
#include "trihbf/solver.hpp"

namespace trihbf {

struct ScenarioConfig {
  int n_waveguides = 8;
  int elements_per_waveguide = 16;
  double carrier_frequency_hz = 28e9;
  double tx_power_mw = 10.0;    // 10 dBm
  double noise_power_mw = 1.0;  // 0 dBm
  std::vector<double> delta_cs = {0.0, 0.075, 0.25, 0.5, 0.75, 1.0};  // delta_s = 1 - delta_c
  std::vector<ArchitectureKind> architectures = {
      ArchitectureKind::TriHybrid, ArchitectureKind::FdSn, ArchitectureKind::FdSa,
      ArchitectureKind::HbfSn, ArchitectureKind::HbfSa};
  int n_realizations = 100;
  std::uint64_t base_seed = 1;
  SvChannelParams channel;
  double attenuation_per_meter = 0.6;
  double wavenumber_per_meter = 827.67;
  PowerModel power_model;
  SolverOptions solver;
  int workers = 1;
  // wall_ms is emitted as 0 unless set, so identical configs produce
  // byte-identical output files
  bool record_timing = false;
  // solve the tri-hybrid instances with the manifold CG variant
  bool tri_manifold = false;
};

// Powers enter the JSON config in dBm ("tx_power_dbm", "noise_power_dbm") and
// are converted to linear mW here; all other fields mirror ScenarioConfig.
ScenarioConfig scenario_from_json(const std::string& json_text);
std::string scenario_to_json(const ScenarioConfig& config);

struct ResultRow {
  std::string arch;
  double delta_c = 0.0;
  std::uint64_t seed = 0;
  double snr = 0.0;
  double rate = 0.0;
  double sensing_mw = 0.0;
  double tx_mw = 0.0;
  double ee = 0.0;
  int iters = 0;
  double wall_ms = 0.0;
  bool converged = false;
};

struct AggregateRow {
  std::string arch;
  double delta_c = 0.0;
  int n_u = 0;
  int n = 0;
  double mean_snr = 0.0;
  double mean_rate = 0.0;
  double se_rate = 0.0;
  double mean_sensing_mw = 0.0;
  double se_sensing_mw = 0.0;
  double mean_ee = 0.0;
  double se_ee = 0.0;
};

// Geometry-independent propagation draw of one realization; every
// architecture and weight sees the same draw.
struct RealizationDraw {
  std::uint64_t seed = 0;
  SvDraw channel;
  TargetDirection target;
};

RealizationDraw make_realization_draw(const ScenarioConfig& config, int index);

// One row per (architecture, delta_c, realization), sorted by
// (arch, delta_c, seed). Solver failures are recorded as non-converged rows.
std::vector<ResultRow> run_scenario(const ScenarioConfig& config);

std::vector<AggregateRow> aggregate_rows(const std::vector<ResultRow>& rows, int n_u);

std::vector<AggregateRow> sweep_tradeoff(const ScenarioConfig& config);

// Rebuilds geometry and descriptors per N_u at the configured weights.
std::vector<AggregateRow> sweep_nu(const ScenarioConfig& config,
                                   const std::vector<int>& nu_values);

std::string rows_to_csv(const std::vector<ResultRow>& rows);
std::string rows_to_json(const std::vector<ResultRow>& rows);
std::vector<ResultRow> rows_from_json(const std::string& json_text);
std::string aggregates_to_csv(const std::vector<AggregateRow>& rows);
std::string aggregates_to_json(const std::vector<AggregateRow>& rows);

void write_file(const std::string& path, const std::string& content);

// Single tri-hybrid instance at the given weight with trace capture.
Solution convergence_run(const ScenarioConfig& config, double delta_c, bool manifold);

}  // namespace trihbf
