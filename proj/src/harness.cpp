#include "trihbf/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace trihbf {

namespace {

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

constexpr std::uint64_t kTargetStreamOffset = 0x517cc1b727220a95ULL;

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

ScenarioConfig scenario_from_json(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text);
  ScenarioConfig c;
  c.n_waveguides = j.value("n_waveguides", c.n_waveguides);
  c.elements_per_waveguide = j.value("elements_per_waveguide", c.elements_per_waveguide);
  c.carrier_frequency_hz = j.value("carrier_frequency_hz", c.carrier_frequency_hz);
  if (j.contains("tx_power_dbm")) c.tx_power_mw = dbm_to_mw(j["tx_power_dbm"].get<double>());
  if (j.contains("noise_power_dbm"))
    c.noise_power_mw = dbm_to_mw(j["noise_power_dbm"].get<double>());
  if (j.contains("delta_cs")) c.delta_cs = j["delta_cs"].get<std::vector<double>>();
  if (j.contains("architectures")) {
    c.architectures.clear();
    for (const auto& name : j["architectures"])
      c.architectures.push_back(architecture_from_name(name.get<std::string>()));
  }
  c.n_realizations = j.value("n_realizations", c.n_realizations);
  c.base_seed = j.value("base_seed", c.base_seed);
  if (j.contains("channel")) {
    const auto& jc = j["channel"];
    c.channel.n_paths = jc.value("n_paths", c.channel.n_paths);
    if (jc.contains("azimuth_range")) {
      c.channel.azimuth_lo = jc["azimuth_range"][0].get<double>();
      c.channel.azimuth_hi = jc["azimuth_range"][1].get<double>();
    }
    if (jc.contains("elevation_range")) {
      c.channel.elevation_lo = jc["elevation_range"][0].get<double>();
      c.channel.elevation_hi = jc["elevation_range"][1].get<double>();
    }
  }
  c.attenuation_per_meter = j.value("attenuation_per_meter", c.attenuation_per_meter);
  c.wavenumber_per_meter = j.value("wavenumber_per_meter", c.wavenumber_per_meter);
  if (j.contains("power_model")) {
    const auto& jp = j["power_model"];
    c.power_model.amp_efficiency = jp.value("amp_efficiency", c.power_model.amp_efficiency);
    c.power_model.p_rf_mw = jp.value("p_rf_mw", c.power_model.p_rf_mw);
    c.power_model.p_ps_mw = jp.value("p_ps_mw", c.power_model.p_ps_mw);
    c.power_model.p_elem_mw = jp.value("p_elem_mw", c.power_model.p_elem_mw);
    c.power_model.p_bb_mw = jp.value("p_bb_mw", c.power_model.p_bb_mw);
  }
  if (j.contains("solver")) {
    const auto& js = j["solver"];
    c.solver.max_iterations = js.value("max_iterations", c.solver.max_iterations);
    c.solver.rel_tolerance = js.value("rel_tolerance", c.solver.rel_tolerance);
    c.solver.alt_gradient = js.value("alt_gradient", c.solver.alt_gradient);
    c.solver.inner_sweeps = js.value("inner_sweeps", c.solver.inner_sweeps);
    c.solver.restarts = js.value("restarts", c.solver.restarts);
  }
  c.workers = j.value("workers", c.workers);
  c.record_timing = j.value("record_timing", c.record_timing);
  c.tri_manifold = j.value("tri_manifold", c.tri_manifold);

  for (double dc : c.delta_cs)
    if (dc < 0.0 || dc > 1.0)
      throw std::invalid_argument("scenario config: delta_c must lie in [0, 1]");
  if (c.n_realizations < 1)
    throw std::invalid_argument("scenario config: n_realizations must be >= 1");
  if (c.workers < 1) throw std::invalid_argument("scenario config: workers must be >= 1");

  c.channel.sigma2_mw = c.noise_power_mw;
  return c;
}

std::string scenario_to_json(const ScenarioConfig& c) {
  nlohmann::json j;
  j["n_waveguides"] = c.n_waveguides;
  j["elements_per_waveguide"] = c.elements_per_waveguide;
  j["carrier_frequency_hz"] = c.carrier_frequency_hz;
  j["tx_power_dbm"] = mw_to_dbm(c.tx_power_mw);
  j["noise_power_dbm"] = mw_to_dbm(c.noise_power_mw);
  j["delta_cs"] = c.delta_cs;
  j["architectures"] = nlohmann::json::array();
  for (auto kind : c.architectures) j["architectures"].push_back(architecture_name(kind));
  j["n_realizations"] = c.n_realizations;
  j["base_seed"] = c.base_seed;
  j["channel"] = {{"n_paths", c.channel.n_paths},
                  {"azimuth_range", {c.channel.azimuth_lo, c.channel.azimuth_hi}},
                  {"elevation_range", {c.channel.elevation_lo, c.channel.elevation_hi}}};
  j["attenuation_per_meter"] = c.attenuation_per_meter;
  j["wavenumber_per_meter"] = c.wavenumber_per_meter;
  j["power_model"] = {{"amp_efficiency", c.power_model.amp_efficiency},
                      {"p_rf_mw", c.power_model.p_rf_mw},
                      {"p_ps_mw", c.power_model.p_ps_mw},
                      {"p_elem_mw", c.power_model.p_elem_mw},
                      {"p_bb_mw", c.power_model.p_bb_mw}};
  j["solver"] = {{"max_iterations", c.solver.max_iterations},
                 {"rel_tolerance", c.solver.rel_tolerance},
                 {"alt_gradient", c.solver.alt_gradient},
                 {"inner_sweeps", c.solver.inner_sweeps},
                 {"restarts", c.solver.restarts}};
  j["workers"] = c.workers;
  j["record_timing"] = c.record_timing;
  j["tri_manifold"] = c.tri_manifold;
  return j.dump(2);
}

RealizationDraw make_realization_draw(const ScenarioConfig& config, int index) {
  RealizationDraw draw;
  draw.seed = config.base_seed + static_cast<std::uint64_t>(index);
  SvChannelParams params = config.channel;
  params.sigma2_mw = config.noise_power_mw;
  draw.channel = sample_sv_paths(params, draw.seed);
  Rng target_rng(draw.seed + kTargetStreamOffset);
  draw.target = sample_direction(params, target_rng);
  return draw;
}

namespace {

struct ArchContext {
  ArchitectureKind kind;
  ArrayGeometry geometry;
  ArchitectureDescriptor desc;
  CVec q;  // tri-hybrid only
};

std::vector<ArchContext> build_contexts(const ScenarioConfig& config) {
  const ArrayGeometry base = build_dma_geometry(
      config.n_waveguides, config.elements_per_waveguide, config.carrier_frequency_hz);
  std::vector<ArchContext> contexts;
  for (auto kind : config.architectures) {
    ArchContext ctx;
    ctx.kind = kind;
    std::tie(ctx.geometry, ctx.desc) = build_architecture(kind, base);
    if (kind == ArchitectureKind::TriHybrid)
      ctx.q = propagation_gains(ctx.geometry, config.attenuation_per_meter,
                                config.wavenumber_per_meter);
    contexts.push_back(std::move(ctx));
  }
  return contexts;
}

ResultRow solve_one(const ScenarioConfig& config, const ArchContext& ctx,
                    const RealizationDraw& draw, double delta_c) {
  ResultRow row;
  row.arch = architecture_name(ctx.kind);
  row.delta_c = delta_c;
  row.seed = draw.seed;

  const auto t0 = std::chrono::steady_clock::now();
  try {
    const ChannelRealization ch = realize_channel(ctx.geometry, draw.channel);
    const CVec g = steering_vector(ctx.geometry, draw.target);
    IsacProblem problem(ch.normalized_channel, g, delta_c, 1.0 - delta_c,
                        config.tx_power_mw);
    SolverOptions options = config.solver;
    options.seed = draw.seed;

    switch (ctx.kind) {
      case ArchitectureKind::TriHybrid: {
        const Solution sol = config.tri_manifold
                                 ? solve_manifold(problem, ctx.geometry, ctx.q, options)
                                 : solve(problem, ctx.geometry, ctx.q, options);
        row.snr = snr(problem, sol.dma.weights, sol.analog.weights, sol.digital.value);
        row.sensing_mw =
            sensing_power(problem, sol.dma.weights, sol.analog.weights, sol.digital.value);
        row.tx_mw = transmit_power(sol.dma.weights, sol.analog.weights, sol.digital.value);
        row.iters = sol.iterations;
        row.converged = sol.converged;
        break;
      }
      case ArchitectureKind::FdSn:
      case ArchitectureKind::FdSa: {
        const FdSolution sol = solve_fd(problem);
        row.snr = std::norm(cdot(problem.comm_channel, sol.precoder));
        row.sensing_mw = std::norm(cdot(problem.sensing_steering, sol.precoder));
        row.tx_mw = norm2(sol.precoder);
        row.iters = 1;
        row.converged = true;
        break;
      }
      case ArchitectureKind::HbfSn:
      case ArchitectureKind::HbfSa: {
        const HbfSolution sol = solve_hbf(problem, options);
        row.snr = std::norm(cdot(problem.comm_channel, sol.phases) * sol.w);
        row.sensing_mw = std::norm(cdot(problem.sensing_steering, sol.phases) * sol.w);
        row.tx_mw = std::norm(sol.w) * sol.phases.size();
        row.iters = sol.iterations;
        row.converged = sol.converged;
        break;
      }
    }
    row.rate = achievable_rate(row.snr);
    row.ee = energy_efficiency(row.rate, row.tx_mw, config.power_model, ctx.desc);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "solver failure (%s, delta_c=%g, seed=%llu): %s\n",
                 row.arch.c_str(), delta_c, static_cast<unsigned long long>(row.seed),
                 e.what());
    row.converged = false;
  }
  if (config.record_timing)
    row.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
  return row;
}

}  // namespace

std::vector<ResultRow> run_scenario(const ScenarioConfig& config) {
  const std::vector<ArchContext> contexts = build_contexts(config);

  std::vector<std::vector<ResultRow>> per_realization(config.n_realizations);
  auto work = [&](int r) {
    const RealizationDraw draw = make_realization_draw(config, r);
    auto& rows = per_realization[r];
    for (const auto& ctx : contexts)
      for (double delta_c : config.delta_cs)
        rows.push_back(solve_one(config, ctx, draw, delta_c));
  };

  const int n_workers = std::min(config.workers, config.n_realizations);
  if (n_workers <= 1) {
    for (int r = 0; r < config.n_realizations; ++r) work(r);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w) {
      pool.emplace_back([&, w] {
        for (int r = w; r < config.n_realizations; r += n_workers) work(r);
      });
    }
    for (auto& t : pool) t.join();
  }

  std::vector<ResultRow> rows;
  for (auto& chunk : per_realization)
    for (auto& row : chunk) rows.push_back(std::move(row));
  std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    if (a.arch != b.arch) return a.arch < b.arch;
    if (a.delta_c != b.delta_c) return a.delta_c < b.delta_c;
    return a.seed < b.seed;
  });
  return rows;
}

std::vector<AggregateRow> aggregate_rows(const std::vector<ResultRow>& rows, int n_u) {
  std::vector<AggregateRow> out;
  auto find = [&](const std::string& arch, double delta_c) -> AggregateRow& {
    for (auto& a : out)
      if (a.arch == arch && a.delta_c == delta_c) return a;
    out.push_back({arch, delta_c, n_u});
    return out.back();
  };

  // first pass: means
  for (const auto& r : rows) {
    auto& a = find(r.arch, r.delta_c);
    ++a.n;
    a.mean_snr += r.snr;
    a.mean_rate += r.rate;
    a.mean_sensing_mw += r.sensing_mw;
    a.mean_ee += r.ee;
  }
  for (auto& a : out) {
    a.mean_snr /= a.n;
    a.mean_rate /= a.n;
    a.mean_sensing_mw /= a.n;
    a.mean_ee /= a.n;
  }
  // second pass: standard errors
  for (const auto& r : rows) {
    auto& a = find(r.arch, r.delta_c);
    a.se_rate += (r.rate - a.mean_rate) * (r.rate - a.mean_rate);
    a.se_sensing_mw += (r.sensing_mw - a.mean_sensing_mw) * (r.sensing_mw - a.mean_sensing_mw);
    a.se_ee += (r.ee - a.mean_ee) * (r.ee - a.mean_ee);
  }
  for (auto& a : out) {
    const double denom = a.n > 1 ? static_cast<double>(a.n) * (a.n - 1) : 1.0;
    a.se_rate = std::sqrt(a.se_rate / denom);
    a.se_sensing_mw = std::sqrt(a.se_sensing_mw / denom);
    a.se_ee = std::sqrt(a.se_ee / denom);
    if (a.n <= 1) a.se_rate = a.se_sensing_mw = a.se_ee = 0.0;
  }

  std::sort(out.begin(), out.end(), [](const AggregateRow& a, const AggregateRow& b) {
    if (a.arch != b.arch) return a.arch < b.arch;
    if (a.n_u != b.n_u) return a.n_u < b.n_u;
    return a.delta_c < b.delta_c;
  });
  return out;
}

std::vector<AggregateRow> sweep_tradeoff(const ScenarioConfig& config) {
  return aggregate_rows(run_scenario(config), config.elements_per_waveguide);
}

std::vector<AggregateRow> sweep_nu(const ScenarioConfig& config,
                                   const std::vector<int>& nu_values) {
  if (nu_values.empty())
    throw std::invalid_argument("sweep_nu: value list must be nonempty");
  std::vector<AggregateRow> out;
  for (int nu : nu_values) {
    ScenarioConfig c = config;
    c.elements_per_waveguide = nu;
    const auto agg = aggregate_rows(run_scenario(c), nu);
    out.insert(out.end(), agg.begin(), agg.end());
  }
  return out;
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::string out = "arch,delta_c,seed,snr,rate_bps_hz,sensing_mw,tx_mw,ee,iters,wall_ms,converged\n";
  for (const auto& r : rows) {
    out += r.arch + "," + fmt(r.delta_c) + "," + std::to_string(r.seed) + "," + fmt(r.snr) +
           "," + fmt(r.rate) + "," + fmt(r.sensing_mw) + "," + fmt(r.tx_mw) + "," +
           fmt(r.ee) + "," + std::to_string(r.iters) + "," + fmt(r.wall_ms) + "," +
           (r.converged ? "1" : "0") + "\n";
  }
  return out;
}

std::string rows_to_json(const std::vector<ResultRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"arch", r.arch},
                   {"delta_c", r.delta_c},
                   {"seed", r.seed},
                   {"snr", r.snr},
                   {"rate_bps_hz", r.rate},
                   {"sensing_mw", r.sensing_mw},
                   {"tx_mw", r.tx_mw},
                   {"ee", r.ee},
                   {"iters", r.iters},
                   {"wall_ms", r.wall_ms},
                   {"converged", r.converged}});
  }
  return arr.dump(2);
}

std::vector<ResultRow> rows_from_json(const std::string& json_text) {
  const auto arr = nlohmann::json::parse(json_text);
  std::vector<ResultRow> rows;
  for (const auto& j : arr) {
    ResultRow r;
    r.arch = j.at("arch").get<std::string>();
    r.delta_c = j.at("delta_c").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.snr = j.at("snr").get<double>();
    r.rate = j.at("rate_bps_hz").get<double>();
    r.sensing_mw = j.at("sensing_mw").get<double>();
    r.tx_mw = j.at("tx_mw").get<double>();
    r.ee = j.at("ee").get<double>();
    r.iters = j.at("iters").get<int>();
    r.wall_ms = j.at("wall_ms").get<double>();
    r.converged = j.at("converged").get<bool>();
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string aggregates_to_csv(const std::vector<AggregateRow>& rows) {
  std::string out =
      "arch,delta_c,n_u,n,mean_snr,mean_rate_bps_hz,se_rate,mean_sensing_mw,"
      "se_sensing_mw,mean_ee,se_ee\n";
  for (const auto& a : rows) {
    out += a.arch + "," + fmt(a.delta_c) + "," + std::to_string(a.n_u) + "," +
           std::to_string(a.n) + "," + fmt(a.mean_snr) + "," + fmt(a.mean_rate) + "," +
           fmt(a.se_rate) + "," + fmt(a.mean_sensing_mw) + "," + fmt(a.se_sensing_mw) +
           "," + fmt(a.mean_ee) + "," + fmt(a.se_ee) + "\n";
  }
  return out;
}

std::string aggregates_to_json(const std::vector<AggregateRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& a : rows) {
    arr.push_back({{"arch", a.arch},
                   {"delta_c", a.delta_c},
                   {"n_u", a.n_u},
                   {"n", a.n},
                   {"mean_snr", a.mean_snr},
                   {"mean_rate_bps_hz", a.mean_rate},
                   {"se_rate", a.se_rate},
                   {"mean_sensing_mw", a.mean_sensing_mw},
                   {"se_sensing_mw", a.se_sensing_mw},
                   {"mean_ee", a.mean_ee},
                   {"se_ee", a.se_ee}});
  }
  return arr.dump(2);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

Solution convergence_run(const ScenarioConfig& config, double delta_c, bool manifold) {
  const ArrayGeometry geometry = build_dma_geometry(
      config.n_waveguides, config.elements_per_waveguide, config.carrier_frequency_hz);
  const CVec q = propagation_gains(geometry, config.attenuation_per_meter,
                                   config.wavenumber_per_meter);
  const RealizationDraw draw = make_realization_draw(config, 0);
  const ChannelRealization ch = realize_channel(geometry, draw.channel);
  const CVec g = steering_vector(geometry, draw.target);
  IsacProblem problem(ch.normalized_channel, g, delta_c, 1.0 - delta_c,
                      config.tx_power_mw);
  SolverOptions options = config.solver;
  options.seed = draw.seed;
  return manifold ? solve_manifold(problem, geometry, q, options)
                  : solve(problem, geometry, q, options);
}

}  // namespace trihbf
