#include "trihbf/solver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

#include "trihbf/baselines.hpp"
#include "trihbf/rng.hpp"

namespace trihbf {

namespace {
constexpr double kZFloor = 1e-15;

double elapsed_ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}
}  // namespace

Complex optimal_digital_weight(const CVec& m, const CVec& f, double p_t) {
  (void)f;  // any unit-modulus f gives ||Mf||^2 = sum|m_j|^2
  const double denom = norm2(m);
  if (denom <= 0.0)
    throw std::domain_error("optimal_digital_weight: degenerate beamformer (m = 0)");
  return Complex{std::sqrt(p_t / denom), 0.0};
}

double dinkelbach_ratio(const IsacProblem& problem, const CVec& m, const CVec& f) {
  const double denom = norm2(m);
  if (denom <= 0.0)
    throw std::domain_error("dinkelbach_ratio: degenerate beamformer (m = 0)");
  const CVec v = compose_effective(m, f);
  const double num = problem.weight_comm * std::norm(cdot(problem.comm_channel, v)) +
                     problem.weight_sense * std::norm(cdot(problem.sensing_steering, v));
  return num / denom;
}

std::vector<CVec> lift_blockdiag(const CVec& x, int n_waveguides) {
  if (n_waveguides < 1 || x.size() % n_waveguides != 0)
    throw std::invalid_argument("lift_blockdiag: length not divisible by waveguide count");
  const std::size_t per_wg = x.size() / n_waveguides;
  std::vector<CVec> blocks(n_waveguides);
  for (int i = 0; i < n_waveguides; ++i)
    blocks[i].assign(x.begin() + i * per_wg, x.begin() + (i + 1) * per_wg);
  return blocks;
}

CVec RankTwoKernel::apply(const CVec& m) const {
  const Complex ch = cdot(a_h, m);
  const Complex cg = cdot(a_g, m);
  CVec out;
  out.reserve(m.size());
  for (std::size_t j = 0; j < m.size(); ++j)
    out.push_back(delta_c * a_h[j] * ch + delta_s * a_g[j] * cg);
  return out;
}

double RankTwoKernel::quad(const CVec& m) const {
  return delta_c * std::norm(cdot(a_h, m)) + delta_s * std::norm(cdot(a_g, m));
}

RankTwoKernel quadratic_kernel(const IsacProblem& problem, const CVec& f,
                               int elements_per_waveguide) {
  if (f.size() * elements_per_waveguide != problem.comm_channel.size())
    throw std::invalid_argument("quadratic_kernel: inconsistent dimensions");

  RankTwoKernel kernel;
  kernel.delta_c = problem.weight_comm;
  kernel.delta_s = problem.weight_sense;
  const std::size_t n = problem.comm_channel.size();
  kernel.a_h.reserve(n);
  kernel.a_g.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Complex fc = std::conj(f[j / elements_per_waveguide]);
    kernel.a_h.push_back(problem.comm_channel[j] * fc);
    kernel.a_g.push_back(problem.sensing_steering[j] * fc);
  }
  return kernel;
}

namespace {
// m = (i q + psi o q)/2 without the unit-modulus precondition, for surrogate
// evaluation at perturbed psi.
CVec unconstrained_map(const CVec& psi, const CVec& q) {
  constexpr Complex imag_unit{0.0, 1.0};
  CVec m;
  m.reserve(psi.size());
  for (std::size_t j = 0; j < psi.size(); ++j)
    m.push_back(q[j] * (imag_unit + psi[j]) * 0.5);
  return m;
}
}  // namespace

double surrogate_value(const CVec& psi, const RankTwoKernel& kernel, const CVec& q,
                       double z) {
  const CVec m = unconstrained_map(psi, q);
  return kernel.quad(m) - z * norm2(m) + z * norm2(psi);
}

CVec surrogate_gradient(const CVec& psi, const RankTwoKernel& kernel, const CVec& q,
                        double z, bool alt_formula) {
  if (psi.size() != q.size())
    throw std::invalid_argument("surrogate_gradient: psi and q length mismatch");
  const CVec m = unconstrained_map(psi, q);
  const CVec am = kernel.apply(m);
  const double scale = alt_formula ? 2.0 : 1.0;
  CVec grad;
  grad.reserve(psi.size());
  for (std::size_t j = 0; j < psi.size(); ++j)
    grad.push_back(scale * (am[j] - z * m[j]) * std::conj(q[j]) + 2.0 * z * psi[j]);
  return grad;
}

CVec update_psi(const CVec& psi, const RankTwoKernel& kernel, const CVec& q,
                double z, bool alt_formula) {
  const CVec grad = surrogate_gradient(psi, kernel, q, z, alt_formula);
  CVec next;
  next.reserve(psi.size());
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const double mag = std::abs(grad[j]);
    next.push_back(mag > 0.0 ? grad[j] / mag : psi[j]);
  }
  return next;
}

CVec update_analog(const CVec& f, const CVec& m, const IsacProblem& problem) {
  if (f.empty() || m.size() % f.size() != 0)
    throw std::invalid_argument("update_analog: dimension mismatch");
  const std::size_t per_wg = m.size() / f.size();

  const CVec v = compose_effective(m, f);
  const Complex ch = cdot(problem.comm_channel, v);
  const Complex cg = cdot(problem.sensing_steering, v);

  CVec next;
  next.reserve(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    Complex r{0.0, 0.0};
    for (std::size_t j = i * per_wg; j < (i + 1) * per_wg; ++j) {
      const Complex rv = problem.weight_comm * problem.comm_channel[j] * ch +
                         problem.weight_sense * problem.sensing_steering[j] * cg;
      r += std::conj(m[j]) * rv;
    }
    const double mag = std::abs(r);
    next.push_back(mag > 0.0 ? r / mag : f[i]);
  }
  return next;
}

namespace {

Solution solve_from(const IsacProblem& problem, const ArrayGeometry& geometry,
                    const CVec& q, const SolverOptions& options, CVec psi, CVec f) {
  const auto t0 = std::chrono::steady_clock::now();
  CVec m = lorentzian_map(psi, q);

  Solution sol;
  double ratio = dinkelbach_ratio(problem, m, f);

  for (int t = 1; t <= options.max_iterations; ++t) {
    const double z = std::max(ratio, kZFloor);

    for (int s = 0; s < options.inner_sweeps; ++s) {
      const RankTwoKernel kernel =
          quadratic_kernel(problem, f, geometry.elements_per_waveguide);
      psi = update_psi(psi, kernel, q, z, options.alt_gradient);
      m = lorentzian_map(psi, q);
      f = update_analog(f, m, problem);
    }

    const double prev = ratio;
    ratio = dinkelbach_ratio(problem, m, f);
    sol.trace.push_back({t, z, ratio, problem.power_budget * ratio, elapsed_ms_since(t0)});
    sol.iterations = t;
    if (std::abs(ratio - prev) < options.rel_tolerance * std::max(1.0, std::abs(prev))) {
      sol.converged = true;
      break;
    }
  }

  sol.dma = make_dma_state(q, std::move(psi));
  sol.analog.weights = std::move(f);
  sol.digital.value = optimal_digital_weight(sol.dma.weights, sol.analog.weights,
                                             problem.power_budget);
  sol.total_ms = elapsed_ms_since(t0);
  return sol;
}

}  // namespace

Solution solve(const IsacProblem& problem, const ArrayGeometry& geometry,
               const CVec& q, const SolverOptions& options) {
  if (options.rel_tolerance <= 0.0)
    throw std::invalid_argument("solve: tolerance must be positive");
  const int n_r = geometry.total_elements();
  if (static_cast<int>(q.size()) != n_r ||
      static_cast<int>(problem.comm_channel.size()) != n_r)
    throw std::invalid_argument("solve: dimension mismatch");

  const auto t0 = std::chrono::steady_clock::now();
  Solution best;
  double best_ratio = -1.0;
  for (auto& start : solver_start_points(problem, geometry, q, options)) {
    Solution cur = solve_from(problem, geometry, q, options, std::move(start.psi),
                              std::move(start.f));
    const double r = cur.trace.empty() ? -1.0 : cur.trace.back().ratio_objective;
    if (r > best_ratio) {
      best_ratio = r;
      best = std::move(cur);
    }
  }
  best.total_ms = elapsed_ms_since(t0);
  return best;
}

std::string solution_to_json(const Solution& solution, const IsacProblem& problem,
                             double ee) {
  nlohmann::json j;
  j["w_re"] = solution.digital.value.real();
  j["w_im"] = solution.digital.value.imag();
  auto pack = [](const CVec& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& x : v) arr.push_back({x.real(), x.imag()});
    return arr;
  };
  j["f"] = pack(solution.analog.weights);
  j["psi"] = pack(solution.dma.phases);

  const double s = snr(problem, solution.dma.weights, solution.analog.weights,
                       solution.digital.value);
  j["metrics"] = {
      {"snr", s},
      {"rate", achievable_rate(s)},
      {"sensing_power_mw", sensing_power(problem, solution.dma.weights,
                                         solution.analog.weights, solution.digital.value)},
      {"tx_power_mw", transmit_power(solution.dma.weights, solution.analog.weights,
                                     solution.digital.value)},
      {"ee", ee}};
  j["converged"] = solution.converged;
  j["iterations"] = solution.iterations;
  return j.dump(2);
}

std::string trace_to_csv(const IterationTrace& trace) {
  std::string out = "iteration,z,ratio_objective,p1_objective,elapsed_ms\n";
  char buf[192];
  for (const auto& rec : trace) {
    std::snprintf(buf, sizeof(buf), "%d,%.12g,%.12g,%.12g,%.12g\n", rec.iteration,
                  rec.z, rec.ratio_objective, rec.p1_objective, rec.elapsed_ms);
    out += buf;
  }
  return out;
}

}  // namespace trihbf
