#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "trihbf/channel.hpp"
#include "trihbf/rng.hpp"
#include "trihbf/solver.hpp"

using namespace trihbf;

namespace {

const Complex kI{0.0, 1.0};

CVec random_unit_phases(std::size_t n, Rng& rng) {
  CVec out(n);
  for (auto& x : out) x = rng.unit_phase();
  return out;
}

CVec random_cvec(std::size_t n, Rng& rng) {
  CVec out(n);
  for (auto& x : out) x = rng.cnormal();
  return out;
}

double numerator(const IsacProblem& p, const CVec& m, const CVec& f) {
  const auto v = compose_effective(m, f);
  return p.weight_comm * std::norm(cdot(p.comm_channel, v)) +
         p.weight_sense * std::norm(cdot(p.sensing_steering, v));
}

struct RandomInstance {
  IsacProblem problem;
  CVec q;
  CVec psi;
  CVec f;
};

RandomInstance random_instance(int n_w, int n_u, Rng& rng) {
  const int n_r = n_w * n_u;
  RandomInstance inst{
      IsacProblem(random_cvec(n_r, rng), random_cvec(n_r, rng),
                  0.1 + 0.8 * rng.uniform(), 0.1 + 0.8 * rng.uniform(), 10.0),
      random_cvec(n_r, rng), random_unit_phases(n_r, rng),
      random_unit_phases(n_w, rng)};
  return inst;
}

}  // namespace

TEST_CASE("optimal digital weight") {
  CVec f = {Complex{1.0, 0.0}};
  CVec m1 = {Complex{1.0, 0.0}};
  CHECK(std::norm(optimal_digital_weight(m1, f, 10.0)) ==
        doctest::Approx(10.0).epsilon(1e-12));
  CVec m2 = {Complex{3.0, 0.0}, Complex{1.0, 0.0}};
  CVec f2 = {Complex{1.0, 0.0}, Complex{1.0, 0.0}};
  CHECK(optimal_digital_weight(m2, f2, 10.0) == Complex{1.0, 0.0});
  CHECK_THROWS_AS(optimal_digital_weight(CVec{Complex{0.0, 0.0}}, f, 10.0),
                  std::domain_error);
}

TEST_CASE("dinkelbach ratio") {
  CVec h = {Complex{std::sqrt(2.5), 0.0}};
  IsacProblem problem(h, h, 1.0, 0.0, 10.0);
  CVec m = {Complex{std::sqrt(2.0), 0.0}};
  CVec f = {Complex{1.0, 0.0}};
  CHECK(dinkelbach_ratio(problem, m, f) == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("block lifting") {
  CVec x = {Complex{1.0, 0.0}, Complex{2.0, 0.0}};
  auto single = lift_blockdiag(x, 1);
  REQUIRE(single.size() == 1);
  CHECK(single[0] == x);

  auto pair = lift_blockdiag(x, 2);
  REQUIRE(pair.size() == 2);
  CHECK(pair[0] == CVec{Complex{1.0, 0.0}});
  CHECK(pair[1] == CVec{Complex{2.0, 0.0}});

  CHECK_THROWS_AS(lift_blockdiag(x, 3), std::invalid_argument);
}

TEST_CASE("rank-two kernel matches the bilinear objective") {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    auto inst = random_instance(4, 4, rng);
    const auto m = lorentzian_map(inst.psi, inst.q);
    const auto kernel = quadratic_kernel(inst.problem, inst.f, 4);
    CHECK(kernel.quad(m) ==
          doctest::Approx(numerator(inst.problem, m, inst.f)).epsilon(1e-12));
    // A m consistency with the rank-1 expansion
    const auto am = kernel.apply(m);
    const Complex ch = cdot(kernel.a_h, m);
    const Complex cg = cdot(kernel.a_g, m);
    for (std::size_t j = 0; j < am.size(); ++j) {
      const Complex ref = kernel.delta_c * kernel.a_h[j] * ch +
                          kernel.delta_s * kernel.a_g[j] * cg;
      CHECK(std::abs(am[j] - ref) < 1e-12);
    }
  }
}

TEST_CASE("kernel is PSD and rank 1 when sensing weight vanishes") {
  Rng rng(13);
  auto h = random_cvec(8, rng);
  auto g = random_cvec(8, rng);
  IsacProblem problem(h, g, 1.0, 0.0, 10.0);
  const auto f = random_unit_phases(2, rng);
  const auto kernel = quadratic_kernel(problem, f, 4);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto m = random_cvec(8, rng);
    CHECK(kernel.quad(m) >= -1e-12);
    const auto am = kernel.apply(m);
    // rank 1: A m proportional to a_h
    const Complex scale = cdot(kernel.a_h, m);
    for (std::size_t j = 0; j < am.size(); ++j)
      CHECK(std::abs(am[j] - kernel.a_h[j] * scale) < 1e-10);
  }
}

TEST_CASE("degenerate gradient reduces to the phase term") {
  const int n = 4;
  RankTwoKernel kernel;
  kernel.a_h = CVec(n, Complex{0.0, 0.0});
  kernel.a_g = CVec(n, Complex{0.0, 0.0});
  kernel.delta_c = 1.0;
  kernel.delta_s = 0.0;
  Rng rng(19);
  const auto psi = random_unit_phases(n, rng);
  const CVec q(n, Complex{0.0, 0.0});
  const auto grad = surrogate_gradient(psi, kernel, q, 1.0);
  for (std::size_t j = 0; j < psi.size(); ++j)
    CHECK(std::abs(grad[j] - 2.0 * psi[j]) < 1e-14);
  // fixed point of the phase update
  const auto next = update_psi(psi, kernel, q, 1.0);
  for (std::size_t j = 0; j < psi.size(); ++j) CHECK(std::abs(next[j] - psi[j]) < 1e-14);
}

TEST_CASE("phase update extracts phases and keeps ties") {
  // gradient (1, i): already unit modulus
  // gradient (-2, 0): magnitude drops, zero entry keeps previous phase
  RankTwoKernel kernel;
  kernel.a_h = {Complex{0.0, 0.0}, Complex{0.0, 0.0}};
  kernel.a_g = kernel.a_h;
  kernel.delta_c = 1.0;
  kernel.delta_s = 0.0;
  CVec q(2, Complex{0.0, 0.0});
  // with zero kernel and q, gradient = 2 z psi, so feed the phases directly
  CVec psi = {Complex{1.0, 0.0}, kI};
  auto next = update_psi(psi, kernel, q, 1.0);
  CHECK(std::abs(next[0] - Complex{1.0, 0.0}) < 1e-15);
  CHECK(std::abs(next[1] - kI) < 1e-15);

  // zero z kills the gradient entirely: previous phases survive
  next = update_psi(psi, kernel, q, 0.0);
  CHECK(next[0] == psi[0]);
  CHECK(next[1] == psi[1]);
}

TEST_CASE("phase update ascends the surrogate") {
  Rng rng(29);
  for (int trial = 0; trial < 1000; ++trial) {
    auto inst = random_instance(2, 4, rng);
    const auto m = lorentzian_map(inst.psi, inst.q);
    const auto kernel = quadratic_kernel(inst.problem, inst.f, 4);
    const double z = dinkelbach_ratio(inst.problem, m, inst.f);
    const auto next = update_psi(inst.psi, kernel, inst.q, z);
    for (const auto& x : next) CHECK(std::abs(x) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(surrogate_value(next, kernel, inst.q, z) >=
          surrogate_value(inst.psi, kernel, inst.q, z) - 1e-12);
  }
}

TEST_CASE("analog update: single waveguide is a pure global phase") {
  Rng rng(37);
  auto inst = random_instance(1, 8, rng);
  const auto m = lorentzian_map(inst.psi, inst.q);
  const auto f2 = update_analog(inst.f, m, inst.problem);
  CHECK(std::abs(f2[0]) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(numerator(inst.problem, m, f2) ==
        doctest::Approx(numerator(inst.problem, m, inst.f)).epsilon(1e-10));
}

TEST_CASE("analog update aligns with a rank-1 target") {
  // delta_s = 0, arrange M^H h = (1, i)
  CVec h = {Complex{1.0, 0.0}, Complex{0.0, 1.0}};
  IsacProblem problem(h, h, 1.0, 0.0, 10.0);
  CVec m = {Complex{1.0, 0.0}, Complex{1.0, 0.0}};
  CVec f = {Complex{1.0, 0.0}, Complex{1.0, 0.0}};
  const auto f2 = update_analog(f, m, problem);
  // r = M^H h h^H M f; phases of M^H h = (1, i) up to a common rotation
  const double rel = std::arg(f2[1] / f2[0]);
  CHECK(rel == doctest::Approx(M_PI / 2.0).epsilon(1e-12));
}

TEST_CASE("analog update ascends the objective") {
  Rng rng(43);
  for (int trial = 0; trial < 1000; ++trial) {
    auto inst = random_instance(4, 4, rng);
    const auto m = lorentzian_map(inst.psi, inst.q);
    const auto f2 = update_analog(inst.f, m, inst.problem);
    for (const auto& x : f2) CHECK(std::abs(x) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(numerator(inst.problem, m, f2) >=
          numerator(inst.problem, m, inst.f) - 1e-10);
  }
}

TEST_CASE("single-element solve hits the analytic optimum") {
  const auto geo = build_dma_geometry(1, 1, 28e9);
  const auto q = propagation_gains(geo, 0.6, 827.67);
  Rng rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    const Complex h = rng.cnormal();
    IsacProblem problem({h}, {Complex{1.0, 0.0}}, 1.0, 0.0, 10.0);
    SolverOptions opts;
    opts.seed = 100 + trial;
    const auto sol = solve(problem, geo, q, opts);
    const auto m = sol.dma.weights;
    const double val = snr(problem, m, sol.analog.weights, sol.digital.value);
    CHECK(val == doctest::Approx(10.0 * std::norm(h)).epsilon(1e-9));
  }
}

TEST_CASE("solver output sits on the power boundary") {
  const auto geo = build_dma_geometry(2, 4, 28e9);
  const auto q = propagation_gains(geo, 0.6, 827.67);
  SvChannelParams params;
  for (int trial = 0; trial < 20; ++trial) {
    const auto h = sample_sv_channel(geo, params, 500 + trial).normalized_channel;
    Rng dir_rng(900 + trial);
    const auto g = steering_vector(geo, sample_direction(params, dir_rng));
    IsacProblem problem(h, g, 0.5, 0.5, 10.0);
    SolverOptions opts;
    opts.seed = trial;
    const auto sol = solve(problem, geo, q, opts);
    CHECK(transmit_power(sol.dma.weights, sol.analog.weights, sol.digital.value) ==
          doctest::Approx(10.0).epsilon(1e-9));
  }
}

TEST_CASE("trace is monotone and the optimality residual vanishes") {
  const auto geo = build_dma_geometry(2, 8, 28e9);
  const auto q = propagation_gains(geo, 0.6, 827.67);
  SvChannelParams params;
  for (int trial = 0; trial < 20; ++trial) {
    const auto h = sample_sv_channel(geo, params, 700 + trial).normalized_channel;
    Rng dir_rng(1700 + trial);
    const auto g = steering_vector(geo, sample_direction(params, dir_rng));
    IsacProblem problem(h, g, 0.075, 0.925, 10.0);
    SolverOptions opts;
    opts.seed = trial;
    const auto sol = solve(problem, geo, q, opts);
    REQUIRE(!sol.trace.empty());
    for (std::size_t k = 1; k < sol.trace.size(); ++k)
      CHECK(sol.trace[k].ratio_objective >=
            sol.trace[k - 1].ratio_objective - 1e-9);
    CHECK(sol.converged);

    const auto& m = sol.dma.weights;
    const double z = sol.trace.back().ratio_objective;
    double denom = 0.0;
    for (const auto& x : m) denom += std::norm(x);
    const double residual =
        std::abs(numerator(problem, m, sol.analog.weights) - z * denom);
    CHECK(residual <= 1e-6 * z);

    // p1 column is the power-scaled ratio
    CHECK(sol.trace.back().p1_objective ==
          doctest::Approx(10.0 * z).epsilon(1e-9));
  }
}

TEST_CASE("trace CSV layout") {
  IterationTrace trace;
  trace.push_back({1, 0.5, 0.75, 7.5, 0.1});
  trace.push_back({2, 0.75, 0.8, 8.0, 0.2});
  const auto csv = trace_to_csv(trace);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "iteration,z,ratio_objective,p1_objective,elapsed_ms");
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 2);
}

TEST_CASE("solution JSON contains the decision variables") {
  const auto geo = build_dma_geometry(2, 2, 28e9);
  const auto q = propagation_gains(geo, 0.6, 827.67);
  SvChannelParams params;
  const auto h = sample_sv_channel(geo, params, 3).normalized_channel;
  const auto g = steering_vector(geo, {0.1, 1.4});
  IsacProblem problem(h, g, 0.5, 0.5, 10.0);
  const auto sol = solve(problem, geo, q, SolverOptions{});
  const auto text = solution_to_json(sol, problem, 1.25);
  CHECK(text.find("\"f\"") != std::string::npos);
  CHECK(text.find("\"psi\"") != std::string::npos);
  CHECK(text.find("\"metrics\"") != std::string::npos);
}
