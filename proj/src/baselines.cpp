#include "trihbf/baselines.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "trihbf/rng.hpp"

namespace trihbf {

namespace {
constexpr double kZFloor = 1e-15;

double elapsed_ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

int sa_columns(int elements_per_waveguide) {
  // aperture N_u * lambda/5 refilled at lambda/2 spacing, round-half-up
  const int cols = static_cast<int>(std::floor(2.0 * elements_per_waveguide / 5.0 + 0.5));
  return std::max(1, cols);
}
}  // namespace

std::pair<ArrayGeometry, ArchitectureDescriptor> build_architecture(
    ArchitectureKind kind, const ArrayGeometry& base_dma) {
  const int n_w = base_dma.n_waveguides;
  const int n_u = base_dma.elements_per_waveguide;
  const double half_lambda = base_dma.wavelength / 2.0;

  ArchitectureDescriptor desc;
  desc.kind = kind;

  switch (kind) {
    case ArchitectureKind::TriHybrid: {
      desc.n_antennas = base_dma.total_elements();
      desc.n_rf = 1;
      desc.n_ps = n_w;
      desc.n_elem_dma = base_dma.total_elements();
      desc.element_spacing = base_dma.element_spacing;
      return {base_dma, desc};
    }
    case ArchitectureKind::FdSn:
    case ArchitectureKind::HbfSn: {
      ArrayGeometry geo = build_planar_geometry(n_w, n_u, half_lambda, base_dma.wavelength);
      desc.n_antennas = geo.total_elements();
      desc.element_spacing = half_lambda;
      if (kind == ArchitectureKind::FdSn) {
        desc.n_rf = desc.n_antennas;
      } else {
        desc.n_rf = 1;
        desc.n_ps = desc.n_antennas;
      }
      return {geo, desc};
    }
    case ArchitectureKind::FdSa:
    case ArchitectureKind::HbfSa: {
      ArrayGeometry geo =
          build_planar_geometry(n_w, sa_columns(n_u), half_lambda, base_dma.wavelength);
      desc.n_antennas = geo.total_elements();
      desc.element_spacing = half_lambda;
      if (kind == ArchitectureKind::FdSa) {
        desc.n_rf = desc.n_antennas;
      } else {
        desc.n_rf = 1;
        desc.n_ps = desc.n_antennas;
      }
      return {geo, desc};
    }
  }
  throw std::invalid_argument("build_architecture: unknown kind");
}

std::vector<SolverStart> solver_start_points(const IsacProblem& problem,
                                             const ArrayGeometry& geometry,
                                             const CVec& q,
                                             const SolverOptions& options) {
  const int n_r = geometry.total_elements();
  const int n_w = geometry.n_waveguides;
  const int n_starts = std::max(1, options.restarts);
  std::vector<SolverStart> starts;
  starts.reserve(n_starts);

  {
    const FdSolution fd = solve_fd(problem);
    SolverStart st;
    st.psi.resize(n_r);
    for (int j = 0; j < n_r; ++j) {
      const Complex t = fd.precoder[j] * std::conj(q[j]);
      const double mag = std::abs(t);
      st.psi[j] = mag > 0.0 ? t / mag : Complex{0.0, 1.0};
    }
    st.f.assign(n_w, Complex{1.0, 0.0});
    st.f = update_analog(st.f, lorentzian_map(st.psi, q), problem);
    starts.push_back(std::move(st));
  }

  Rng rng(options.seed);
  for (int k = 1; k < n_starts; ++k) {
    SolverStart st;
    st.psi.resize(n_r);
    st.f.resize(n_w);
    for (auto& p : st.psi) p = rng.unit_phase();
    for (auto& x : st.f) x = rng.unit_phase();
    starts.push_back(std::move(st));
  }
  return starts;
}

FdSolution solve_fd(const IsacProblem& problem) {
  const CVec& h = problem.comm_channel;
  const CVec& g = problem.sensing_steering;
  const double dc = problem.weight_comm;
  const double ds = problem.weight_sense;
  const std::size_t n = h.size();

  const double nh = std::sqrt(norm2(h));
  const double ng = std::sqrt(norm2(g));
  if (nh <= 0.0 && ng <= 0.0)
    throw std::domain_error("solve_fd: degenerate problem (h = g = 0)");

  auto apply_r = [&](const CVec& u) {
    const Complex ah = cdot(h, u);
    const Complex ag = cdot(g, u);
    CVec out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = dc * h[j] * ah + ds * g[j] * ag;
    return out;
  };

  // orthonormal basis of span{h, g}
  CVec u1(n), u2;
  if (nh > 0.0) {
    for (std::size_t j = 0; j < n; ++j) u1[j] = h[j] / nh;
  } else {
    for (std::size_t j = 0; j < n; ++j) u1[j] = g[j] / ng;
  }
  if (ng > 0.0 && nh > 0.0) {
    const Complex proj = cdot(u1, g);
    CVec w(n);
    for (std::size_t j = 0; j < n; ++j) w[j] = g[j] - proj * u1[j];
    const double nw = std::sqrt(norm2(w));
    if (nw > 1e-12 * ng) {
      u2.resize(n);
      for (std::size_t j = 0; j < n; ++j) u2[j] = w[j] / nw;
    }
  }

  double lambda_max;
  Complex c1{1.0, 0.0}, c2{0.0, 0.0};
  if (u2.empty()) {
    lambda_max = cdot(u1, apply_r(u1)).real();
  } else {
    const CVec ru1 = apply_r(u1);
    const CVec ru2 = apply_r(u2);
    const double s11 = cdot(u1, ru1).real();
    const double s22 = cdot(u2, ru2).real();
    const Complex s12 = cdot(u1, ru2);
    const double mid = 0.5 * (s11 + s22);
    const double disc = std::sqrt(0.25 * (s11 - s22) * (s11 - s22) + std::norm(s12));
    lambda_max = mid + disc;
    if (std::abs(s12) > 1e-14 * std::max(1.0, lambda_max)) {
      c1 = s12;
      c2 = Complex{lambda_max - s11, 0.0};
      const double cn = std::sqrt(std::norm(c1) + std::norm(c2));
      c1 /= cn;
      c2 /= cn;
    } else if (s22 > s11) {
      c1 = Complex{0.0, 0.0};
      c2 = Complex{1.0, 0.0};
    }
  }

  FdSolution sol;
  const double amp = std::sqrt(problem.power_budget);
  sol.precoder.resize(n);
  for (std::size_t j = 0; j < n; ++j)
    sol.precoder[j] = amp * (c1 * u1[j] + (u2.empty() ? Complex{0, 0} : c2 * u2[j]));
  sol.objective = problem.power_budget * lambda_max;
  return sol;
}

HbfSolution solve_hbf(const IsacProblem& problem, const SolverOptions& options) {
  const CVec& h = problem.comm_channel;
  const CVec& g = problem.sensing_steering;
  const std::size_t n = h.size();
  const auto t0 = std::chrono::steady_clock::now();

  Rng rng(options.seed);
  CVec f(n);
  for (auto& x : f) x = rng.unit_phase();

  auto ratio_of = [&](const CVec& fv) {
    return (problem.weight_comm * std::norm(cdot(h, fv)) +
            problem.weight_sense * std::norm(cdot(g, fv))) /
           static_cast<double>(n);
  };

  HbfSolution sol;
  double ratio = ratio_of(f);
  for (int t = 1; t <= options.max_iterations; ++t) {
    const Complex ah = cdot(h, f);
    const Complex ag = cdot(g, f);
    for (std::size_t j = 0; j < n; ++j) {
      const Complex r = problem.weight_comm * h[j] * ah + problem.weight_sense * g[j] * ag;
      const double mag = std::abs(r);
      if (mag > 0.0) f[j] = r / mag;
    }
    const double prev = ratio;
    ratio = ratio_of(f);
    sol.trace.push_back({t, prev, ratio, problem.power_budget * ratio, elapsed_ms_since(t0)});
    sol.iterations = t;
    if (std::abs(ratio - prev) < options.rel_tolerance * std::max(1.0, std::abs(prev))) {
      sol.converged = true;
      break;
    }
  }

  sol.phases = std::move(f);
  sol.w = Complex{std::sqrt(problem.power_budget / static_cast<double>(n)), 0.0};
  sol.objective = problem.power_budget * ratio;
  return sol;
}

namespace {

// Riemannian CG ascent on the product of unit circles. Polak-Ribiere direction
// with restart, Armijo backtracking (c = 1e-4, ratio 0.5, initial step 1),
// per-entry renormalization as the retraction. Falls back to steepest ascent
// when the line search stalls.
class CircleManifoldCg {
 public:
  using Objective = std::function<double(const CVec&)>;
  using EuclideanGrad = std::function<CVec(const CVec&)>;

  CircleManifoldCg(Objective obj, EuclideanGrad egrad, int max_inner)
      : obj_(std::move(obj)), egrad_(std::move(egrad)), max_inner_(max_inner) {}

  CVec maximize(CVec x) const {
    double fx = obj_(x);
    CVec rg = project(egrad_(x), x);
    CVec d = rg;
    const double g0 = std::sqrt(real_inner(rg, rg));

    for (int k = 0; k < max_inner_; ++k) {
      const double gnorm = std::sqrt(real_inner(rg, rg));
      if (gnorm <= 1e-8 * (1.0 + g0)) break;

      double slope = real_inner(rg, d);
      if (slope <= 0.0) {
        d = rg;
        slope = gnorm * gnorm;
      }

      bool accepted = false;
      CVec x_new;
      double f_new = fx;
      for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
        double alpha = 1.0;
        for (int bt = 0; bt < 60; ++bt) {
          x_new = retract(x, d, alpha);
          f_new = obj_(x_new);
          if (f_new >= fx + 1e-4 * alpha * slope) {
            accepted = true;
            break;
          }
          alpha *= 0.5;
        }
        if (!accepted && attempt == 0) {
          d = rg;
          slope = gnorm * gnorm;
        }
      }
      if (!accepted) break;

      const CVec rg_new = project(egrad_(x_new), x_new);
      const CVec rg_old_t = project(rg, x_new);
      double beta = 0.0;
      const double denom = real_inner(rg, rg);
      if (denom > 0.0) {
        CVec diff(rg_new.size());
        for (std::size_t j = 0; j < diff.size(); ++j) diff[j] = rg_new[j] - rg_old_t[j];
        beta = std::max(0.0, real_inner(rg_new, diff) / denom);
      }
      const CVec d_t = project(d, x_new);
      CVec d_new(d_t.size());
      for (std::size_t j = 0; j < d_new.size(); ++j) d_new[j] = rg_new[j] + beta * d_t[j];

      x = std::move(x_new);
      fx = f_new;
      rg = rg_new;
      d = std::move(d_new);
    }
    return x;
  }

 private:
  static double real_inner(const CVec& a, const CVec& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += (std::conj(a[j]) * b[j]).real();
    return s;
  }

  static CVec project(const CVec& v, const CVec& x) {
    CVec out(v.size());
    for (std::size_t j = 0; j < v.size(); ++j)
      out[j] = v[j] - (v[j] * std::conj(x[j])).real() * x[j];
    return out;
  }

  static CVec retract(const CVec& x, const CVec& d, double alpha) {
    CVec out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
      const Complex y = x[j] + alpha * d[j];
      const double mag = std::abs(y);
      out[j] = mag > 0.0 ? y / mag : x[j];
    }
    return out;
  }

  Objective obj_;
  EuclideanGrad egrad_;
  int max_inner_;
};

}  // namespace

namespace {

Solution solve_manifold_from(const IsacProblem& problem, const ArrayGeometry& geometry,
                             const CVec& q, const SolverOptions& options, CVec psi,
                             CVec f) {
  const auto t0 = std::chrono::steady_clock::now();
  constexpr int kMaxInner = 30;

  CVec m = lorentzian_map(psi, q);

  Solution sol;
  double ratio = dinkelbach_ratio(problem, m, f);

  for (int t = 1; t <= options.max_iterations; ++t) {
    const double z = std::max(ratio, kZFloor);

    const RankTwoKernel kernel =
        quadratic_kernel(problem, f, geometry.elements_per_waveguide);
    auto psi_obj = [&](const CVec& p) {
      const CVec mm = lorentzian_map(p, q);
      return kernel.quad(mm) - z * norm2(mm);
    };
    auto psi_grad = [&](const CVec& p) {
      const CVec mm = lorentzian_map(p, q);
      const CVec am = kernel.apply(mm);
      CVec grad(p.size());
      for (std::size_t j = 0; j < p.size(); ++j)
        grad[j] = (am[j] - z * mm[j]) * std::conj(q[j]);
      return grad;
    };
    psi = CircleManifoldCg(psi_obj, psi_grad, kMaxInner).maximize(std::move(psi));
    m = lorentzian_map(psi, q);

    auto f_obj = [&](const CVec& fv) {
      const CVec v = compose_effective(m, fv);
      return problem.weight_comm * std::norm(cdot(problem.comm_channel, v)) +
             problem.weight_sense * std::norm(cdot(problem.sensing_steering, v));
    };
    auto f_grad = [&](const CVec& fv) {
      const std::size_t per_wg = m.size() / fv.size();
      const CVec v = compose_effective(m, fv);
      const Complex ch = cdot(problem.comm_channel, v);
      const Complex cg = cdot(problem.sensing_steering, v);
      CVec grad(fv.size());
      for (std::size_t i = 0; i < fv.size(); ++i) {
        Complex r{0.0, 0.0};
        for (std::size_t j = i * per_wg; j < (i + 1) * per_wg; ++j)
          r += std::conj(m[j]) * (problem.weight_comm * problem.comm_channel[j] * ch +
                                  problem.weight_sense * problem.sensing_steering[j] * cg);
        grad[i] = 2.0 * r;
      }
      return grad;
    };
    f = CircleManifoldCg(f_obj, f_grad, kMaxInner).maximize(std::move(f));

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

Solution solve_manifold(const IsacProblem& problem, const ArrayGeometry& geometry,
                        const CVec& q, const SolverOptions& options) {
  const int n_r = geometry.total_elements();
  if (static_cast<int>(q.size()) != n_r ||
      static_cast<int>(problem.comm_channel.size()) != n_r)
    throw std::invalid_argument("solve_manifold: dimension mismatch");

  const auto t0 = std::chrono::steady_clock::now();
  Solution best;
  double best_ratio = -1.0;
  for (auto& start : solver_start_points(problem, geometry, q, options)) {
    Solution cur = solve_manifold_from(problem, geometry, q, options,
                                       std::move(start.psi), std::move(start.f));
    const double r = cur.trace.empty() ? -1.0 : cur.trace.back().ratio_objective;
    if (r > best_ratio) {
      best_ratio = r;
      best = std::move(cur);
    }
  }
  best.total_ms = elapsed_ms_since(t0);
  return best;
}

}  // namespace trihbf
