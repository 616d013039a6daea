#include "trihbf/oracle.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <Eigen/Dense>

#include "trihbf/channel.hpp"
#include "trihbf/baselines.hpp"
#include "trihbf/rng.hpp"

namespace trihbf {

double DenseCheckResult::max_residual() const {
  return std::max({residual_bilinear, residual_trace, residual_kernel});
}

CVec finite_difference_gradient(const std::function<double(const CVec&)>& objective,
                                const CVec& psi, double step) {
  if (step <= 0.0)
    throw std::invalid_argument("finite_difference_gradient: step must be positive");

  CVec grad(psi.size());
  CVec p = psi;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    p[j] = psi[j] + step;
    const double fxp = objective(p);
    p[j] = psi[j] - step;
    const double fxm = objective(p);
    p[j] = psi[j] + Complex{0.0, step};
    const double fyp = objective(p);
    p[j] = psi[j] - Complex{0.0, step};
    const double fym = objective(p);
    p[j] = psi[j];
    grad[j] = Complex{(fxp - fxm) / (2.0 * step), (fyp - fym) / (2.0 * step)};
  }
  return grad;
}

GridSearchResult exhaustive_phase_search(const IsacProblem& problem,
                                         const ArrayGeometry& geometry, const CVec& q,
                                         const GridSearchSpec& spec) {
  const int n_r = geometry.total_elements();
  const int n_w = geometry.n_waveguides;
  const int n_u = geometry.elements_per_waveguide;
  if (spec.phase_levels < 1)
    throw std::invalid_argument("exhaustive_phase_search: phase_levels must be >= 1");
  if (n_r + n_w > spec.max_total_variables) {
    char msg[160];
    std::snprintf(msg, sizeof(msg),
                  "exhaustive_phase_search: %d variables exceed cap %d "
                  "(enumeration size ~ %.3g)",
                  n_r + n_w, spec.max_total_variables,
                  std::pow(static_cast<double>(spec.phase_levels), n_r + n_w));
    throw std::invalid_argument(msg);
  }

  const int k = spec.phase_levels;
  CVec grid(k);
  for (int i = 0; i < k; ++i) {
    const double a = 2.0 * M_PI * i / k;
    grid[i] = Complex{std::cos(a), std::sin(a)};
  }
  constexpr Complex imag_unit{0.0, 1.0};

  // per-element candidate weights
  std::vector<CVec> m_cand(n_r, CVec(k));
  std::vector<std::vector<double>> nn(n_r, std::vector<double>(k));
  for (int j = 0; j < n_r; ++j)
    for (int i = 0; i < k; ++i) {
      m_cand[j][i] = q[j] * (imag_unit + grid[i]) * 0.5;
      nn[j][i] = std::norm(m_cand[j][i]);
    }

  GridSearchResult best;
  best.objective = -1.0;
  std::vector<int> psi_idx(n_r, 0), best_psi(n_r, 0);
  CVec f(n_w), best_f;

  std::vector<CVec> ch(n_r, CVec(k)), cg(n_r, CVec(k));

  // recursive enumeration over psi with running partial sums
  std::function<void(int, Complex, Complex, double)> recurse =
      [&](int j, Complex sh, Complex sg, double nsum) {
        if (j == n_r) {
          if (nsum <= 0.0) return;
          const double val = (problem.weight_comm * std::norm(sh) +
                              problem.weight_sense * std::norm(sg)) /
                             nsum;
          if (val > best.objective) {
            best.objective = val;
            best_psi = psi_idx;
            best_f = f;
          }
          return;
        }
        for (int i = 0; i < k; ++i) {
          psi_idx[j] = i;
          recurse(j + 1, sh + ch[j][i], sg + cg[j][i], nsum + nn[j][i]);
        }
      };

  // f enumeration; the leading analog phase is pinned (common-phase invariance)
  std::vector<int> f_idx(n_w, 0);
  const long total_f = static_cast<long>(std::pow(k, std::max(0, n_w - 1)));
  for (long code = 0; code < total_f; ++code) {
    long c = code;
    f[0] = grid[0];
    for (int i = 1; i < n_w; ++i) {
      f[i] = grid[c % k];
      c /= k;
    }
    for (int j = 0; j < n_r; ++j) {
      const Complex fj = f[j / n_u];
      for (int i = 0; i < k; ++i) {
        // contributions to a_h^H m and a_g^H m with a_h = H f^*
        ch[j][i] = std::conj(problem.comm_channel[j]) * fj * m_cand[j][i];
        cg[j][i] = std::conj(problem.sensing_steering[j]) * fj * m_cand[j][i];
      }
    }
    recurse(0, Complex{0, 0}, Complex{0, 0}, 0.0);
  }

  if (best.objective < 0.0)
    throw std::runtime_error("exhaustive_phase_search: no feasible grid point");
  best.psi.resize(n_r);
  for (int j = 0; j < n_r; ++j) best.psi[j] = grid[best_psi[j]];
  best.f = std::move(best_f);
  return best;
}

namespace {

Eigen::MatrixXcd dense_dma_matrix(const CVec& m, const ArrayGeometry& geometry) {
  const int n_r = geometry.total_elements();
  const int n_w = geometry.n_waveguides;
  const int n_u = geometry.elements_per_waveguide;
  Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(n_r, n_w);
  for (int j = 0; j < n_r; ++j) mat(j, j / n_u) = m[j];
  return mat;
}

Eigen::VectorXcd to_eigen(const CVec& v) {
  Eigen::VectorXcd out(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) out(j) = v[j];
  return out;
}

}  // namespace

DenseCheckResult dense_model_check(const CVec& m, const CVec& f, const CVec& h,
                                   const CVec& g, const ArrayGeometry& geometry) {
  const Eigen::MatrixXcd mm = dense_dma_matrix(m, geometry);
  const Eigen::MatrixXcd hh = dense_dma_matrix(h, geometry);
  const Eigen::MatrixXcd gg = dense_dma_matrix(g, geometry);
  const Eigen::VectorXcd fe = to_eigen(f);
  const Eigen::VectorXcd he = to_eigen(h);
  const Eigen::VectorXcd ge = to_eigen(g);
  const Eigen::VectorXcd me = to_eigen(m);

  DenseCheckResult res;

  const Complex lhs = he.adjoint() * mm * fe;
  const Complex rhs = (me.transpose() * hh.conjugate() * fe)(0);
  res.residual_bilinear = std::abs(lhs - rhs);

  const double trace = (mm * mm.adjoint()).trace().real();
  res.residual_trace = std::abs((mm * fe).squaredNorm() - trace);

  // equal weights so both rank-1 terms are exercised
  const Eigen::VectorXcd ah = hh * fe.conjugate();
  const Eigen::VectorXcd ag = gg * fe.conjugate();
  const Eigen::MatrixXcd a = ah * ah.adjoint() + ag * ag.adjoint();
  const double quad = (me.adjoint() * a * me)(0).real();
  const double direct = std::norm(Complex((he.adjoint() * mm * fe)(0))) +
                        std::norm(Complex((ge.adjoint() * mm * fe)(0)));
  res.residual_kernel = std::abs(quad - direct);
  return res;
}

double lambda_max_dense(const CVec& h, const CVec& g, double delta_c, double delta_s) {
  const Eigen::VectorXcd he = to_eigen(h);
  const Eigen::VectorXcd ge = to_eigen(g);
  const Eigen::MatrixXcd r =
      delta_c * (he * he.adjoint()) + delta_s * (ge * ge.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(r);
  return solver.eigenvalues().maxCoeff();
}

double hessian_min_eigenvalue(const RankTwoKernel& kernel, const CVec& q, double z) {
  const std::size_t n = q.size();
  const Eigen::VectorXcd ah = to_eigen(kernel.a_h);
  const Eigen::VectorXcd ag = to_eigen(kernel.a_g);
  const Eigen::MatrixXcd a =
      kernel.delta_c * (ah * ah.adjoint()) + kernel.delta_s * (ag * ag.adjoint());
  const Eigen::VectorXcd qe = to_eigen(q);
  const Eigen::MatrixXcd qd = qe.asDiagonal();
  const Eigen::MatrixXcd hess = qd.adjoint() * a * qd - z * (qd.adjoint() * qd) +
                                z * Eigen::MatrixXcd::Identity(n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hess);
  return solver.eigenvalues().minCoeff();
}

namespace {

struct RandomInstance {
  ArrayGeometry geometry;
  CVec q;
  CVec h;
  CVec g;
  double delta_c = 0.5;
  double delta_s = 0.5;
};

RandomInstance random_instance(Rng& rng, int n_w, int n_u) {
  RandomInstance inst;
  inst.geometry = build_dma_geometry(n_w, n_u, 28e9);
  inst.q = propagation_gains(inst.geometry, 0.6, 827.67);
  const int n = inst.geometry.total_elements();
  inst.h.resize(n);
  for (auto& x : inst.h) x = rng.cnormal();
  inst.g = steering_vector(inst.geometry,
                           {rng.uniform(-M_PI / 3, M_PI / 3), rng.uniform(M_PI / 6, 5 * M_PI / 6)});
  inst.delta_c = rng.uniform(0.05, 0.95);
  inst.delta_s = 1.0 - inst.delta_c;
  return inst;
}

}  // namespace

int run_verification(std::string& report) {
  int failures = 0;
  auto check = [&](bool ok, const std::string& name, const std::string& detail) {
    report += (ok ? "ok   " : "FAIL ") + name + ": " + detail + "\n";
    if (!ok) ++failures;
  };
  char buf[160];
  Rng rng(20260823);

  // dense identity chain on random feasible instances
  {
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      auto inst = random_instance(rng, 4, 4);
      CVec psi(16), f(4);
      for (auto& p : psi) p = rng.unit_phase();
      for (auto& x : f) x = rng.unit_phase();
      const CVec m = lorentzian_map(psi, inst.q);
      worst = std::max(worst,
                       dense_model_check(m, f, inst.h, inst.g, inst.geometry).max_residual());
    }
    std::snprintf(buf, sizeof(buf), "max residual %.3g", worst);
    check(worst < 1e-12, "dense-identity-chain", buf);
  }

  // negative control: corrupted block mapping must be detected
  {
    auto inst = random_instance(rng, 2, 2);
    CVec psi(4);
    CVec f = {Complex{1, 0}, rng.unit_phase()};
    for (auto& p : psi) p = rng.unit_phase();
    CVec m = lorentzian_map(psi, inst.q);
    std::swap(m[0], m[3]);
    CVec m_good = lorentzian_map(psi, inst.q);
    const CVec v_bad = compose_effective(m, f);
    // residual of |h^H M f| computed with the corrupted m against the clean path
    const double bad = std::abs(std::abs(cdot(inst.h, v_bad)) -
                                std::abs(cdot(inst.h, compose_effective(m_good, f))));
    std::snprintf(buf, sizeof(buf), "discrepancy %.3g", bad);
    check(bad > 1e-12, "corrupted-mapping-detected", buf);
  }

  // finite differences: known quadratic ||psi||^2 -> 2 psi
  {
    CVec psi(6);
    for (auto& p : psi) p = rng.cnormal();
    const CVec grad = finite_difference_gradient(
        [](const CVec& p) { return norm2(p); }, psi, 1e-5);
    double err = 0.0;
    for (std::size_t j = 0; j < psi.size(); ++j)
      err = std::max(err, std::abs(grad[j] - 2.0 * psi[j]));
    std::snprintf(buf, sizeof(buf), "max error %.3g", err);
    check(err < 1e-8, "fd-known-quadratic", buf);
  }

  // constant objective -> zero gradient
  {
    CVec psi(4);
    for (auto& p : psi) p = rng.unit_phase();
    const CVec grad =
        finite_difference_gradient([](const CVec&) { return 3.25; }, psi, 1e-5);
    double err = 0.0;
    for (const auto& x : grad) err = std::max(err, std::abs(x));
    check(err == 0.0, "fd-constant-objective", "exactly zero");
  }

  // surrogate gradient vs finite differences at N_r = 8
  {
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      auto inst = random_instance(rng, 2, 4);
      IsacProblem problem(inst.h, inst.g, inst.delta_c, inst.delta_s, 10.0);
      CVec psi(8), f(2);
      for (auto& p : psi) p = rng.unit_phase();
      for (auto& x : f) x = rng.unit_phase();
      const RankTwoKernel kernel = quadratic_kernel(problem, f, 4);
      const double z = rng.uniform(0.1, 5.0);
      const CVec analytic = surrogate_gradient(psi, kernel, inst.q, z);
      const CVec numeric = finite_difference_gradient(
          [&](const CVec& p) { return surrogate_value(p, kernel, inst.q, z); }, psi, 1e-5);
      double num = 0.0, den = 0.0;
      for (std::size_t j = 0; j < psi.size(); ++j) {
        num = std::max(num, std::abs(analytic[j] - numeric[j]));
        den = std::max(den, std::abs(analytic[j]));
      }
      worst = std::max(worst, num / std::max(den, 1e-9));
    }
    std::snprintf(buf, sizeof(buf), "max rel error %.3g", worst);
    check(worst < 1e-6, "surrogate-gradient-fd", buf);
  }

  // Hessian positive definiteness for |q| < 1, z > 0
  {
    double min_eig = 1e300;
    for (int trial = 0; trial < 20; ++trial) {
      auto inst = random_instance(rng, 4, 4);
      IsacProblem problem(inst.h, inst.g, inst.delta_c, inst.delta_s, 10.0);
      CVec f(4);
      for (auto& x : f) x = rng.unit_phase();
      const RankTwoKernel kernel = quadratic_kernel(problem, f, 4);
      min_eig = std::min(min_eig,
                         hessian_min_eigenvalue(kernel, inst.q, rng.uniform(0.01, 10.0)));
    }
    std::snprintf(buf, sizeof(buf), "min eigenvalue %.3g", min_eig);
    check(min_eig > 0.0, "hessian-positive-definite", buf);
  }

  // grid refinement monotonicity
  {
    auto inst = random_instance(rng, 1, 2);
    IsacProblem problem(inst.h, inst.g, inst.delta_c, inst.delta_s, 10.0);
    double prev = -1.0;
    bool monotone = true;
    for (int k : {4, 8, 16}) {
      const auto res =
          exhaustive_phase_search(problem, inst.geometry, inst.q, {k, 8});
      if (res.objective < prev - 1e-12) monotone = false;
      prev = res.objective;
    }
    std::snprintf(buf, sizeof(buf), "best ratio at K=16: %.6g", prev);
    check(monotone, "grid-refinement-monotone", buf);
  }

  // analytic 2x2 eigensolver vs power iteration
  {
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      auto inst = random_instance(rng, 4, 8);
      IsacProblem problem(inst.h, inst.g, inst.delta_c, inst.delta_s, 10.0);
      const double analytic = solve_fd(problem).objective / problem.power_budget;
      const double generic = lambda_max_dense(inst.h, inst.g, inst.delta_c, inst.delta_s);
      worst = std::max(worst, std::abs(analytic - generic) / std::max(1.0, analytic));
    }
    std::snprintf(buf, sizeof(buf), "max rel error %.3g", worst);
    check(worst < 1e-10, "fd-eigenvalue-cross-check", buf);
  }

  return failures;
}

}  // namespace trihbf
