#pragma once

#include <functional>
#include <string>

#include "trihbf/solver.hpp"

namespace trihbf {

struct GridSearchSpec {
  int phase_levels = 8;         // K
  int max_total_variables = 8;  // cap on N_r + N_w
};

struct GridSearchResult {
  CVec psi;
  CVec f;
  double objective = 0.0;  // best P2 ratio
};

// Central differences along the real and imaginary part of each entry,
// assembled into the Wirtinger form df/dx + i df/dy = 2 * df/dpsi*.
CVec finite_difference_gradient(const std::function<double(const CVec&)>& objective,
                                const CVec& psi, double step);

// Joint enumeration of psi_j, f_i over the K-th roots of unity. The first
// analog phase is pinned to 1: the ratio objective is invariant under a common
// phase rotation of f. Grid points with a zero denominator are skipped.
GridSearchResult exhaustive_phase_search(const IsacProblem& problem,
                                         const ArrayGeometry& geometry, const CVec& q,
                                         const GridSearchSpec& spec);

struct DenseCheckResult {
  double residual_bilinear = 0.0;  // h^H M f vs m^T H^* f
  double residual_trace = 0.0;     // ||M f||^2 vs tr(M M^H)
  double residual_kernel = 0.0;    // m^H A m vs dc|h^H M f|^2 + ds|g^H M f|^2
  double max_residual() const;
};

// Builds dense M, H, G and checks the identity chain against the implicit
// representations. Intended for N_r <= 64.
DenseCheckResult dense_model_check(const CVec& m, const CVec& f, const CVec& h,
                                   const CVec& g, const ArrayGeometry& geometry);

// Largest eigenvalue of dc h h^H + ds g g^H via a dense generic eigensolver,
// independent of the analytic 2x2 reduction in solve_fd.
double lambda_max_dense(const CVec& h, const CVec& g, double delta_c, double delta_s);

// Smallest eigenvalue of Q^H A Q - z Q^H Q + z I (dense, N_r <= 32).
double hessian_min_eigenvalue(const RankTwoKernel& kernel, const CVec& q, double z);

// Self-contained oracle battery; appends one line per check to the report.
// Returns the number of failed checks.
int run_verification(std::string& report);

}  // namespace trihbf
