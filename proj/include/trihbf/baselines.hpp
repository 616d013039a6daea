#pragma once

#include <utility>

#include "trihbf/solver.hpp"

namespace trihbf {

// SN: same element count as the DMA at lambda/2 spacing on both axes.
// SA: same aperture, per-row count max(1, round(2 N_u / 5)) at lambda/2.
std::pair<ArrayGeometry, ArchitectureDescriptor> build_architecture(
    ArchitectureKind kind, const ArrayGeometry& base_dma);

struct SolverStart {
  CVec psi;
  CVec f;
};

// Start points shared by solve() and solve_manifold(): index 0 aligns the
// tunable part of m with the dominant fully digital direction, the rest are
// random unit phases from the seed stream.
std::vector<SolverStart> solver_start_points(const IsacProblem& problem,
                                             const ArrayGeometry& geometry,
                                             const CVec& q,
                                             const SolverOptions& options);

struct FdSolution {
  CVec precoder;           // x, ||x||^2 = P_t
  double objective = 0.0;  // = P_t * lambda_max(dc h h^H + ds g g^H)
};

// Closed form via the 2x2 eigenproblem on span{h, g}.
FdSolution solve_fd(const IsacProblem& problem);

struct HbfSolution {
  CVec phases;  // f_full, unit modulus
  Complex w;    // sqrt(P_t / N)
  double objective = 0.0;
  IterationTrace trace;
  bool converged = false;
  int iterations = 0;
};

// Phase-extraction MM on f <- exp(i angle(R f)) with R = dc h h^H + ds g g^H.
HbfSolution solve_hbf(const IsacProblem& problem, const SolverOptions& options);

// DT-Man: same Dinkelbach outer loop as solve(), inner subproblems maximized
// by Riemannian conjugate gradient on the product-of-circles manifold.
Solution solve_manifold(const IsacProblem& problem, const ArrayGeometry& geometry,
                        const CVec& q, const SolverOptions& options);

}  // namespace trihbf
