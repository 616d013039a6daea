#pragma once

#include <cstdint>
#include <string>

#include "trihbf/beamformer.hpp"
#include "trihbf/geometry.hpp"
#include "trihbf/types.hpp"

namespace trihbf {

struct SolverOptions {
  int max_iterations = 500;
  double rel_tolerance = 1e-6;  // on the ratio objective
  std::uint64_t seed = 0;
  // Use the printed-formula variant of the phase gradient for comparison runs
  // instead of the finite-difference-validated derivative.
  bool alt_gradient = false;
  int inner_sweeps = 10;  // psi/f updates per z refresh
  // Starts per solve: one deterministic start aligned with the fully digital
  // optimum, the rest drawn from the seed stream; the best run is kept.
  int restarts = 6;
};

struct IterationRecord {
  int iteration = 0;
  double z = 0.0;
  double ratio_objective = 0.0;  // (dc|h^H M f|^2 + ds|g^H M f|^2) / sum|m|^2
  double p1_objective = 0.0;     // P_t * ratio (after w-scaling)
  double elapsed_ms = 0.0;
};

using IterationTrace = std::vector<IterationRecord>;

struct Solution {
  DigitalWeight digital;
  AnalogBeamformer analog;
  DmaState dma;
  IterationTrace trace;
  bool converged = false;
  int iterations = 0;
  double total_ms = 0.0;
};

// |w|^2 = P_t / sum|m_j|^2, phase 0
Complex optimal_digital_weight(const CVec& m, const CVec& f, double p_t);

// z = (dc|h^H M f|^2 + ds|g^H M f|^2) / sum|m_j|^2
double dinkelbach_ratio(const IsacProblem& problem, const CVec& m, const CVec& f);

// Blocks of a length-N_r vector: block i = x((i-1)N_u+1 : i N_u).
std::vector<CVec> lift_blockdiag(const CVec& x, int n_waveguides);

// A = dc * a_h a_h^H + ds * a_g a_g^H stored by its rank-1 factors, where
// a_h = H f^* (entries h_j * conj(f_{wg(j)})) and likewise a_g.
struct RankTwoKernel {
  CVec a_h;
  CVec a_g;
  double delta_c = 0.0;
  double delta_s = 0.0;

  CVec apply(const CVec& m) const;   // A m, O(N_r)
  double quad(const CVec& m) const;  // m^H A m
};

RankTwoKernel quadratic_kernel(const IsacProblem& problem, const CVec& f,
                               int elements_per_waveguide);

// Surrogate value f(psi) = m^H A m - z m^H m + z psi^H psi with
// m = (i q + psi o q)/2, evaluable at unconstrained psi.
double surrogate_value(const CVec& psi, const RankTwoKernel& kernel, const CVec& q,
                       double z);

// Wirtinger ascent direction 2 * df/dpsi* = ((A - zI)m) o q^* + 2 z psi.
// With alt_formula set, returns (2Am - 2zm) o q^* + 2 z psi instead.
CVec surrogate_gradient(const CVec& psi, const RankTwoKernel& kernel, const CVec& q,
                        double z, bool alt_formula = false);

// psi'_j = grad_j / |grad_j|; zero entries keep the previous phase.
CVec update_psi(const CVec& psi, const RankTwoKernel& kernel, const CVec& q,
                double z, bool alt_formula = false);

// f'_i = r_i / |r_i| with r = M^H (dc h h^H + ds g g^H) M f; zero entries keep
// the previous phase.
CVec update_analog(const CVec& f, const CVec& m, const IsacProblem& problem);

// Dinkelbach outer loop with one closed-form psi and f update per z refresh;
// w scaled to the power boundary at the end.
Solution solve(const IsacProblem& problem, const ArrayGeometry& geometry,
               const CVec& q, const SolverOptions& options);

// {w_re, w_im, f: [[re, im], ...], psi: [...], metrics: {...}}
std::string solution_to_json(const Solution& solution, const IsacProblem& problem,
                             double ee);

std::string trace_to_csv(const IterationTrace& trace);

}  // namespace trihbf
