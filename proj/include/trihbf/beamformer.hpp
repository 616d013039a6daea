#pragma once

#include <string>

#include "trihbf/geometry.hpp"
#include "trihbf/types.hpp"

namespace trihbf {

// Lorentzian-constrained metasurface state: fixed waveguide gains q, tunable
// unit-modulus phases psi, derived element weights m_j = q_j * (i + psi_j) / 2.
struct DmaState {
  CVec gains;    // q
  CVec phases;   // psi, |psi_j| = 1
  CVec weights;  // m
};

struct AnalogBeamformer {
  CVec weights;  // f, |f_i| = 1
};

struct DigitalWeight {
  Complex value;
};

// One optimization instance: normalized user channel h, sensing steering g,
// objective weights, power budget (linear mW).
struct IsacProblem {
  CVec comm_channel;       // h
  CVec sensing_steering;   // g
  double weight_comm;      // delta_c >= 0
  double weight_sense;     // delta_s >= 0
  double power_budget;     // P_t, mW

  IsacProblem(CVec h, CVec g, double delta_c, double delta_s, double p_t);
};

// m_j = q_j * (i + psi_j) / 2. psi entries must be unit modulus within 1e-9;
// they are renormalized to exactly unit modulus before the map is applied.
CVec lorentzian_map(const CVec& psi, const CVec& q);

DmaState make_dma_state(CVec q, CVec psi);

// v = M f without materializing M: v_j = m_j * f_{wg(j)}.
// Requires m.size() to be a multiple of f.size().
CVec compose_effective(const CVec& m, const CVec& f);

double snr(const IsacProblem& problem, const CVec& m, const CVec& f, Complex w);
double sensing_power(const IsacProblem& problem, const CVec& m, const CVec& f, Complex w);

// |w|^2 * sum_j |m_j|^2; requires unit-modulus f.
double transmit_power(const CVec& m, const CVec& f, Complex w);

double isac_objective(const IsacProblem& problem, const CVec& m, const CVec& f, Complex w);

// log2(1 + snr)
double achievable_rate(double snr_value);

// Hardware power model (constants are configuration defaults; all in mW).
struct PowerModel {
  double amp_efficiency = 0.35;  // eta in (0, 1]
  double p_rf_mw = 250.0;        // per RF chain
  double p_ps_mw = 30.0;         // per phase shifter
  double p_elem_mw = 0.25;       // per metasurface element
  double p_bb_mw = 200.0;        // baseband
};

enum class ArchitectureKind { TriHybrid, FdSn, FdSa, HbfSn, HbfSa };

std::string architecture_name(ArchitectureKind kind);
ArchitectureKind architecture_from_name(const std::string& name);

struct ArchitectureDescriptor {
  ArchitectureKind kind = ArchitectureKind::TriHybrid;
  int n_antennas = 0;
  int n_rf = 0;
  int n_ps = 0;
  int n_elem_dma = 0;
  double element_spacing = 0.0;
};

// rate / P_total with P_total in watts:
// P_total = P_t/eta + N_RF*P_RF + N_PS*P_PS + N_elem*P_elem + P_BB (mW).
double energy_efficiency(double rate, double tx_power_mw, const PowerModel& model,
                         const ArchitectureDescriptor& desc);

}  // namespace trihbf
