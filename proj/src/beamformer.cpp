#include "trihbf/beamformer.hpp"

#include <cmath>
#include <stdexcept>

namespace trihbf {

IsacProblem::IsacProblem(CVec h, CVec g, double delta_c, double delta_s, double p_t)
    : comm_channel(std::move(h)),
      sensing_steering(std::move(g)),
      weight_comm(delta_c),
      weight_sense(delta_s),
      power_budget(p_t) {
  if (comm_channel.size() != sensing_steering.size())
    throw std::invalid_argument("IsacProblem: h and g must have equal length");
  if (weight_comm < 0.0 || weight_sense < 0.0)
    throw std::invalid_argument("IsacProblem: weights must be nonnegative");
  if (weight_comm + weight_sense <= 0.0)
    throw std::invalid_argument("IsacProblem: at least one weight must be positive");
  if (power_budget <= 0.0)
    throw std::invalid_argument("IsacProblem: power budget must be positive");
}

CVec lorentzian_map(const CVec& psi, const CVec& q) {
  if (psi.size() != q.size())
    throw std::invalid_argument("lorentzian_map: psi and q length mismatch");

  constexpr Complex imag_unit{0.0, 1.0};
  CVec m;
  m.reserve(psi.size());
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const double mag = std::abs(psi[j]);
    if (std::abs(mag - 1.0) > 1e-9)
      throw std::invalid_argument("lorentzian_map: psi entry not unit modulus");
    const Complex p = psi[j] / mag;
    m.push_back(q[j] * (imag_unit + p) * 0.5);
  }
  return m;
}

DmaState make_dma_state(CVec q, CVec psi) {
  DmaState state;
  state.weights = lorentzian_map(psi, q);
  for (auto& p : psi) p /= std::abs(p);
  state.gains = std::move(q);
  state.phases = std::move(psi);
  return state;
}

CVec compose_effective(const CVec& m, const CVec& f) {
  if (f.empty() || m.size() % f.size() != 0)
    throw std::invalid_argument("compose_effective: m length must be a multiple of f length");
  const std::size_t per_wg = m.size() / f.size();
  CVec v;
  v.reserve(m.size());
  for (std::size_t j = 0; j < m.size(); ++j) v.push_back(m[j] * f[j / per_wg]);
  return v;
}

double snr(const IsacProblem& problem, const CVec& m, const CVec& f, Complex w) {
  const CVec v = compose_effective(m, f);
  return std::norm(cdot(problem.comm_channel, v) * w);
}

double sensing_power(const IsacProblem& problem, const CVec& m, const CVec& f, Complex w) {
  const CVec v = compose_effective(m, f);
  return std::norm(cdot(problem.sensing_steering, v) * w);
}

double transmit_power(const CVec& m, const CVec& f, Complex w) {
  for (const auto& fi : f)
    if (std::abs(std::abs(fi) - 1.0) > 1e-6)
      throw std::invalid_argument("transmit_power: analog weights must be unit modulus");
  return std::norm(w) * norm2(m);
}

double isac_objective(const IsacProblem& problem, const CVec& m, const CVec& f, Complex w) {
  return problem.weight_comm * snr(problem, m, f, w) +
         problem.weight_sense * sensing_power(problem, m, f, w);
}

double achievable_rate(double snr_value) {
  if (snr_value < 0.0)
    throw std::invalid_argument("achievable_rate: snr must be nonnegative");
  return std::log2(1.0 + snr_value);
}

std::string architecture_name(ArchitectureKind kind) {
  switch (kind) {
    case ArchitectureKind::TriHybrid: return "tri-hbf";
    case ArchitectureKind::FdSn: return "fd-sn";
    case ArchitectureKind::FdSa: return "fd-sa";
    case ArchitectureKind::HbfSn: return "hbf-sn";
    case ArchitectureKind::HbfSa: return "hbf-sa";
  }
  throw std::invalid_argument("architecture_name: unknown kind");
}

ArchitectureKind architecture_from_name(const std::string& name) {
  if (name == "tri-hbf") return ArchitectureKind::TriHybrid;
  if (name == "fd-sn") return ArchitectureKind::FdSn;
  if (name == "fd-sa") return ArchitectureKind::FdSa;
  if (name == "hbf-sn") return ArchitectureKind::HbfSn;
  if (name == "hbf-sa") return ArchitectureKind::HbfSa;
  throw std::invalid_argument("unknown architecture: " + name);
}

double energy_efficiency(double rate, double tx_power_mw, const PowerModel& model,
                         const ArchitectureDescriptor& desc) {
  if (model.amp_efficiency <= 0.0 || model.amp_efficiency > 1.0)
    throw std::invalid_argument("energy_efficiency: amplifier efficiency must be in (0, 1]");
  if (model.p_rf_mw < 0.0 || model.p_ps_mw < 0.0 || model.p_elem_mw < 0.0 ||
      model.p_bb_mw < 0.0)
    throw std::invalid_argument("energy_efficiency: power constants must be nonnegative");

  const double total_mw = tx_power_mw / model.amp_efficiency +
                          desc.n_rf * model.p_rf_mw + desc.n_ps * model.p_ps_mw +
                          desc.n_elem_dma * model.p_elem_mw + model.p_bb_mw;
  if (total_mw <= 0.0)
    throw std::invalid_argument("energy_efficiency: total power is zero");
  return rate / (total_mw * 1e-3);
}

}  // namespace trihbf
