#pragma once

#include <complex>
#include <vector>

namespace trihbf {

using Complex = std::complex<double>;
using CVec = std::vector<Complex>;

// a^H b
inline Complex cdot(const CVec& a, const CVec& b) {
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

// sum_i |v_i|^2
inline double norm2(const CVec& v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return s;
}

}  // namespace trihbf
