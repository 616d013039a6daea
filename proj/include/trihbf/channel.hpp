#pragma once

#include <cstdint>
#include <string>

#include "trihbf/geometry.hpp"
#include "trihbf/rng.hpp"
#include "trihbf/types.hpp"

namespace trihbf {

struct SvPath {
  Complex gain;     // alpha_l ~ CN(0,1)
  double azimuth;   // radians
  double elevation; // radians
};

struct SvChannelParams {
  int n_paths = 5;
  double azimuth_lo = -M_PI / 3.0;
  double azimuth_hi = M_PI / 3.0;
  double elevation_lo = M_PI / 6.0;
  double elevation_hi = 5.0 * M_PI / 6.0;
  double sigma2_mw = 1.0;  // noise power, linear mW
};

// Geometry-independent part of a channel draw. The same draw can be realized
// on different array geometries so that architectures under comparison see
// identical propagation conditions.
struct SvDraw {
  std::uint64_t seed = 0;
  std::vector<SvPath> paths;
  double sigma2_mw = 1.0;
};

struct ChannelRealization {
  CVec raw_channel;         // h_bar
  double noise_power = 1.0; // sigma^2, linear mW
  CVec normalized_channel;  // h = h_bar / sigma
};

SvDraw sample_sv_paths(const SvChannelParams& params, std::uint64_t seed);

// h_bar = sqrt(N_r / L) * sum_l alpha_l * a(theta_l, phi_l)
ChannelRealization realize_channel(const ArrayGeometry& geometry,
                                   const SvDraw& draw);

ChannelRealization sample_sv_channel(const ArrayGeometry& geometry,
                                     const SvChannelParams& params,
                                     std::uint64_t seed);

TargetDirection sample_direction(const SvChannelParams& params, Rng& rng);

// JSON schema: {seed, L, paths: [{gain_re, gain_im, azimuth, elevation}], sigma2_mw}
std::string sv_draw_to_json(const SvDraw& draw);
SvDraw sv_draw_from_json(const std::string& json_text);

}  // namespace trihbf
