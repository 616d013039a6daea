#include "trihbf/channel.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace trihbf {

SvDraw sample_sv_paths(const SvChannelParams& params, std::uint64_t seed) {
  if (params.n_paths < 1)
    throw std::invalid_argument("sample_sv_paths: n_paths must be >= 1");
  if (params.sigma2_mw <= 0.0)
    throw std::invalid_argument("sample_sv_paths: sigma2 must be positive");

  Rng rng(seed);
  SvDraw draw;
  draw.seed = seed;
  draw.sigma2_mw = params.sigma2_mw;
  draw.paths.reserve(params.n_paths);
  for (int l = 0; l < params.n_paths; ++l) {
    SvPath p;
    p.azimuth = rng.uniform(params.azimuth_lo, params.azimuth_hi);
    p.elevation = rng.uniform(params.elevation_lo, params.elevation_hi);
    p.gain = rng.cnormal();
    draw.paths.push_back(p);
  }
  return draw;
}

ChannelRealization realize_channel(const ArrayGeometry& geometry,
                                   const SvDraw& draw) {
  if (draw.paths.empty())
    throw std::invalid_argument("realize_channel: draw has no paths");

  const int n = geometry.total_elements();
  const double scale = std::sqrt(static_cast<double>(n) / draw.paths.size());

  ChannelRealization ch;
  ch.raw_channel.assign(n, Complex{0.0, 0.0});
  for (const auto& p : draw.paths) {
    const CVec a = steering_vector(geometry, {p.azimuth, p.elevation});
    for (int j = 0; j < n; ++j) ch.raw_channel[j] += p.gain * a[j];
  }
  for (auto& x : ch.raw_channel) x *= scale;

  ch.noise_power = draw.sigma2_mw;
  const double inv_sigma = 1.0 / std::sqrt(draw.sigma2_mw);
  ch.normalized_channel.reserve(n);
  for (const auto& x : ch.raw_channel) ch.normalized_channel.push_back(x * inv_sigma);
  return ch;
}

ChannelRealization sample_sv_channel(const ArrayGeometry& geometry,
                                     const SvChannelParams& params,
                                     std::uint64_t seed) {
  return realize_channel(geometry, sample_sv_paths(params, seed));
}

TargetDirection sample_direction(const SvChannelParams& params, Rng& rng) {
  TargetDirection dir;
  dir.azimuth = rng.uniform(params.azimuth_lo, params.azimuth_hi);
  dir.elevation = rng.uniform(params.elevation_lo, params.elevation_hi);
  return dir;
}

std::string sv_draw_to_json(const SvDraw& draw) {
  nlohmann::json j;
  j["seed"] = draw.seed;
  j["L"] = draw.paths.size();
  j["sigma2_mw"] = draw.sigma2_mw;
  j["paths"] = nlohmann::json::array();
  for (const auto& p : draw.paths) {
    j["paths"].push_back({{"gain_re", p.gain.real()},
                          {"gain_im", p.gain.imag()},
                          {"azimuth", p.azimuth},
                          {"elevation", p.elevation}});
  }
  return j.dump(2);
}

SvDraw sv_draw_from_json(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text);
  SvDraw draw;
  draw.seed = j.at("seed").get<std::uint64_t>();
  draw.sigma2_mw = j.at("sigma2_mw").get<double>();
  for (const auto& p : j.at("paths")) {
    draw.paths.push_back({Complex{p.at("gain_re").get<double>(),
                                  p.at("gain_im").get<double>()},
                          p.at("azimuth").get<double>(),
                          p.at("elevation").get<double>()});
  }
  if (j.at("L").get<std::size_t>() != draw.paths.size())
    throw std::invalid_argument("sv_draw_from_json: L does not match path count");
  if (draw.paths.empty())
    throw std::invalid_argument("sv_draw_from_json: no paths");
  return draw;
}

}  // namespace trihbf
