#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "trihbf/channel.hpp"

using namespace trihbf;

TEST_CASE("single deterministic path gives scaled steering vector") {
  const auto geo = build_dma_geometry(2, 4, 28e9);
  SvDraw draw;
  draw.sigma2_mw = 1.0;
  draw.paths.push_back({Complex{1.0, 0.0}, 0.0, M_PI / 2.0});
  const auto ch = realize_channel(geo, draw);
  const double expected = std::sqrt(8.0);
  for (const auto& x : ch.raw_channel) {
    CHECK(x.real() == doctest::Approx(expected).epsilon(1e-12));
    CHECK(std::abs(x.imag()) < 1e-12);
  }
}

TEST_CASE("same seed reproduces the channel") {
  const auto geo = build_dma_geometry(2, 4, 28e9);
  SvChannelParams params;
  const auto a = sample_sv_channel(geo, params, 42);
  const auto b = sample_sv_channel(geo, params, 42);
  REQUIRE(a.raw_channel.size() == b.raw_channel.size());
  for (std::size_t j = 0; j < a.raw_channel.size(); ++j)
    CHECK(a.raw_channel[j] == b.raw_channel[j]);

  const auto c = sample_sv_channel(geo, params, 43);
  CHECK(norm2(a.raw_channel) != norm2(c.raw_channel));
}

TEST_CASE("channel norm expectation matches N_r^2") {
  const auto geo = build_dma_geometry(2, 8, 28e9);
  const double n_r = geo.total_elements();
  SvChannelParams params;
  params.n_paths = 5;
  double acc = 0.0;
  const int n_draws = 10000;
  for (int i = 0; i < n_draws; ++i)
    acc += norm2(sample_sv_channel(geo, params, 1000 + i).raw_channel);
  acc /= n_draws;
  CHECK(acc == doctest::Approx(n_r * n_r).epsilon(0.05));
}

TEST_CASE("normalization divides by sigma") {
  const auto geo = build_dma_geometry(1, 4, 28e9);
  SvChannelParams params;
  params.sigma2_mw = 4.0;
  const auto ch = sample_sv_channel(geo, params, 7);
  for (std::size_t j = 0; j < ch.raw_channel.size(); ++j)
    CHECK(std::abs(ch.normalized_channel[j] - ch.raw_channel[j] / 2.0) < 1e-15);

  params.sigma2_mw = 1.0;
  const auto ch1 = sample_sv_channel(geo, params, 7);
  for (std::size_t j = 0; j < ch1.raw_channel.size(); ++j)
    CHECK(ch1.normalized_channel[j] == ch1.raw_channel[j]);
}

TEST_CASE("invalid path count rejected") {
  SvChannelParams params;
  params.n_paths = 0;
  CHECK_THROWS_AS(sample_sv_paths(params, 1), std::invalid_argument);
}

TEST_CASE("draw JSON round trip") {
  SvChannelParams params;
  const auto draw = sample_sv_paths(params, 99);
  const auto restored = sv_draw_from_json(sv_draw_to_json(draw));
  CHECK(restored.seed == draw.seed);
  CHECK(restored.sigma2_mw == draw.sigma2_mw);
  REQUIRE(restored.paths.size() == draw.paths.size());
  for (std::size_t l = 0; l < draw.paths.size(); ++l) {
    CHECK(restored.paths[l].gain == draw.paths[l].gain);
    CHECK(restored.paths[l].azimuth == draw.paths[l].azimuth);
    CHECK(restored.paths[l].elevation == draw.paths[l].elevation);
  }
}

TEST_CASE("sampled angles stay in the configured ranges") {
  SvChannelParams params;
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto dir = sample_direction(params, rng);
    CHECK(dir.azimuth >= -M_PI / 3.0);
    CHECK(dir.azimuth <= M_PI / 3.0);
    CHECK(dir.elevation >= M_PI / 6.0);
    CHECK(dir.elevation <= 5.0 * M_PI / 6.0);
  }
  const auto draw = sample_sv_paths(params, 11);
  for (const auto& p : draw.paths) {
    CHECK(p.azimuth >= -M_PI / 3.0);
    CHECK(p.azimuth <= M_PI / 3.0);
  }
}
