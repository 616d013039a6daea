#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "trihbf/geometry.hpp"
#include "trihbf/rng.hpp"

using namespace trihbf;

TEST_CASE("full-scale DMA geometry") {
  const auto geo = build_dma_geometry(8, 16, 28e9);
  CHECK(geo.total_elements() == 128);
  CHECK(geo.wavelength == doctest::Approx(0.0107).epsilon(1e-3));
  CHECK(geo.waveguide_spacing == doctest::Approx(5.35e-3).epsilon(1e-3));
  CHECK(geo.element_spacing == doctest::Approx(2.14e-3).epsilon(1e-3));
  CHECK(geo.positions.size() == 128);
  CHECK(geo.feed_distances.size() == 128);
}

TEST_CASE("single-element array") {
  const auto geo = build_dma_geometry(1, 1, 28e9);
  CHECK(geo.positions[0].x == 0.0);
  CHECK(geo.positions[0].y == doctest::Approx(geo.wavelength / 5.0));
  CHECK(geo.positions[0].z == 0.0);
  CHECK(geo.feed_distances[0] == doctest::Approx(geo.wavelength / 5.0));
}

TEST_CASE("global index order and feed distances for 2x2") {
  const auto geo = build_dma_geometry(2, 2, 28e9);
  const double rho_e = geo.element_spacing;
  REQUIRE(geo.feed_distances.size() == 4);
  CHECK(geo.feed_distances[0] == doctest::Approx(rho_e));
  CHECK(geo.feed_distances[1] == doctest::Approx(2 * rho_e));
  CHECK(geo.feed_distances[2] == doctest::Approx(rho_e));
  CHECK(geo.feed_distances[3] == doctest::Approx(2 * rho_e));
  // waveguide 2 sits one waveguide spacing up in z
  CHECK(geo.positions[2].z == doctest::Approx(geo.waveguide_spacing));
  CHECK(geo.global_index(2, 1) == 2);
}

TEST_CASE("invalid configurations rejected") {
  CHECK_THROWS_AS(build_dma_geometry(0, 4, 28e9), std::invalid_argument);
  CHECK_THROWS_AS(build_dma_geometry(4, -1, 28e9), std::invalid_argument);
  CHECK_THROWS_AS(build_dma_geometry(4, 4, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_planar_geometry(0, 1, 1e-3, 1e-2), std::invalid_argument);
}

TEST_CASE("propagation gain magnitude and phase") {
  auto geo = build_dma_geometry(1, 1, 28e9);
  geo.feed_distances[0] = 0.00214;
  const auto q = propagation_gains(geo, 0.6, 827.67);
  CHECK(std::abs(q[0]) == doctest::Approx(std::exp(-0.00214 * 0.6)).epsilon(1e-12));
  CHECK(std::abs(q[0]) == doctest::Approx(0.99872).epsilon(1e-4));
  double phase = std::arg(q[0]);
  CHECK(phase == doctest::Approx(-0.00214 * 827.67).epsilon(1e-9));
  CHECK(phase == doctest::Approx(-1.7712).epsilon(1e-3));
}

TEST_CASE("propagation gain limits and composition") {
  const auto geo = build_dma_geometry(1, 2, 28e9);
  const auto q_heavy = propagation_gains(geo, 1e6, 827.67);
  CHECK(std::abs(q_heavy[0]) < 1e-300);

  // d_2 = 2 d_1 so q_2 = q_1^2
  const auto q = propagation_gains(geo, 0.6, 827.67);
  CHECK(std::abs(q[1] - q[0] * q[0]) < 1e-15);

  for (const auto& x : q) {
    CHECK(std::abs(x) > 0.0);
    CHECK(std::abs(x) < 1.0);
  }
  CHECK_THROWS_AS(propagation_gains(geo, 0.0, 827.67), std::invalid_argument);
}

TEST_CASE("broadside steering vector is all ones") {
  const auto geo = build_dma_geometry(4, 8, 28e9);
  const auto g = steering_vector(geo, {0.0, M_PI / 2.0});
  for (const auto& x : g) {
    CHECK(x.real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(x.imag()) < 1e-12);
  }
}

TEST_CASE("steering vector entries are unit modulus, squared norm N_r") {
  const auto geo = build_dma_geometry(4, 8, 28e9);
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = steering_vector(
        geo, {rng.uniform(-M_PI, M_PI), rng.uniform(0.0, M_PI)});
    for (const auto& x : g) CHECK(std::abs(x) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(norm2(g) == doctest::Approx(32.0).epsilon(1e-14));
  }
}

TEST_CASE("endfire phase difference across a 2-element row") {
  const auto geo = build_dma_geometry(1, 2, 28e9);
  const auto g = steering_vector(geo, {M_PI / 2.0, M_PI / 2.0});
  const double diff = std::arg(g[1] / g[0]);
  const double expected =
      std::remainder(2.0 * M_PI * geo.element_spacing / geo.wavelength, 2.0 * M_PI);
  CHECK(diff == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("waveguide-local and global accessors agree") {
  const auto geo = build_dma_geometry(3, 5, 28e9);
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 5; ++j) {
      const int idx = geo.global_index(i, j);
      CHECK(geo.waveguide_of(idx) == i - 1);
      CHECK(geo.feed_distances[idx] == doctest::Approx(j * geo.element_spacing));
      CHECK(geo.positions[idx].y == doctest::Approx(j * geo.element_spacing));
      CHECK(geo.positions[idx].z == doctest::Approx((i - 1) * geo.waveguide_spacing));
    }
  }
}
