#include "trihbf/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace trihbf {

namespace {
constexpr double kSpeedOfLight = 299792458.0;  // m/s
}

ArrayGeometry build_dma_geometry(int n_waveguides, int elements_per_waveguide,
                                 double carrier_frequency_hz) {
  if (n_waveguides < 1 || elements_per_waveguide < 1)
    throw std::invalid_argument("build_dma_geometry: array dimensions must be positive");
  if (carrier_frequency_hz <= 0.0)
    throw std::invalid_argument("build_dma_geometry: carrier frequency must be positive");

  ArrayGeometry geo;
  geo.n_waveguides = n_waveguides;
  geo.elements_per_waveguide = elements_per_waveguide;
  geo.wavelength = kSpeedOfLight / carrier_frequency_hz;
  geo.waveguide_spacing = geo.wavelength / 2.0;
  geo.element_spacing = geo.wavelength / 5.0;

  const int n = geo.total_elements();
  geo.positions.reserve(n);
  geo.feed_distances.reserve(n);
  for (int i = 1; i <= n_waveguides; ++i) {
    for (int j = 1; j <= elements_per_waveguide; ++j) {
      geo.positions.push_back({0.0, j * geo.element_spacing, (i - 1) * geo.waveguide_spacing});
      geo.feed_distances.push_back(j * geo.element_spacing);
    }
  }
  return geo;
}

ArrayGeometry build_planar_geometry(int rows, int cols, double spacing,
                                    double wavelength) {
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("build_planar_geometry: array dimensions must be positive");
  if (spacing <= 0.0 || wavelength <= 0.0)
    throw std::invalid_argument("build_planar_geometry: spacing and wavelength must be positive");

  ArrayGeometry geo;
  geo.n_waveguides = rows;
  geo.elements_per_waveguide = cols;
  geo.wavelength = wavelength;
  geo.waveguide_spacing = spacing;
  geo.element_spacing = spacing;

  const int n = geo.total_elements();
  geo.positions.reserve(n);
  geo.feed_distances.reserve(n);
  for (int i = 1; i <= rows; ++i) {
    for (int j = 1; j <= cols; ++j) {
      geo.positions.push_back({0.0, j * spacing, (i - 1) * spacing});
      geo.feed_distances.push_back(j * spacing);
    }
  }
  return geo;
}

CVec propagation_gains(const ArrayGeometry& geometry,
                       double attenuation_per_meter,
                       double wavenumber_per_meter) {
  if (attenuation_per_meter <= 0.0)
    throw std::invalid_argument("propagation_gains: attenuation must be positive");

  CVec q;
  q.reserve(geometry.feed_distances.size());
  for (double d : geometry.feed_distances) {
    const double mag = std::exp(-d * attenuation_per_meter);
    const double phase = -d * wavenumber_per_meter;
    q.push_back(Complex{mag * std::cos(phase), mag * std::sin(phase)});
  }
  return q;
}

CVec steering_vector(const ArrayGeometry& geometry, const TargetDirection& dir) {
  const double st = std::sin(dir.elevation);
  const Vec3 u{st * std::cos(dir.azimuth), st * std::sin(dir.azimuth),
               std::cos(dir.elevation)};
  const double k = 2.0 * M_PI / geometry.wavelength;

  CVec g;
  g.reserve(geometry.positions.size());
  for (const auto& p : geometry.positions) {
    const double phase = k * (p.x * u.x + p.y * u.y + p.z * u.z);
    g.push_back(Complex{std::cos(phase), std::sin(phase)});
  }
  return g;
}

}  // namespace trihbf
