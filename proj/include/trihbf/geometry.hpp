#pragma once

#include <cstdint>

#include "trihbf/types.hpp"

namespace trihbf {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// Planar array in the y-z plane. For the DMA, waveguides run along y and are
// stacked along z; element j of waveguide i has global index
// (i-1)*elements_per_waveguide + j (1-based i, j).
struct ArrayGeometry {
  int n_waveguides = 0;
  int elements_per_waveguide = 0;
  double waveguide_spacing = 0.0;  // meters, along z
  double element_spacing = 0.0;    // meters, along y
  double wavelength = 0.0;         // meters
  std::vector<Vec3> positions;
  std::vector<double> feed_distances;  // meters, per element

  int total_elements() const { return n_waveguides * elements_per_waveguide; }

  // 0-based waveguide index of 0-based global element index
  int waveguide_of(int j) const { return j / elements_per_waveguide; }

  // 0-based global index from 1-based (waveguide, local) pair
  int global_index(int waveguide, int local) const {
    return (waveguide - 1) * elements_per_waveguide + (local - 1);
  }
};

struct TargetDirection {
  double azimuth = 0.0;    // theta, radians
  double elevation = 0.0;  // phi, radians
};

// Waveguides at lambda/2 along z, elements at lambda/5 along y; feed distance
// of the j-th element of a waveguide is j*lambda/5 (1-based), so all feed
// distances are strictly positive.
ArrayGeometry build_dma_geometry(int n_waveguides, int elements_per_waveguide,
                                 double carrier_frequency_hz);

// Baseline rows x cols grid with a single spacing on both axes. Rows map to
// the waveguide axis so the block indexing convention carries over.
ArrayGeometry build_planar_geometry(int rows, int cols, double spacing,
                                    double wavelength);

// q_j = exp(-d_j * (attenuation + i * wavenumber))
CVec propagation_gains(const ArrayGeometry& geometry,
                       double attenuation_per_meter,
                       double wavenumber_per_meter);

// g_j = exp(i * (2pi/lambda) * <p_j, u>) with
// u = (sin(phi)cos(theta), sin(phi)sin(theta), cos(phi)).
// (theta=0, phi=pi/2) is broadside and yields the all-ones vector.
CVec steering_vector(const ArrayGeometry& geometry, const TargetDirection& dir);

}  // namespace trihbf
