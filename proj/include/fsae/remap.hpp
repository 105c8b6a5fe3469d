#pragma once

#include "fsae/field.hpp"
#include "fsae/metrics.hpp"

namespace fsae::remap {

struct RemapOptions {
  int k = 4;                  // neighbor count (bilinear-style support)
  double power = 1.0;         // inverse-distance exponent
  double eps_exact = 1e-12;   // radians; closer than this returns the sample verbatim
};

// Normalized inverse-distance weighting of the k great-circle-nearest grid
// samples onto every HEALPix pixel center at level z.
Field remap_to_healpix(const metrics::LatLonGrid& grid, int z,
                       const RemapOptions& opt = {});

}  // namespace fsae::remap
