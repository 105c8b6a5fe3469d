#pragma once

#include <cstdint>
#include <stdexcept>

namespace fsae::healpix {

// HEALPix zoom level z: N_side = 2^z, N_pix = 12*4^z. Nested ordering only.
inline constexpr int kMaxZoom = 29;

inline std::int64_t nside(int z) {
  if (z < 0 || z > kMaxZoom) throw std::invalid_argument("healpix: zoom out of range");
  return std::int64_t{1} << z;
}

inline std::int64_t npix(int z) { return 12 * (nside(z) * nside(z)); }

inline std::int64_t parent(std::int64_t pix, int z) {
  if (z < 1) throw std::invalid_argument("healpix: z=0 pixel has no parent");
  if (pix < 0 || pix >= npix(z)) throw std::invalid_argument("healpix: pixel out of range");
  return pix >> 2;
}

// Children of pix at level z, returned as the first child; children are
// {4*pix .. 4*pix+3} at z+1.
inline std::int64_t first_child(std::int64_t pix) { return pix << 2; }

// Ancestor of pix after climbing `levels` steps.
inline std::int64_t ancestor(std::int64_t pix, int levels) { return pix >> (2 * levels); }

struct SphericalPoint {
  double theta = 0.0;  // colatitude, [0, pi]
  double phi = 0.0;    // longitude, [0, 2*pi)
};

SphericalPoint pix2ang(std::int64_t pix, int z);
std::int64_t ang2pix(int z, const SphericalPoint& pt);

// Great-circle distance in radians, haversine-stable near 0 and pi.
double great_circle(const SphericalPoint& a, const SphericalPoint& b);

inline SphericalPoint from_latlon_deg(double lat_deg, double lon_deg) {
  constexpr double d2r = 3.14159265358979323846 / 180.0;
  double phi = lon_deg * d2r;
  const double twopi = 2.0 * 3.14159265358979323846;
  phi -= twopi * std::int64_t(phi / twopi);
  if (phi < 0) phi += twopi;
  return {(90.0 - lat_deg) * d2r, phi};
}

}  // namespace fsae::healpix
