#include "fsae/healpix.hpp"

#include <algorithm>
#include <cmath>

namespace fsae::healpix {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kHalfPi = kPi / 2.0;

// Base-face row/column offsets of the rhombic faces (Gorski et al. 2005).
constexpr int jrll[12] = {2, 2, 2, 2, 3, 3, 3, 3, 4, 4, 4, 4};
constexpr int jpll[12] = {1, 3, 5, 7, 0, 2, 4, 6, 1, 3, 5, 7};

std::uint64_t spread_bits(std::uint64_t v) {
  v &= 0xffffffffull;
  v = (v | (v << 16)) & 0x0000ffff0000ffffull;
  v = (v | (v << 8)) & 0x00ff00ff00ff00ffull;
  v = (v | (v << 4)) & 0x0f0f0f0f0f0f0f0full;
  v = (v | (v << 2)) & 0x3333333333333333ull;
  v = (v | (v << 1)) & 0x5555555555555555ull;
  return v;
}

std::uint64_t compress_bits(std::uint64_t v) {
  v &= 0x5555555555555555ull;
  v = (v | (v >> 1)) & 0x3333333333333333ull;
  v = (v | (v >> 2)) & 0x0f0f0f0f0f0f0f0full;
  v = (v | (v >> 4)) & 0x00ff00ff00ff00ffull;
  v = (v | (v >> 8)) & 0x0000ffff0000ffffull;
  v = (v | (v >> 16)) & 0x00000000ffffffffull;
  return v;
}

void nest2xyf(std::int64_t pix, int z, std::int64_t& ix, std::int64_t& iy, int& face) {
  const std::int64_t npface = nside(z) * nside(z);
  face = int(pix / npface);
  const std::uint64_t p = std::uint64_t(pix & (npface - 1));
  ix = std::int64_t(compress_bits(p));
  iy = std::int64_t(compress_bits(p >> 1));
}

std::int64_t xyf2nest(std::int64_t ix, std::int64_t iy, int face, int z) {
  return (std::int64_t(face) << (2 * z)) +
         std::int64_t(spread_bits(std::uint64_t(ix)) | (spread_bits(std::uint64_t(iy)) << 1));
}

}  // namespace

SphericalPoint pix2ang(std::int64_t pix, int z) {
  if (pix < 0 || pix >= npix(z)) throw std::invalid_argument("healpix: pixel out of range");
  const std::int64_t ns = nside(z);
  std::int64_t ix, iy;
  int face;
  nest2xyf(pix, z, ix, iy, face);

  const std::int64_t jr = jrll[face] * ns - ix - iy - 1;  // ring counted from north
  std::int64_t nr;
  double cz;
  int kshift;
  if (jr < ns) {  // north polar cap
    nr = jr;
    cz = 1.0 - double(nr) * double(nr) / (3.0 * double(ns) * double(ns));
    kshift = 0;
  } else if (jr > 3 * ns) {  // south polar cap
    nr = 4 * ns - jr;
    cz = double(nr) * double(nr) / (3.0 * double(ns) * double(ns)) - 1.0;
    kshift = 0;
  } else {  // equatorial belt
    nr = ns;
    cz = double(2 * ns - jr) * 2.0 / (3.0 * double(ns));
    kshift = int((jr - ns) & 1);
  }

  std::int64_t jp = (jpll[face] * nr + ix - iy + 1 + kshift) / 2;
  if (jp > 4 * nr) jp -= 4 * nr;
  if (jp < 1) jp += 4 * nr;

  SphericalPoint pt;
  pt.theta = std::acos(std::clamp(cz, -1.0, 1.0));
  pt.phi = (double(jp) - (kshift + 1) * 0.5) * (kHalfPi / double(nr));
  if (pt.phi < 0) pt.phi += 2.0 * kPi;
  if (pt.phi >= 2.0 * kPi) pt.phi -= 2.0 * kPi;
  return pt;
}

std::int64_t ang2pix(int z, const SphericalPoint& pt) {
  if (!(pt.theta >= 0.0 && pt.theta <= kPi)) throw std::invalid_argument("healpix: theta out of range");
  if (!(pt.phi >= 0.0 && pt.phi < 2.0 * kPi)) throw std::invalid_argument("healpix: phi out of range");
  const std::int64_t ns = nside(z);
  const double cz = std::cos(pt.theta);
  const double za = std::abs(cz);
  const double tt = std::fmod(pt.phi / kHalfPi, 4.0);  // in [0,4)

  std::int64_t ix, iy;
  int face;
  if (za <= 2.0 / 3.0) {  // equatorial belt
    const double temp1 = double(ns) * (0.5 + tt);
    const double temp2 = double(ns) * (cz * 0.75);
    const std::int64_t jp = std::int64_t(std::floor(temp1 - temp2));
    const std::int64_t jm = std::int64_t(std::floor(temp1 + temp2));
    const std::int64_t ifp = jp >> z;
    const std::int64_t ifm = jm >> z;
    if (ifp == ifm)
      face = int(ifp | 4);
    else if (ifp < ifm)
      face = int(ifp);
    else
      face = int(ifm + 8);
    ix = jm & (ns - 1);
    iy = ns - (jp & (ns - 1)) - 1;
  } else {  // polar caps
    const int ntt = std::min(3, int(tt));
    const double tp = tt - ntt;
    const double tmp = double(ns) * std::sqrt(3.0 * (1.0 - za));
    std::int64_t jp = std::int64_t(std::floor(tp * tmp));
    std::int64_t jm = std::int64_t(std::floor((1.0 - tp) * tmp));
    jp = std::min(jp, ns - 1);
    jm = std::min(jm, ns - 1);
    if (cz >= 0) {
      face = ntt;
      ix = ns - jm - 1;
      iy = ns - jp - 1;
    } else {
      face = ntt + 8;
      ix = jp;
      iy = jm;
    }
  }
  return xyf2nest(ix, iy, face, z);
}

double great_circle(const SphericalPoint& a, const SphericalPoint& b) {
  // haversine on colatitudes: lat = pi/2 - theta
  const double dlat = a.theta - b.theta;
  const double dphi = a.phi - b.phi;
  const double sl = std::sin(0.5 * dlat);
  const double sp = std::sin(0.5 * dphi);
  const double h = std::min(1.0, sl * sl + std::sin(a.theta) * std::sin(b.theta) * sp * sp);
  return 2.0 * std::atan2(std::sqrt(h), std::sqrt(1.0 - h));
}

}  // namespace fsae::healpix
