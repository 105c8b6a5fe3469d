#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "fsae/healpix.hpp"

using namespace fsae::healpix;
constexpr double kPi = std::numbers::pi;

namespace {

// Independent pixel-center oracle from the ring formulas: polar caps at
// cos(theta) = 1 - i^2/(3 nside^2), equatorial belt at 4/3 - 2i/(3 nside)
// with the half-step longitude stagger. Returns the unordered multiset of
// centers as (cos theta, phi) pairs.
std::vector<std::pair<double, double>> ring_centers(int z) {
  const auto ns = double(nside(z));
  std::vector<std::pair<double, double>> out;
  for (std::int64_t i = 1; i < nside(z); ++i) {  // north cap
    const double ct = 1.0 - double(i * i) / (3.0 * ns * ns);
    for (std::int64_t j = 1; j <= 4 * i; ++j)
      out.emplace_back(ct, kPi / (2.0 * double(i)) * (double(j) - 0.5));
  }
  for (std::int64_t i = nside(z); i <= 3 * nside(z); ++i) {  // belt
    const double ct = 4.0 / 3.0 - 2.0 * double(i) / (3.0 * ns);
    const double s = double((i - nside(z) + 1) % 2);
    for (std::int64_t j = 1; j <= 4 * nside(z); ++j) {
      double phi = kPi / (2.0 * ns) * (double(j) - s / 2.0);
      if (phi >= 2.0 * kPi) phi -= 2.0 * kPi;
      out.emplace_back(ct, phi);
    }
  }
  for (std::int64_t i = nside(z) - 1; i >= 1; --i) {  // south cap
    const double ct = -(1.0 - double(i * i) / (3.0 * ns * ns));
    for (std::int64_t j = 1; j <= 4 * i; ++j)
      out.emplace_back(ct, kPi / (2.0 * double(i)) * (double(j) - 0.5));
  }
  return out;
}

void sort_centers(std::vector<std::pair<double, double>>& v) {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    if (std::abs(a.first - b.first) > 1e-9) return a.first < b.first;
    return a.second < b.second;
  });
}

}  // namespace

TEST_CASE("npix and nside laws") {
  CHECK(npix(0) == 12);
  CHECK(npix(1) == 48);
  CHECK(npix(2) == 192);
  CHECK(npix(8) == 786432);
  for (int z = 0; z <= 10; ++z) CHECK(npix(z) == 12 * (std::int64_t{1} << (2 * z)));
  CHECK_THROWS(nside(-1));
  CHECK_THROWS(nside(kMaxZoom + 1));
}

TEST_CASE("parent/child/ancestor laws exhaustive z<=4") {
  for (int z = 1; z <= 4; ++z) {
    for (std::int64_t p = 0; p < npix(z); ++p) {
      const std::int64_t par = parent(p, z);
      CHECK(par >= 0);
      CHECK(par < npix(z - 1));
      CHECK(first_child(par) <= p);
      CHECK(p < first_child(par) + 4);
      CHECK(ancestor(p, 1) == par);
      CHECK(ancestor(p, z) == p >> (2 * z));
    }
  }
  CHECK_THROWS(parent(0, 0));
  CHECK_THROWS(parent(-1, 2));
  CHECK_THROWS(parent(npix(2), 2));
}

TEST_CASE("pix2ang matches the ring-formula center multiset, z<=4") {
  for (int z = 0; z <= 4; ++z) {
    auto expect = ring_centers(z);
    std::vector<std::pair<double, double>> got;
    for (std::int64_t p = 0; p < npix(z); ++p) {
      const auto pt = pix2ang(p, z);
      got.emplace_back(std::cos(pt.theta), pt.phi);
    }
    REQUIRE(got.size() == expect.size());
    sort_centers(expect);
    sort_centers(got);
    for (size_t i = 0; i < got.size(); ++i) {
      CHECK(std::abs(got[i].first - expect[i].first) < 1e-12);
      CHECK(std::abs(got[i].second - expect[i].second) < 1e-12);
    }
  }
}

TEST_CASE("z=0 golden centers") {
  int hi = 0, mid = 0, lo = 0;
  for (std::int64_t p = 0; p < 12; ++p) {
    const double ct = std::cos(pix2ang(p, 0).theta);
    if (std::abs(ct - 2.0 / 3.0) < 1e-12)
      ++hi;
    else if (std::abs(ct) < 1e-12)
      ++mid;
    else if (std::abs(ct + 2.0 / 3.0) < 1e-12)
      ++lo;
  }
  CHECK(hi == 4);
  CHECK(mid == 4);
  CHECK(lo == 4);
}

TEST_CASE("ang2pix inverts pix2ang exhaustively, z<=4") {
  for (int z = 0; z <= 4; ++z)
    for (std::int64_t p = 0; p < npix(z); ++p) CHECK(ang2pix(z, pix2ang(p, z)) == p);
}

TEST_CASE("great-circle distance") {
  SphericalPoint np{0.0, 0.0}, sp{kPi, 0.0}, eq0{kPi / 2, 0.0}, eq90{kPi / 2, kPi / 2};
  CHECK(great_circle(np, sp) == doctest::Approx(kPi));
  CHECK(great_circle(np, eq0) == doctest::Approx(kPi / 2));
  CHECK(great_circle(eq0, eq90) == doctest::Approx(kPi / 2));
  CHECK(great_circle(eq0, eq0) == doctest::Approx(0.0));
  // antipodal stability on the equator
  SphericalPoint eq180{kPi / 2, kPi};
  CHECK(great_circle(eq0, eq180) == doctest::Approx(kPi));
}

TEST_CASE("lat/lon conversion") {
  const auto p = from_latlon_deg(90.0, 0.0);
  CHECK(p.theta == doctest::Approx(0.0));
  const auto q = from_latlon_deg(0.0, -90.0);
  CHECK(q.theta == doctest::Approx(kPi / 2));
  CHECK(q.phi == doctest::Approx(3 * kPi / 2));
}
