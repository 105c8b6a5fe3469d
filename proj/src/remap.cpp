#include "fsae/remap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fsae/threads.hpp"

namespace fsae::remap {

namespace {

// Indices of the `count` entries of `axis` closest to x (axis strictly monotone).
void nearest_axis_indices(const std::vector<double>& axis, double x, int count,
                          bool descending, std::vector<size_t>& out) {
  out.clear();
  const int n = int(axis.size());
  auto key = [&](int i) { return std::abs(axis[size_t(i)] - x); };
  // locate insertion point
  int lo = 0, hi = n;
  while (lo < hi) {
    const int mid = (lo + hi) / 2;
    const bool before = descending ? (axis[size_t(mid)] > x) : (axis[size_t(mid)] < x);
    if (before)
      lo = mid + 1;
    else
      hi = mid;
  }
  int a = lo - 1, b = lo;
  while (int(out.size()) < std::min(count, n)) {
    if (a < 0)
      out.push_back(size_t(b++));
    else if (b >= n)
      out.push_back(size_t(a--));
    else if (key(a) <= key(b))
      out.push_back(size_t(a--));
    else
      out.push_back(size_t(b++));
  }
}

// Nearest longitude columns with wraparound.
void nearest_lon_indices(const std::vector<double>& lons, double lon, int count,
                         std::vector<size_t>& out) {
  out.clear();
  const int n = int(lons.size());
  auto circ = [&](int i) {
    double d = std::abs(lons[size_t(i)] - lon);
    d = std::fmod(d, 360.0);
    return std::min(d, 360.0 - d);
  };
  // small n at desk scale: partial sort by circular distance
  std::vector<int> idx(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) idx[size_t(i)] = i;
  const int keep = std::min(count, n);
  std::partial_sort(idx.begin(), idx.begin() + keep, idx.end(),
                    [&](int a, int b) { return circ(a) < circ(b); });
  for (int i = 0; i < keep; ++i) out.push_back(size_t(idx[size_t(i)]));
}

}  // namespace

Field remap_to_healpix(const metrics::LatLonGrid& grid, int z, const RemapOptions& opt) {
  grid.validate();
  if (opt.k < 1) throw std::invalid_argument("remap: k must be >= 1");
  for (double v : grid.values)
    if (!std::isfinite(v)) throw std::invalid_argument("remap: non-finite input value");

  const std::int64_t np = healpix::npix(z);
  Field out;
  out.z = z;
  out.values.assign(size_t(np), 0.0);

  const int rows = 4, cols = 8;
  threads::parallel_for(0, np, [&](std::int64_t p, int) {
    const auto c = healpix::pix2ang(p, z);
    const double lat = 90.0 - c.theta * 180.0 / 3.14159265358979323846;
    const double lon = c.phi * 180.0 / 3.14159265358979323846;

    thread_local std::vector<size_t> lat_idx, lon_idx;
    nearest_axis_indices(grid.latitudes, lat, rows, /*descending=*/true, lat_idx);
    nearest_lon_indices(grid.longitudes, lon, cols, lon_idx);

    struct Cand {
      double d;
      double v;
    };
    thread_local std::vector<Cand> cand;
    cand.clear();
    for (size_t i : lat_idx)
      for (size_t j : lon_idx) {
        const auto pt = healpix::from_latlon_deg(grid.latitudes[i], grid.longitudes[j]);
        cand.push_back({healpix::great_circle(c, pt), grid.at(i, j)});
      }
    const int k = std::min<int>(opt.k, int(cand.size()));
    std::partial_sort(cand.begin(), cand.begin() + k, cand.end(),
                      [](const Cand& a, const Cand& b) { return a.d < b.d; });

    if (cand[0].d < opt.eps_exact) {
      out.values[size_t(p)] = cand[0].v;
      return;
    }
    double wsum = 0.0, vsum = 0.0;
    for (int i = 0; i < k; ++i) {
      const double w = 1.0 / std::pow(cand[size_t(i)].d, opt.power);
      wsum += w;
      vsum += w * cand[size_t(i)].v;
    }
    out.values[size_t(p)] = vsum / wsum;
  });
  return out;
}

}  // namespace fsae::remap
