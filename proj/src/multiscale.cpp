#include "fsae/multiscale.hpp"

#include <stdexcept>

namespace fsae::multiscale {

Field downsample_avg(const Field& f, int z_target) {
  f.check_shape();
  if (z_target > f.z) throw std::invalid_argument("downsample_avg: target finer than input");
  const int dz = f.z - z_target;
  const std::int64_t group = std::int64_t{1} << (2 * dz);
  Field out = f;
  out.z = z_target;
  out.values.assign(size_t(healpix::npix(z_target)), 0.0);
  for (std::int64_t c = 0; c < std::int64_t(out.values.size()); ++c) {
    double s = 0.0;
    const std::int64_t base = c * group;
    for (std::int64_t i = 0; i < group; ++i) s += f.values[size_t(base + i)];
    out.values[size_t(c)] = s / double(group);
  }
  return out;
}

Field broadcast(const Field& f, int z_target) {
  f.check_shape();
  if (z_target < f.z) throw std::invalid_argument("broadcast: target coarser than input");
  const int dz = z_target - f.z;
  Field out = f;
  out.z = z_target;
  out.values.resize(size_t(healpix::npix(z_target)));
  for (std::int64_t p = std::int64_t(out.values.size()) - 1; p >= 0; --p)
    out.values[size_t(p)] = f.values[size_t(p >> (2 * dz))];
  return out;
}

Field scale_conserve(const Field& r, int group_level) {
  r.check_shape();
  if (group_level >= r.z) throw std::invalid_argument("scale_conserve: group level must be coarser");
  const std::int64_t group = std::int64_t{1} << (2 * (r.z - group_level));
  Field out = r;
  for (std::int64_t g = 0; g < healpix::npix(group_level); ++g) {
    double s = 0.0;
    for (std::int64_t i = 0; i < group; ++i) s += r.values[size_t(g * group + i)];
    const double m = s / double(group);
    for (std::int64_t i = 0; i < group; ++i) out.values[size_t(g * group + i)] -= m;
  }
  return out;
}

MultiScaleState decompose(const Field& x, int z_c, const std::set<int>& z_r) {
  x.check_shape();
  if (z_r.empty()) throw std::invalid_argument("decompose: empty residual level set");
  if (z_c >= *z_r.begin()) throw std::invalid_argument("decompose: base level must be coarser than residuals");
  if (*z_r.rbegin() != x.z) throw std::invalid_argument("decompose: max residual level must equal input level");
  for (auto it = z_r.begin(); std::next(it) != z_r.end(); ++it)
    if (*std::next(it) != *it + 1)
      throw std::invalid_argument("decompose: residual levels must be contiguous");

  MultiScaleState s;
  s.base = downsample_avg(x, z_c);
  int prev = z_c;
  for (int z : z_r) {
    Field avg_z = downsample_avg(x, z);
    const Field coarse = broadcast(downsample_avg(x, prev), z);
    for (size_t i = 0; i < avg_z.values.size(); ++i) avg_z.values[i] -= coarse.values[i];
    // The lowest residual spans the z_c -> z_0 gap; force exact zero group means.
    if (prev == z_c && z - z_c > 1) avg_z = scale_conserve(avg_z, z_c);
    s.residuals.emplace(z, std::move(avg_z));
    prev = z;
  }
  return s;
}

Field reconstruct(const MultiScaleState& s) {
  const int z_top = s.z_max();
  Field out = broadcast(s.base, z_top);
  for (const auto& [z, r] : s.residuals) {
    const Field fine = broadcast(r, z_top);
    for (size_t i = 0; i < out.values.size(); ++i) out.values[i] += fine.values[i];
  }
  out.variable = s.base.variable;
  out.units = s.base.units;
  out.timestamp = s.base.timestamp;
  return out;
}

MultiScaleState mask_residuals(const MultiScaleState& s, const std::set<int>& levels) {
  MultiScaleState out = s;
  for (int z : levels) {
    auto it = out.residuals.find(z);
    if (it == out.residuals.end())
      throw std::invalid_argument("mask_residuals: level not present in state");
    std::fill(it->second.values.begin(), it->second.values.end(), 0.0);
  }
  return out;
}

}  // namespace fsae::multiscale
