#pragma once

#include <map>
#include <set>
#include <vector>

#include "fsae/field.hpp"

namespace fsae::multiscale {

// Coarse base plus a ladder of per-level residuals. Residual levels are
// strictly finer than the base and keyed ascending.
struct MultiScaleState {
  Field base;
  std::map<int, Field> residuals;

  int z_max() const {
    if (residuals.empty()) return base.z;
    return residuals.rbegin()->first;
  }
};

// Arithmetic mean over each coarse pixel's 4^(f.z - z_target) descendants.
Field downsample_avg(const Field& f, int z_target);

// Every descendant inherits its ancestor's value.
Field broadcast(const Field& f, int z_target);

// Subtract from each value the mean of its sibling group (common ancestor at
// group_level). Output group means are exactly zero.
Field scale_conserve(const Field& r, int group_level);

MultiScaleState decompose(const Field& x, int z_c, const std::set<int>& z_r);

// broadcast(base) + sum of broadcast residuals, ascending level order.
Field reconstruct(const MultiScaleState& s);

// Listed residual fields replaced by zeros; structure unchanged.
MultiScaleState mask_residuals(const MultiScaleState& s, const std::set<int>& levels);

}  // namespace fsae::multiscale
