#pragma once

#include <vector>

#include "fsae/healpix.hpp"

namespace fsae::sphharm {

// Number of real basis functions with degree <= l_max.
inline int basis_count(int l_max) { return (l_max + 1) * (l_max + 1); }

// Real orthonormal spherical harmonics with Condon-Shortley phase, packed as
// (l,m) -> l*l + l + m for m in [-l, l]. Negative m carries sin(|m| phi),
// positive m carries cos(m phi).
// Evaluates all basis functions up to l_max at one point; out has size
// basis_count(l_max).
void eval_point(int l_max, double theta, double phi, std::vector<double>& out);

// Basis matrix over all pixel centers of a HEALPix level: npix(z) rows,
// basis_count(l_max) columns, row-major.
std::vector<double> basis_matrix(int z, int l_max);

inline int pack(int l, int m) { return l * l + l + m; }

}  // namespace fsae::sphharm
