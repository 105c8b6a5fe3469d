#pragma once

#include <span>
#include <string>
#include <vector>

namespace fsae::preprocess {

// Percentile bounds fitted on training data only, physical units.
struct NormStats {
  std::string variable;
  double p01 = 0.0;
  double p99 = 1.0;
};

// 1st/99th percentiles via sorted-order linear interpolation between closest
// ranks. Requires at least two distinct finite values.
NormStats fit_percentiles(std::span<const double> training_values,
                          const std::string& variable = {});

inline double scale(double x, const NormStats& s) { return (x - s.p01) / (s.p99 - s.p01); }
inline double unscale(double y, const NormStats& s) { return y * (s.p99 - s.p01) + s.p01; }

void scale_inplace(std::vector<double>& v, const NormStats& s);
void unscale_inplace(std::vector<double>& v, const NormStats& s);

}  // namespace fsae::preprocess
