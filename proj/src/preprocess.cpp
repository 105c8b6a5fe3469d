#include "fsae/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fsae::preprocess {

namespace {

double percentile(const std::vector<double>& sorted, double q) {
  const double pos = q * double(sorted.size() - 1);
  const size_t lo = size_t(pos);
  const size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - double(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

NormStats fit_percentiles(std::span<const double> training_values, const std::string& variable) {
  std::vector<double> v;
  v.reserve(training_values.size());
  for (double x : training_values)
    if (std::isfinite(x)) v.push_back(x);
  if (v.size() < 2) throw std::invalid_argument("fit_percentiles: need at least two finite values");
  std::sort(v.begin(), v.end());
  NormStats s;
  s.variable = variable;
  s.p01 = percentile(v, 0.01);
  s.p99 = percentile(v, 0.99);
  if (!(s.p99 > s.p01)) throw std::invalid_argument("fit_percentiles: degenerate data (p01 == p99)");
  return s;
}

void scale_inplace(std::vector<double>& v, const NormStats& s) {
  for (double& x : v) x = scale(x, s);
}

void unscale_inplace(std::vector<double>& v, const NormStats& s) {
  for (double& x : v) x = unscale(x, s);
}

}  // namespace fsae::preprocess
