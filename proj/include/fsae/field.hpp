#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fsae/healpix.hpp"

namespace fsae {

// One variable on one HEALPix level, nested ordering, physical units.
struct Field {
  int z = 0;
  std::vector<double> values;
  std::string variable;
  std::string units;
  std::int64_t timestamp = 0;  // days since 1940-01-01

  Field() = default;
  Field(int zoom, std::vector<double> vals) : z(zoom), values(std::move(vals)) {
    check_shape();
  }
  static Field constant(int zoom, double c) {
    return Field(zoom, std::vector<double>(size_t(healpix::npix(zoom)), c));
  }
  void check_shape() const {
    if (std::int64_t(values.size()) != healpix::npix(z))
      throw std::invalid_argument("field: value count does not match npix(z)");
  }
  double mean() const {
    double s = 0.0;
    for (double v : values) s += v;
    return values.empty() ? 0.0 : s / double(values.size());
  }
};

}  // namespace fsae
