#pragma once

#include <vector>

#include "fsae/field.hpp"

namespace fsae::metrics {

// Regular latitude-longitude grid, latitudes descending, longitudes ascending,
// both in degrees; values row-major [lat][lon].
struct LatLonGrid {
  std::vector<double> latitudes;
  std::vector<double> longitudes;
  std::vector<double> values;

  size_t n_lat() const { return latitudes.size(); }
  size_t n_lon() const { return longitudes.size(); }
  double at(size_t i, size_t j) const { return values[i * n_lon() + j]; }
  void validate() const;
};

// cos(latitude)-weighted RMSE over a series of grids, physical units.
double rmse_latweighted(const std::vector<LatLonGrid>& truth,
                        const std::vector<LatLonGrid>& approx);

// Plain RMSE over pixels and time on the equal-area grid.
double rmse_healpix(const std::vector<Field>& truth, const std::vector<Field>& approx);

// 20*log10(range / rmse); range = max - min of the ground truth over the
// evaluation set. Zero RMSE reports +infinity.
double psnr(const std::vector<Field>& truth, const std::vector<Field>& approx);
double psnr_from(double range, double rmse);

struct SpectrumResult {
  std::vector<double> ell;      // 0..l_max
  std::vector<double> c_mean;   // field-units^2
  std::vector<double> c_std;    // across timesteps (0 for a single field)
  std::vector<std::vector<double>> per_timestep;
};

// Direct-quadrature angular power spectrum, equal-area weight 4*pi/N_pix.
std::vector<double> angular_power_spectrum(const Field& f, int l_max);

SpectrumResult spectrum_series(const std::vector<Field>& series, int l_max,
                               bool keep_per_timestep = false);

}  // namespace fsae::metrics
