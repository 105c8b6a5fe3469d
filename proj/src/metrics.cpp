#include "fsae/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "fsae/sphharm.hpp"
#include "fsae/threads.hpp"

namespace fsae::metrics {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void LatLonGrid::validate() const {
  if (latitudes.empty() || longitudes.empty())
    throw std::invalid_argument("latlon grid: empty axis");
  if (values.size() != n_lat() * n_lon())
    throw std::invalid_argument("latlon grid: value shape mismatch");
  for (size_t i = 1; i < latitudes.size(); ++i)
    if (latitudes[i] >= latitudes[i - 1])
      throw std::invalid_argument("latlon grid: latitudes must be strictly descending");
  for (size_t j = 1; j < longitudes.size(); ++j)
    if (longitudes[j] <= longitudes[j - 1])
      throw std::invalid_argument("latlon grid: longitudes must be strictly ascending");
}

double rmse_latweighted(const std::vector<LatLonGrid>& truth,
                        const std::vector<LatLonGrid>& approx) {
  if (truth.size() != approx.size() || truth.empty())
    throw std::invalid_argument("rmse_latweighted: series size mismatch");
  double num = 0.0, den = 0.0;
  for (size_t t = 0; t < truth.size(); ++t) {
    const auto& x = truth[t];
    const auto& y = approx[t];
    x.validate();
    if (y.n_lat() != x.n_lat() || y.n_lon() != x.n_lon())
      throw std::invalid_argument("rmse_latweighted: grid shape mismatch");
    for (size_t i = 0; i < x.n_lat(); ++i) {
      const double w = std::cos(x.latitudes[i] * kPi / 180.0);
      for (size_t j = 0; j < x.n_lon(); ++j) {
        const double d = x.at(i, j) - y.at(i, j);
        num += w * d * d;
        den += w;
      }
    }
  }
  return std::sqrt(num / den);
}

double rmse_healpix(const std::vector<Field>& truth, const std::vector<Field>& approx) {
  if (truth.size() != approx.size() || truth.empty())
    throw std::invalid_argument("rmse_healpix: series size mismatch");
  double num = 0.0;
  std::int64_t count = 0;
  for (size_t t = 0; t < truth.size(); ++t) {
    if (truth[t].z != approx[t].z)
      throw std::invalid_argument("rmse_healpix: level mismatch");
    for (size_t i = 0; i < truth[t].values.size(); ++i) {
      const double d = truth[t].values[i] - approx[t].values[i];
      num += d * d;
      ++count;
    }
  }
  return std::sqrt(num / double(count));
}

double psnr_from(double range, double rmse) {
  if (range <= 0.0) throw std::invalid_argument("psnr: degenerate ground-truth range");
  if (rmse == 0.0) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(range / rmse);
}

double psnr(const std::vector<Field>& truth, const std::vector<Field>& approx) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& f : truth)
    for (double v : f.values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  return psnr_from(hi - lo, rmse_healpix(truth, approx));
}

std::vector<double> angular_power_spectrum(const Field& f, int l_max) {
  f.check_shape();
  const std::int64_t ns = healpix::nside(f.z);
  if (l_max > 3 * ns - 1)
    throw std::invalid_argument("spectrum: l_max too large for this level");
  const std::int64_t np = healpix::npix(f.z);
  const int nb = sphharm::basis_count(l_max);
  const double w = 4.0 * kPi / double(np);

  std::vector<double> alm(size_t(nb), 0.0);
  const int nthreads = threads::budget();
  std::vector<std::vector<double>> partial(size_t(nthreads), std::vector<double>(size_t(nb), 0.0));
  threads::parallel_for(0, np, [&](std::int64_t p, int tid) {
    thread_local std::vector<double> row;
    const auto pt = healpix::pix2ang(p, f.z);
    sphharm::eval_point(l_max, pt.theta, pt.phi, row);
    auto& acc = partial[size_t(tid)];
    const double v = w * f.values[size_t(p)];
    for (int b = 0; b < nb; ++b) acc[size_t(b)] += v * row[size_t(b)];
  });
  for (const auto& acc : partial)
    for (int b = 0; b < nb; ++b) alm[size_t(b)] += acc[size_t(b)];

  std::vector<double> cl(size_t(l_max + 1), 0.0);
  for (int l = 0; l <= l_max; ++l) {
    double s = 0.0;
    for (int m = -l; m <= l; ++m) {
      const double a = alm[size_t(sphharm::pack(l, m))];
      s += a * a;
    }
    cl[size_t(l)] = s / double(2 * l + 1);
  }
  return cl;
}

SpectrumResult spectrum_series(const std::vector<Field>& series, int l_max,
                               bool keep_per_timestep) {
  if (series.empty()) throw std::invalid_argument("spectrum: empty series");
  SpectrumResult res;
  res.ell.resize(size_t(l_max + 1));
  for (int l = 0; l <= l_max; ++l) res.ell[size_t(l)] = l;
  res.c_mean.assign(size_t(l_max + 1), 0.0);
  res.c_std.assign(size_t(l_max + 1), 0.0);
  std::vector<std::vector<double>> all;
  all.reserve(series.size());
  for (const auto& f : series) all.push_back(angular_power_spectrum(f, l_max));
  const double n = double(all.size());
  for (int l = 0; l <= l_max; ++l) {
    double m = 0.0;
    for (const auto& cl : all) m += cl[size_t(l)];
    m /= n;
    double v = 0.0;
    for (const auto& cl : all) v += (cl[size_t(l)] - m) * (cl[size_t(l)] - m);
    res.c_mean[size_t(l)] = m;
    res.c_std[size_t(l)] = all.size() > 1 ? std::sqrt(v / (n - 1.0)) : 0.0;
  }
  if (keep_per_timestep) res.per_timestep = std::move(all);
  return res;
}

}  // namespace fsae::metrics
