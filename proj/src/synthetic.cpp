#include "fsae/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "fsae/healpix.hpp"
#include "fsae/sphharm.hpp"

namespace fsae::synth {

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// One coefficient vector per (seed, variable, tag): a_lm ~ N(0, C_l),
// C_l = (l+1)^-slope, l=0 suppressed so the mean stays near `offset`.
std::vector<double> draw_coeffs(const SynthConfig& cfg, const std::string& variable,
                                std::uint64_t tag) {
  std::mt19937_64 rng(cfg.seed ^ fnv1a(variable) ^ (tag * 0x9e3779b97f4a7c15ull));
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int n = (cfg.l_max + 1) * (cfg.l_max + 1);
  std::vector<double> a(size_t(n), 0.0);
  for (int l = 1; l <= cfg.l_max; ++l) {
    const double sigma = std::pow(double(l + 1), -0.5 * cfg.slope);
    for (int m = -l; m <= l; ++m) a[size_t(sphharm::pack(l, m))] = sigma * gauss(rng);
  }
  return a;
}

}  // namespace

Field generate(const SynthConfig& cfg, const std::string& variable,
               std::int64_t timestamp) {
  const auto a_static = draw_coeffs(cfg, variable, 1);
  const auto a_season = draw_coeffs(cfg, variable, 2);
  const double phase = 2.0 * std::numbers::pi * double(timestamp) / 365.25;
  const double season = std::cos(phase);

  const std::int64_t n = healpix::npix(cfg.z);
  Field f;
  f.z = cfg.z;
  f.variable = variable;
  f.timestamp = timestamp;
  f.values.assign(size_t(n), 0.0);

  const int n_coef = (cfg.l_max + 1) * (cfg.l_max + 1);
  std::vector<double> y(static_cast<size_t>(n_coef));
  for (std::int64_t p = 0; p < n; ++p) {
    const auto pt = healpix::pix2ang(p, cfg.z);
    sphharm::eval_point(cfg.l_max, pt.theta, pt.phi, y);
    double acc = 0.0;
    for (int k = 0; k < n_coef; ++k)
      acc += (a_static[size_t(k)] + cfg.annual_frac * season * a_season[size_t(k)]) *
             y[size_t(k)];
    f.values[size_t(p)] = cfg.offset + cfg.amplitude * acc;
  }
  return f;
}

std::vector<Field> generate_series(const SynthConfig& cfg, const std::string& variable,
                                   std::int64_t timestamp0, int n_days) {
  std::vector<Field> out;
  out.reserve(size_t(n_days));
  for (int d = 0; d < n_days; ++d)
    out.push_back(generate(cfg, variable, timestamp0 + d));
  return out;
}

}  // namespace fsae::synth
