#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fsae/metrics.hpp"
#include "fsae/sphharm.hpp"

using namespace fsae;
using namespace fsae::metrics;
constexpr double kPi = std::numbers::pi;

TEST_CASE("latitude-weighted RMSE matches the 2x2 hand oracle") {
  // Rows at 60N (weight 1/2) and 0N (weight 1): squared errors 4,4 and 1,1.
  // RMSE^2 = (0.5*4 + 0.5*4 + 1*1 + 1*1) / (0.5 + 0.5 + 1 + 1) = 2.
  LatLonGrid truth, approx;
  truth.latitudes = {60.0, 0.0};
  truth.longitudes = {0.0, 180.0};
  truth.values = {0.0, 0.0, 0.0, 0.0};
  approx = truth;
  approx.values = {2.0, 2.0, 1.0, 1.0};
  CHECK(rmse_latweighted({truth}, {approx}) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("equal-weight rows reduce to the plain RMSE") {
  LatLonGrid truth, approx;
  truth.latitudes = {30.0, -30.0};
  truth.longitudes = {0.0, 90.0, 180.0, 270.0};
  truth.values.assign(8, 1.0);
  approx = truth;
  for (size_t i = 0; i < 8; ++i) approx.values[i] = 1.0 + double(i % 2);
  CHECK(rmse_latweighted({truth}, {approx}) == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("healpix RMSE over a series") {
  Field a = Field::constant(2, 1.0);
  Field b = Field::constant(2, 4.0);
  CHECK(rmse_healpix({a, a}, {b, a}) == doctest::Approx(3.0 / std::sqrt(2.0)));
}

TEST_CASE("PSNR log law: -6.02 dB per RMSE doubling") {
  const double range = 11.7;
  for (double r : {0.01, 0.5, 3.0}) {
    const double drop = psnr_from(range, r) - psnr_from(range, 2.0 * r);
    CHECK(std::abs(drop - 20.0 * std::log10(2.0)) < 0.01);
  }
  CHECK(std::isinf(psnr_from(range, 0.0)));
}

TEST_CASE("constant field spectrum is a pure monopole") {
  const double c = 2.5;
  Field f = Field::constant(4, c);
  auto cl = angular_power_spectrum(f, 6);
  CHECK(std::abs(cl[0] - 4.0 * kPi * c * c) / (4.0 * kPi * c * c) < 1e-6);
  for (size_t l = 1; l < cl.size(); ++l) CHECK(cl[l] / cl[0] < 1e-6);
}

TEST_CASE("pure Y_3,2 concentrates power in C_3") {
  Field f = Field::constant(4, 0.0);
  for (std::int64_t p = 0; p < healpix::npix(4); ++p) {
    const auto pt = healpix::pix2ang(p, 4);
    std::vector<double> y;
    sphharm::eval_point(4, pt.theta, pt.phi, y);
    f.values[size_t(p)] = y[size_t(sphharm::pack(3, 2))];
  }
  auto cl = angular_power_spectrum(f, 8);
  CHECK(cl[3] > 0.0);
  for (size_t l = 0; l < cl.size(); ++l)
    if (l != 3) CHECK(cl[l] / cl[3] <= 1e-3);
  // orthonormal basis: C_3 = 1/(2l+1) = 1/7 up to quadrature error
  CHECK(cl[3] == doctest::Approx(1.0 / 7.0).epsilon(1e-3));
}

TEST_CASE("spectrum is invariant under 90-degree longitude rotation") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 1.0);
  // band-limited random field
  std::vector<double> coef(size_t(sphharm::basis_count(5)));
  for (double& c : coef) c = g(rng);
  Field f = Field::constant(4, 0.0);
  Field fr = f;
  std::vector<double> y;
  for (std::int64_t p = 0; p < healpix::npix(4); ++p) {
    const auto pt = healpix::pix2ang(p, 4);
    sphharm::eval_point(5, pt.theta, pt.phi, y);
    double acc = 0.0;
    for (size_t k = 0; k < coef.size(); ++k) acc += coef[k] * y[k];
    f.values[size_t(p)] = acc;
    sphharm::eval_point(5, pt.theta, std::fmod(pt.phi + kPi / 2.0, 2.0 * kPi), y);
    acc = 0.0;
    for (size_t k = 0; k < coef.size(); ++k) acc += coef[k] * y[k];
    fr.values[size_t(p)] = acc;
  }
  auto ca = angular_power_spectrum(f, 5);
  auto cb = angular_power_spectrum(fr, 5);
  for (size_t l = 1; l < ca.size(); ++l)
    CHECK(std::abs(ca[l] - cb[l]) / std::max(1e-12, ca[l]) < 1e-6);
}

TEST_CASE("spectrum_series reports mean and spread") {
  Field a = Field::constant(2, 1.0);
  Field b = Field::constant(2, 3.0);
  auto res = spectrum_series({a, b}, 2);
  CHECK(res.ell.size() == 3);
  CHECK(res.c_mean[0] == doctest::Approx(4.0 * kPi * (1.0 + 9.0) / 2.0).epsilon(1e-9));
  CHECK(res.c_std[0] > 0.0);
  CHECK(res.c_std[2] < 1e-4 * res.c_mean[0]);
}

TEST_CASE("grid validation") {
  LatLonGrid g;
  g.latitudes = {0.0, 10.0};  // ascending: invalid
  g.longitudes = {0.0, 180.0};
  g.values.assign(4, 0.0);
  CHECK_THROWS(g.validate());
}
