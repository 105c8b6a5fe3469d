#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fsae/preprocess.hpp"

using namespace fsae::preprocess;

TEST_CASE("percentiles of 0..100 hit the closed-form ranks") {
  std::vector<double> v;
  for (int i = 100; i >= 0; --i) v.push_back(double(i));  // unsorted on purpose
  auto s = fit_percentiles(v, "tas");
  CHECK(s.variable == "tas");
  CHECK(s.p01 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.p99 == doctest::Approx(99.0).epsilon(1e-12));
}

TEST_CASE("percentile interpolation between ranks") {
  std::vector<double> v = {0.0, 1.0};  // q*(n-1) lands between the two samples
  auto s = fit_percentiles(v);
  CHECK(s.p01 == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(s.p99 == doctest::Approx(0.99).epsilon(1e-12));
}

TEST_CASE("scale/unscale identity and no clipping") {
  NormStats s{"x", 10.0, 30.0};
  CHECK(scale(10.0, s) == doctest::Approx(0.0));
  CHECK(scale(30.0, s) == doctest::Approx(1.0));
  CHECK(scale(40.0, s) > 1.0);   // above p99 passes through
  CHECK(scale(0.0, s) < 0.0);    // below p01 passes through
  for (double x : {-5.0, 10.0, 17.3, 30.0, 99.0}) {
    const double rel = std::abs(unscale(scale(x, s), s) - x) / std::max(1.0, std::abs(x));
    CHECK(rel < 1e-12);
  }
}

TEST_CASE("inplace variants match the scalar ones") {
  NormStats s{"x", -1.0, 3.0};
  std::vector<double> v = {-2.0, 0.0, 1.0, 5.0};
  auto w = v;
  scale_inplace(w, s);
  for (size_t i = 0; i < v.size(); ++i) CHECK(w[i] == doctest::Approx(scale(v[i], s)));
  unscale_inplace(w, s);
  for (size_t i = 0; i < v.size(); ++i) CHECK(w[i] == doctest::Approx(v[i]).epsilon(1e-12));
}

TEST_CASE("degenerate inputs are rejected") {
  CHECK_THROWS(fit_percentiles(std::vector<double>{}));
  CHECK_THROWS(fit_percentiles(std::vector<double>{2.0}));
  CHECK_THROWS(fit_percentiles(std::vector<double>{3.0, 3.0, 3.0}));
}
