#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fsae/multiscale.hpp"

using namespace fsae;
using namespace fsae::multiscale;

namespace {

Field random_field(int z, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Field f = Field::constant(z, 0.0);
  for (double& v : f.values) v = g(rng);
  return f;
}

double max_abs_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.values.size(); ++i)
    m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

}  // namespace

TEST_CASE("downsample averages sibling groups") {
  Field f = Field::constant(1, 0.0);
  for (size_t i = 0; i < f.values.size(); ++i) f.values[i] = double(i);
  Field c = downsample_avg(f, 0);
  REQUIRE(c.z == 0);
  for (std::int64_t p = 0; p < 12; ++p)
    CHECK(c.values[size_t(p)] == doctest::Approx(4.0 * double(p) + 1.5));
}

TEST_CASE("broadcast then downsample is identity") {
  Field c = random_field(2, 7);
  Field fine = broadcast(c, 5);
  CHECK(fine.z == 5);
  CHECK(max_abs_diff(downsample_avg(fine, 2), c) < 1e-12);
}

TEST_CASE("downsample preserves the global mean") {
  Field f = random_field(4, 11);
  CHECK(downsample_avg(f, 1).mean() == doctest::Approx(f.mean()).epsilon(1e-12));
}

TEST_CASE("scale_conserve: per-group zero mean and idempotence") {
  Field r = random_field(4, 3);
  Field s = scale_conserve(r, 2);
  for (std::int64_t g = 0; g < healpix::npix(2); ++g) {
    double acc = 0.0;
    for (std::int64_t k = 0; k < 16; ++k) acc += s.values[size_t(g * 16 + k)];
    CHECK(std::abs(acc / 16.0) < 1e-12);
  }
  CHECK(max_abs_diff(scale_conserve(s, 2), s) < 1e-12);
}

TEST_CASE("decompose/reconstruct round trip") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Field x = random_field(6, seed);
    auto s = decompose(x, 3, {4, 5, 6});
    CHECK(s.base.z == 3);
    CHECK(s.residuals.size() == 3);
    CHECK(max_abs_diff(reconstruct(s), x) < 1e-10);
  }
}

TEST_CASE("round trip with a level gap below the lowest residual") {
  Field x = random_field(5, 42);
  auto s = decompose(x, 1, {3, 4, 5});
  CHECK(s.base.z == 1);
  CHECK(s.residuals.count(2) == 0);
  CHECK(max_abs_diff(reconstruct(s), x) < 1e-10);
  // the gap residual is conserved against the base level
  const Field& r3 = s.residuals.at(3);
  Field r3c = downsample_avg(r3, 1);
  for (double v : r3c.values) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("residuals have zero mean per parent pixel") {
  Field x = random_field(6, 5);
  auto s = decompose(x, 3, {4, 5, 6});
  for (const auto& [z, r] : s.residuals) {
    Field c = downsample_avg(r, z - 1);
    for (double v : c.values) CHECK(std::abs(v) < 1e-11);
  }
}

TEST_CASE("mask_residuals zeros selected levels only") {
  Field x = random_field(6, 9);
  auto s = decompose(x, 3, {4, 5, 6});
  auto m = mask_residuals(s, {5, 6});
  CHECK(max_abs_diff(m.base, s.base) == 0.0);
  CHECK(max_abs_diff(m.residuals.at(4), s.residuals.at(4)) == 0.0);
  for (double v : m.residuals.at(5).values) CHECK(v == 0.0);
  for (double v : m.residuals.at(6).values) CHECK(v == 0.0);
  // masking never changes the coarse average
  Field rec = reconstruct(m);
  CHECK(max_abs_diff(downsample_avg(rec, 3), s.base) < 1e-10);
}

TEST_CASE("decompose rejects bad level sets") {
  Field x = random_field(4, 1);
  CHECK_THROWS(decompose(x, 4, {5}));        // residuals beyond field level
  CHECK_THROWS(decompose(x, 3, {3}));        // residual not finer than base
  CHECK_THROWS(decompose(x, 1, {2, 4}));     // non-contiguous residual levels
}
