#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fsae/model.hpp"
#include "fsae/multiscale.hpp"

using namespace fsae;
using namespace fsae::model;

namespace {

Field random_field(int z, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Field f = Field::constant(z, 0.0);
  for (double& v : f.values) v = g(rng);
  return f;
}

FsaeConfig tiny_config() {
  FsaeConfig c;
  c.z_max = 3;
  c.z_c = 1;
  c.z_b = 2;
  c.z_r = {2, 3};
  c.d_model = 8;
  c.d_head = 4;
  c.emb_level = 1;
  c.emb_degree = 2;
  c.seed = 17;
  return c;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("channel-count law reproduces the worked examples") {
  CHECK(chan_per_level(7, 1) == 4096);
  CHECK(chan_per_level(6, 1) == 1024);
  CHECK(chan_per_level(3, 1) == 16);
  CHECK(chan_per_level(3, 3) == 1);
  CHECK(chan_per_level(2, 3) == 1);  // coarser levels broadcast to one channel

  PatchSpec a{1, {7, 6, 3}};
  CHECK(a.c_in() == 5136);
  CHECK(a.tokens() == 48);
  PatchSpec b{1, {6, 3}};
  CHECK(b.c_in() == 1040);
  // compress 7->6 and decompress 6->7 channel counts
  CHECK(chan_per_level(6, 1) == 1024);
  CHECK(chan_per_level(7, 1) == 4096);
}

TEST_CASE("compression-ratio laws") {
  FsaeConfig c;  // production shape: z_max=8, z_b=5, z_c=3
  CHECK(c.n_stages() == 3);
  CHECK(c.nominal_ratio() == 64);
  CHECK(c.effective_ratio() ==
        doctest::Approx(786432.0 / (12288.0 + 768.0)).epsilon(1e-12));
  CHECK(c.effective_ratio() == doctest::Approx(60.24).epsilon(1e-3));
}

TEST_CASE("build_patches/scatter_patches are mutually inverse") {
  nn::Tape t;
  TapeState s;
  s.z_base = 1;
  Field base = random_field(1, 1);
  s.base = t.leaf(nn::Tensor(healpix::npix(1), 1, base.values));
  std::map<int, Field> res;
  for (int z : {2, 3}) {
    res[z] = random_field(z, std::uint64_t(10 + z));
    s.residuals[z] = t.leaf(nn::Tensor(healpix::npix(z), 1, res[z].values));
  }
  PatchSpec spec{1, {3, 2, 1}};
  nn::Tape::Id p = build_patches(t, s, spec);
  REQUIRE(t.val(p).rows == spec.tokens());
  REQUIRE(t.val(p).cols == spec.c_in());

  // columns are ordered [z=3 block | z=2 block | base]
  std::int64_t c0 = 0;
  for (int z : {3, 2}) {
    const std::int64_t w = chan_per_level(z, 1);
    nn::Tape::Id back = scatter_patches(t, t.slice_cols(p, c0, c0 + w), z, 1);
    CHECK(max_abs_diff(t.val(back).v, res[z].values) == 0.0);
    c0 += w;
  }
  nn::Tape::Id back_base = scatter_patches(t, t.slice_cols(p, c0, c0 + 1), 1, 1);
  CHECK(max_abs_diff(t.val(back_base).v, base.values) == 0.0);
}

TEST_CASE("scale_conserve_node matches the field-space projection") {
  nn::Tape t;
  Field r = random_field(3, 4);
  nn::Tape::Id id = t.leaf(nn::Tensor(healpix::npix(3), 1, r.values));
  nn::Tape::Id out = scale_conserve_node(t, id, 3, 1);
  Field expect = multiscale::scale_conserve(r, 1);
  CHECK(max_abs_diff(t.val(out).v, expect.values) < 1e-12);
}

TEST_CASE("encode produces the documented shapes and is deterministic") {
  FsaeModel m(tiny_config());
  Field x = random_field(3, 21);
  CompressedState c1 = m.encode(x);
  CompressedState c2 = m.encode(x);
  CHECK(c1.base.z == 1);
  CHECK(c1.code.z == 2);
  CHECK(max_abs_diff(c1.base.values, c2.base.values) == 0.0);
  CHECK(max_abs_diff(c1.code.values, c2.code.values) == 0.0);
}

TEST_CASE("base is stored verbatim and survives decode exactly") {
  FsaeModel m(tiny_config());
  Field x = random_field(3, 22);
  CompressedState c = m.encode(x);
  Field base_direct = multiscale::downsample_avg(x, 1);
  CHECK(max_abs_diff(c.base.values, base_direct.values) < 1e-12);

  Field y = m.decode(c);
  CHECK(y.z == 3);
  Field y_coarse = multiscale::downsample_avg(y, 1);
  CHECK(max_abs_diff(y_coarse.values, base_direct.values) < 1e-10);
}

TEST_CASE("masking fine residuals does not change the stored base or code shape") {
  FsaeModel m(tiny_config());
  Field x = random_field(3, 23);
  auto s = multiscale::decompose(x, 1, {2, 3});
  auto masked = multiscale::mask_residuals(s, {3});
  CompressedState c_full = m.encode_state(s);
  CompressedState c_mask = m.encode_state(masked);
  CHECK(max_abs_diff(c_full.base.values, c_mask.base.values) == 0.0);
  CHECK(c_mask.code.z == 2);
  Field y = m.decode(c_mask);
  CHECK(y.z == 3);
}

TEST_CASE("loss graph gradients match finite differences") {
  FsaeConfig cfg = tiny_config();
  FsaeModel m(cfg);
  std::vector<Field> batch = {random_field(3, 31), random_field(3, 32)};

  auto eval = [&]() {
    nn::Tape t;
    nn::GraphParams gp(t);
    return t.val(m.loss_graph(t, gp, batch)).v[0];
  };

  {
    nn::Tape t;
    nn::GraphParams gp(t);
    m.params().zero_grad();
    nn::Tape::Id loss = m.loss_graph(t, gp, batch);
    t.backward(loss);
    gp.accumulate_grads(1.0);
  }

  const double h = 1e-4;
  double worst = 0.0;
  size_t checked = 0;
  for (auto& [name, p] : m.params().all()) {
    // probe a few elements of every parameter tensor
    const size_t n = p.value.v.size();
    for (size_t j : {size_t(0), n / 2, n - 1}) {
      const double keep = p.value.v[j];
      p.value.v[j] = keep + h;
      const double fp = eval();
      p.value.v[j] = keep - h;
      const double fm = eval();
      p.value.v[j] = keep;
      const double num = (fp - fm) / (2.0 * h);
      const double ana = p.grad.v[j];
      worst = std::max(worst, std::abs(ana - num) / std::max(1.0, std::abs(num)));
      ++checked;
    }
  }
  CHECK(checked > 30);
  CHECK(worst < 1e-4);
}

TEST_CASE("a few training iterations reduce the loss") {
  FsaeConfig cfg = tiny_config();
  FsaeModel m(cfg);
  std::vector<Field> data = {random_field(3, 41), random_field(3, 42)};
  nn::TrainConfig tc;
  tc.base_lr = 3e-3;
  tc.warmup_iters = 5;
  tc.max_iters = 40;
  tc.batch_size = 2;
  auto res = m.train(data, tc);
  REQUIRE(res.loss_trace.size() == 40);
  CHECK(res.final_loss < res.loss_trace.front());
  CHECK(res.baseline_rmse > 0.0);
}

TEST_CASE("config validation rejects inconsistent level sets") {
  FsaeConfig c = tiny_config();
  c.z_b = 3;  // bottleneck not coarser than z_max
  CHECK_THROWS(c.validate());
  c = tiny_config();
  c.z_c = 2;  // base not coarser than bottleneck
  CHECK_THROWS(c.validate());
  c = tiny_config();
  c.d_model = 6;  // not divisible by d_head
  CHECK_THROWS(c.validate());
}

TEST_CASE("cross-variable attention is the identity at init") {
  CrossVarAttention cva(1, 3, 8, 4, 5);
  std::vector<Field> codes = {random_field(1, 51), random_field(1, 52), random_field(1, 53)};
  codes[0].variable = "tas";
  codes[1].variable = "uas";
  codes[2].variable = "vas";
  auto out = cva.apply_fields(codes);
  REQUIRE(out.size() == 3);
  for (size_t v = 0; v < 3; ++v)
    CHECK(max_abs_diff(out[v].values, codes[v].values) < 1e-12);
}
