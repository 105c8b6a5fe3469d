// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria are property- and oracle-based and sized for a laptop CPU.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fsae/diffusion.hpp"
#include "fsae/healpix.hpp"
#include "fsae/metrics.hpp"
#include "fsae/model.hpp"
#include "fsae/multiscale.hpp"
#include "fsae/nn.hpp"
#include "fsae/sphharm.hpp"
#include "fsae/synthetic.hpp"

using namespace fsae;
constexpr double kPi = std::numbers::pi;

namespace {

struct Gate {
  int failures = 0;

  void run(int n, const std::string& name, const std::function<std::string()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string err;
    try {
      err = body();  // empty string = pass
    } catch (const std::exception& e) {
      err = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (err.empty()) {
      std::printf("criterion %d [%s]: PASS (%.1fs)\n", n, name.c_str(), secs);
    } else {
      std::printf("criterion %d [%s]: FAIL (%.1fs) -- %s\n", n, name.c_str(), secs,
                  err.c_str());
      ++failures;
    }
    std::fflush(stdout);
  }
};

Field random_field(int z, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Field f = Field::constant(z, 0.0);
  for (double& v : f.values) v = g(rng);
  return f;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Ring-formula pixel-center oracle (see unit suite for the derivation).
std::vector<std::pair<double, double>> ring_centers(int z) {
  const auto ns = double(healpix::nside(z));
  std::vector<std::pair<double, double>> out;
  for (std::int64_t i = 1; i < healpix::nside(z); ++i)
    for (std::int64_t j = 1; j <= 4 * i; ++j)
      out.emplace_back(1.0 - double(i * i) / (3.0 * ns * ns),
                       kPi / (2.0 * double(i)) * (double(j) - 0.5));
  for (std::int64_t i = healpix::nside(z); i <= 3 * healpix::nside(z); ++i) {
    const double s = double((i - healpix::nside(z) + 1) % 2);
    for (std::int64_t j = 1; j <= 4 * healpix::nside(z); ++j) {
      double phi = kPi / (2.0 * ns) * (double(j) - s / 2.0);
      if (phi >= 2.0 * kPi) phi -= 2.0 * kPi;
      out.emplace_back(4.0 / 3.0 - 2.0 * double(i) / (3.0 * ns), phi);
    }
  }
  for (std::int64_t i = healpix::nside(z) - 1; i >= 1; --i)
    for (std::int64_t j = 1; j <= 4 * i; ++j)
      out.emplace_back(-(1.0 - double(i * i) / (3.0 * ns * ns)),
                       kPi / (2.0 * double(i)) * (double(j) - 0.5));
  return out;
}

std::string criterion1() {
  for (int z = 0; z <= 4; ++z) {
    if (healpix::npix(z) != 12 * (std::int64_t{1} << (2 * z))) return "npix law";
    for (std::int64_t p = 0; p < healpix::npix(z); ++p) {
      if (z >= 1) {
        const auto par = healpix::parent(p, z);
        if (par != p >> 2) return "parent law";
        if (p < healpix::first_child(par) || p >= healpix::first_child(par) + 4)
          return "child law";
      }
    }
    auto expect = ring_centers(z);
    std::vector<std::pair<double, double>> got;
    for (std::int64_t p = 0; p < healpix::npix(z); ++p) {
      const auto pt = healpix::pix2ang(p, z);
      got.emplace_back(std::cos(pt.theta), pt.phi);
    }
    auto cmp = [](const auto& a, const auto& b) {
      if (std::abs(a.first - b.first) > 1e-9) return a.first < b.first;
      return a.second < b.second;
    };
    std::sort(expect.begin(), expect.end(), cmp);
    std::sort(got.begin(), got.end(), cmp);
    for (size_t i = 0; i < got.size(); ++i)
      if (std::abs(got[i].first - expect[i].first) > 1e-12 ||
          std::abs(got[i].second - expect[i].second) > 1e-12)
        return "pix2ang vs ring-formula oracle at z=" + std::to_string(z);
  }

  model::PatchSpec a{1, {7, 6, 3}};
  if (a.c_in() != 5136) return "channel law 5136";
  model::PatchSpec b{1, {6, 3}};
  if (b.c_in() != 1040) return "channel law 1040";

  model::FsaeConfig c;  // z_max=8, z_b=5, z_c=3
  if (c.nominal_ratio() != 64) return "nominal ratio 4^N";
  if (std::abs(c.effective_ratio() - 786432.0 / 13056.0) > 1e-9)
    return "effective ratio 60.24";
  return "";
}

std::string criterion2() {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Field x = random_field(6, seed);
    auto s = multiscale::decompose(x, 3, {4, 5, 6});
    Field rec = multiscale::reconstruct(s);
    if (max_abs_diff(rec.values, x.values) > 1e-10)
      return "decompose/reconstruct error > 1e-10";
  }

  // gather/scatter bijectivity
  nn::Tape t;
  model::TapeState st;
  st.z_base = 1;
  Field base = random_field(1, 500);
  st.base = t.leaf(nn::Tensor(healpix::npix(1), 1, base.values));
  std::map<int, Field> res;
  for (int z : {2, 3}) {
    res[z] = random_field(z, 600 + std::uint64_t(z));
    st.residuals[z] = t.leaf(nn::Tensor(healpix::npix(z), 1, res[z].values));
  }
  model::PatchSpec spec{1, {3, 2, 1}};
  nn::Tape::Id p = model::build_patches(t, st, spec);
  std::int64_t c0 = 0;
  for (int z : {3, 2}) {
    const std::int64_t w = model::chan_per_level(z, 1);
    nn::Tape::Id back = model::scatter_patches(t, t.slice_cols(p, c0, c0 + w), z, 1);
    if (max_abs_diff(t.val(back).v, res[z].values) != 0.0) return "gather/scatter";
    c0 += w;
  }

  // scale_conserve: idempotent, zero group means
  Field r = random_field(4, 700);
  Field sc = multiscale::scale_conserve(r, 2);
  Field sc2 = multiscale::scale_conserve(sc, 2);
  if (max_abs_diff(sc.values, sc2.values) > 1e-12) return "scale_conserve idempotence";
  Field means = multiscale::downsample_avg(sc, 2);
  for (double v : means.values)
    if (std::abs(v) > 1e-12) return "scale_conserve group means";
  return "";
}

std::string criterion3() {
  // Elementwise / matmul / reduction ops.
  auto randn = [](std::int64_t r, std::int64_t c, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    nn::Tensor t(r, c);
    for (double& v : t.v) v = g(rng);
    return t;
  };
  using Builder = std::function<nn::Tape::Id(nn::Tape&, const std::vector<nn::Tape::Id>&)>;
  auto fd = [&](const Builder& f, std::vector<nn::Tensor> inputs) {
    auto eval = [&]() {
      nn::Tape t;
      std::vector<nn::Tape::Id> ids;
      for (const auto& x : inputs) ids.push_back(t.leaf(x));
      return t.val(f(t, ids)).v[0];
    };
    nn::Tape t;
    std::vector<nn::Tape::Id> ids;
    for (const auto& x : inputs) ids.push_back(t.leaf(x));
    nn::Tape::Id root = f(t, ids);
    t.backward(root);
    double worst = 0.0;
    const double h = 1e-4;
    for (size_t i = 0; i < inputs.size(); ++i)
      for (size_t j = 0; j < inputs[i].v.size(); ++j) {
        const double keep = inputs[i].v[j];
        inputs[i].v[j] = keep + h;
        const double fp = eval();
        inputs[i].v[j] = keep - h;
        const double fm = eval();
        inputs[i].v[j] = keep;
        const double num = (fp - fm) / (2.0 * h);
        worst = std::max(worst,
                         std::abs(t.grad(ids[i]).v[j] - num) / std::max(1.0, std::abs(num)));
      }
    return worst;
  };
  auto weighted = [&](std::function<nn::Tape::Id(nn::Tape&, const std::vector<nn::Tape::Id>&)>
                          op,
                      std::int64_t r, std::int64_t c, std::uint64_t seed) -> Builder {
    nn::Tensor w = randn(r, c, seed);
    return [op, w](nn::Tape& t, const std::vector<nn::Tape::Id>& in) {
      return t.sum_all(t.mul(op(t, in), t.constant(w)));
    };
  };

  struct Case {
    const char* name;
    Builder b;
    std::vector<nn::Tensor> in;
  };
  std::vector<Case> cases;
  cases.push_back({"add", weighted([](nn::Tape& t, const std::vector<nn::Tape::Id>& in) {
                     return t.add(in[0], in[1]);
                   }, 3, 4, 1), {randn(3, 4, 2), randn(3, 4, 3)}});
  cases.push_back({"mul", weighted([](nn::Tape& t, const std::vector<nn::Tape::Id>& in) {
                     return t.mul(in[0], in[1]);
                   }, 3, 4, 4), {randn(3, 4, 5), randn(3, 4, 6)}});
  cases.push_back({"matmul", weighted([](nn::Tape& t, const std::vector<nn::Tape::Id>& in) {
                     return t.matmul(in[0], in[1]);
                   }, 3, 5, 7), {randn(3, 4, 8), randn(4, 5, 9)}});
  cases.push_back({"bmm_nt", weighted([](nn::Tape& t, const std::vector<nn::Tape::Id>& in) {
                     return t.bmm_nt(in[0], in[1], 2);
                   }, 6, 5, 10), {randn(6, 4, 11), randn(10, 4, 12)}});
  cases.push_back({"softmax", weighted([](nn::Tape& t, const std::vector<nn::Tape::Id>& in) {
                     return t.softmax_rows(in[0]);
                   }, 3, 5, 13), {randn(3, 5, 14)}});
  cases.push_back({"layernorm",
                   weighted([](nn::Tape& t, const std::vector<nn::Tape::Id>& in) {
                     return t.layernorm_rows(in[0], in[1], in[2]);
                   }, 3, 6, 15), {randn(3, 6, 16), randn(1, 6, 17), randn(1, 6, 18)}});
  cases.push_back({"gelu", weighted([](nn::Tape& t, const std::vector<nn::Tape::Id>& in) {
                     return t.gelu(in[0]);
                   }, 3, 4, 19), {randn(3, 4, 20)}});
  cases.push_back({"mha", weighted(
                              [](nn::Tape& t, const std::vector<nn::Tape::Id>& in) {
                                nn::MhaParams p{in[1], in[5], in[2], in[6],
                                                in[3], in[7], in[4], in[8]};
                                return nn::multihead_attention(t, in[0], in[0], in[0], p, 2,
                                                               1);
                              },
                              4, 8, 21),
                   {randn(4, 8, 22), randn(8, 8, 23), randn(8, 8, 24), randn(8, 8, 25),
                    randn(8, 8, 26), randn(1, 8, 27), randn(1, 8, 28), randn(1, 8, 29),
                    randn(1, 8, 30)}});
  for (auto& c : cases) {
    const double worst = fd(c.b, c.in);
    if (worst > 1e-4)
      return std::string(c.name) + " rel err " + std::to_string(worst);
  }

  // Composite blocks via the model loss at a toy shape (encode attention +
  // compress + decoder decompress all sit on this path).
  model::FsaeConfig cfg;
  cfg.z_max = 3;
  cfg.z_c = 1;
  cfg.z_b = 2;
  cfg.z_r = {2, 3};
  cfg.d_model = 8;
  cfg.d_head = 4;
  cfg.emb_level = 1;
  cfg.emb_degree = 2;
  cfg.seed = 77;
  model::FsaeModel m(cfg);
  std::vector<Field> batch = {random_field(3, 900)};
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
  for (auto& [name, p] : m.params().all()) {
    const size_t n = p.value.v.size();
    for (size_t j : {size_t(0), n / 3, n - 1}) {
      const double keep = p.value.v[j];
      p.value.v[j] = keep + h;
      const double fp = eval();
      p.value.v[j] = keep - h;
      const double fm = eval();
      p.value.v[j] = keep;
      const double num = (fp - fm) / (2.0 * h);
      worst = std::max(worst, std::abs(p.grad.v[j] - num) / std::max(1.0, std::abs(num)));
    }
  }
  if (worst > 1e-4) return "composite block rel err " + std::to_string(worst);
  return "";
}

// Desk-scale smoke config shared by criteria 4 and 5.
model::FsaeConfig desk_config() {
  model::FsaeConfig cfg;
  cfg.z_max = 5;
  cfg.z_c = 1;
  cfg.z_b = 3;
  cfg.z_r = {3, 4, 5};
  cfg.d_model = 64;
  cfg.d_head = 16;
  cfg.emb_level = 2;
  cfg.emb_degree = 6;
  cfg.seed = 12345;
  return cfg;
}

std::vector<Field> desk_dataset() {
  synth::SynthConfig sc;
  sc.z = 5;
  sc.l_max = 12;
  sc.slope = 2.5;
  sc.seed = 9;
  std::vector<Field> data;
  for (int i = 0; i < 8; ++i) data.push_back(synth::generate(sc, "tas", i));
  return data;
}

double final_train_rmse = -1.0;  // shared with criterion 5 reporting

std::string criterion4() {
  auto data = desk_dataset();
  double mean = 0.0, sq = 0.0;
  std::int64_t n = 0;
  for (const auto& f : data)
    for (double v : f.values) {
      mean += v;
      sq += v * v;
      ++n;
    }
  mean /= double(n);
  const double field_std = std::sqrt(sq / double(n) - mean * mean);

  model::FsaeModel m(desk_config());
  nn::TrainConfig tc;
  tc.base_lr = 2e-3;
  tc.warmup_iters = 100;
  tc.max_iters = 300;
  tc.batch_size = 8;
  auto res = m.train(data, tc);
  final_train_rmse = res.final_loss;

  std::ostringstream detail;
  detail << "train RMSE " << res.final_loss << " vs 5% of std " << 0.05 * field_std
         << "; baseline " << res.baseline_rmse;
  std::printf("  criterion 4 detail: %s\n", detail.str().c_str());
  if (!(res.final_loss <= 0.05 * field_std))
    return "train RMSE " + std::to_string(res.final_loss) + " > 5% of std " +
           std::to_string(0.05 * field_std);
  if (!(res.baseline_rmse >= 5.0 * res.final_loss))
    return "zero-weight baseline not >= 5x train RMSE";
  return "";
}

std::string criterion5() {
  model::FsaeModel m(desk_config());
  Field x = desk_dataset()[0];
  auto s = multiscale::decompose(x, 1, {3, 4, 5});
  auto masked = multiscale::mask_residuals(s, {4, 5});

  // coarser encode-path information is untouched by the mask
  if (max_abs_diff(masked.base.values, s.base.values) != 0.0) return "mask changed base";
  if (max_abs_diff(masked.residuals.at(3).values, s.residuals.at(3).values) != 0.0)
    return "mask changed coarser residual";
  auto c_full = m.encode_state(s);
  auto c_mask = m.encode_state(masked);
  if (max_abs_diff(c_full.base.values, c_mask.base.values) != 0.0)
    return "stored base not bit-identical under masking";

  Field y = m.decode(c_mask);
  if (y.z != 5) return "SR output not at z_max";
  Field y_coarse = multiscale::downsample_avg(y, 1);
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < s.base.values.size(); ++i) {
    num += std::abs(y_coarse.values[i] - s.base.values[i]);
    den += std::abs(s.base.values[i]);
  }
  if (num / den > 0.02)
    return "coarse average off by " + std::to_string(num / den * 100.0) + "%";
  return "";
}

std::string criterion6() {
  // schedule endpoints + identities
  auto s = diffusion::cosine_schedule(1000);
  if (s.alpha_bar[0] != 1.0) return "alpha_bar[0] != 1";
  for (int t = 1; t <= 1000; ++t) {
    if (s.alpha_bar[size_t(t)] >= s.alpha_bar[size_t(t - 1)]) return "not monotone";
    const double beta = 1.0 - s.alpha_bar[size_t(t)] / s.alpha_bar[size_t(t - 1)];
    if (beta > 0.999 + 1e-12) return "beta clip";
  }
  {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> x0(32), eps(32);
    for (double& v : x0) v = g(rng);
    for (double& v : eps) v = g(rng);
    for (int t : {1, 400, 999}) {
      auto xt = diffusion::q_sample(x0, t, eps, s);
      auto v = diffusion::v_target(x0, eps, t, s);
      if (max_abs_diff(diffusion::x0_from_v(xt, v, t, s), x0) > 1e-10)
        return "x0 identity";
      if (max_abs_diff(diffusion::eps_from_v(xt, v, t, s), eps) > 1e-10)
        return "eps identity";
    }
  }

  // DDIM determinism
  diffusion::Predictor zero = [](const std::vector<double>& x, int) {
    return std::vector<double>(x.size(), 0.0);
  };
  auto a = diffusion::ddim_sample(zero, s, 16, 25, 3);
  auto b = diffusion::ddim_sample(zero, s, 16, 25, 3);
  if (max_abs_diff(a, b) > 1e-6) return "DDIM not deterministic";

  // toy-Gaussian statistics over 10^4 samples
  const double mu = 2.0, sigma = 0.5;
  diffusion::Predictor pred = [&](const std::vector<double>& xt, int t) {
    const double ab = s.alpha_bar[size_t(t)];
    const double sa = std::sqrt(ab), sb = std::sqrt(1.0 - ab);
    std::vector<double> v(xt.size());
    for (size_t i = 0; i < xt.size(); ++i) {
      const double x0 =
          mu + (sa * sigma * sigma) / (ab * sigma * sigma + (1.0 - ab)) * (xt[i] - sa * mu);
      const double eps = sb < 1e-12 ? 0.0 : (xt[i] - sa * x0) / sb;
      v[i] = sa * eps - sb * x0;
    }
    return v;
  };
  double sum = 0.0, sumsq = 0.0;
  const int nsamp = 10000, dim = 4;
  for (int i = 0; i < nsamp; ++i) {
    auto x = diffusion::ddim_sample(pred, s, dim, 50, std::uint64_t(i));
    for (double v : x) {
      sum += v;
      sumsq += v * v;
    }
  }
  const double m = sum / double(nsamp * dim);
  const double sd = std::sqrt(sumsq / double(nsamp * dim) - m * m);
  if (std::abs(m - mu) / mu > 0.1) return "toy-Gaussian mean off: " + std::to_string(m);
  if (std::abs(sd - sigma) / sigma > 0.1)
    return "toy-Gaussian std off: " + std::to_string(sd);

  // 10-member desk ensemble: per-pixel std map is nonzero and varies in space
  diffusion::BackboneConfig bc;  // desk defaults: z_code=2, z_base=0, window=3
  bc.seed = 5;
  diffusion::Backbone bb(bc);
  std::vector<std::int64_t> ts = {1000, 1001, 1002};
  diffusion::Predictor bp = [&](const std::vector<double>& xt, int t) {
    return bb.predict_v(xt, t, ts);
  };
  const std::int64_t dimf = bc.flat_dim();
  std::vector<std::vector<double>> members;
  for (int i = 0; i < 10; ++i)
    members.push_back(diffusion::ddim_sample(bp, s, dimf, 20, 40 + std::uint64_t(i)));
  std::vector<double> stddev(static_cast<size_t>(dimf));
  for (std::int64_t j = 0; j < dimf; ++j) {
    double mm = 0.0, ss = 0.0;
    for (const auto& x : members) mm += x[size_t(j)];
    mm /= 10.0;
    for (const auto& x : members) ss += (x[size_t(j)] - mm) * (x[size_t(j)] - mm);
    stddev[size_t(j)] = std::sqrt(ss / 10.0);
  }
  const double smin = *std::min_element(stddev.begin(), stddev.end());
  const double smax = *std::max_element(stddev.begin(), stddev.end());
  if (!(smin > 0.0)) return "ensemble std has zero pixels";
  if (!(smax > smin * 1.01)) return "ensemble std not spatially varying";
  return "";
}

std::string criterion7() {
  // pure Y_3,2 dominance
  Field f = Field::constant(4, 0.0);
  std::vector<double> y;
  for (std::int64_t p = 0; p < healpix::npix(4); ++p) {
    const auto pt = healpix::pix2ang(p, 4);
    sphharm::eval_point(4, pt.theta, pt.phi, y);
    f.values[size_t(p)] = y[size_t(sphharm::pack(3, 2))];
  }
  auto cl = metrics::angular_power_spectrum(f, 8);
  if (!(cl[3] > 0.0)) return "C_3 not positive";
  for (size_t l = 0; l < cl.size(); ++l)
    if (l != 3 && cl[l] / cl[3] > 1e-3)
      return "leakage at l=" + std::to_string(l);

  // constant-field monopole
  const double c = 1.7;
  auto cm = metrics::angular_power_spectrum(Field::constant(4, c), 4);
  if (std::abs(cm[0] - 4.0 * kPi * c * c) / (4.0 * kPi * c * c) > 1e-6)
    return "monopole C_0";

  // longitude-rotation invariance (90 degrees maps the grid onto itself)
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> coef(size_t(sphharm::basis_count(5)));
  for (double& v : coef) v = g(rng);
  Field base = Field::constant(4, 0.0), rot = base;
  for (std::int64_t p = 0; p < healpix::npix(4); ++p) {
    const auto pt = healpix::pix2ang(p, 4);
    sphharm::eval_point(5, pt.theta, pt.phi, y);
    double acc = 0.0;
    for (size_t k = 0; k < coef.size(); ++k) acc += coef[k] * y[k];
    base.values[size_t(p)] = acc;
    sphharm::eval_point(5, pt.theta, std::fmod(pt.phi + kPi / 2.0, 2.0 * kPi), y);
    acc = 0.0;
    for (size_t k = 0; k < coef.size(); ++k) acc += coef[k] * y[k];
    rot.values[size_t(p)] = acc;
  }
  auto ca = metrics::angular_power_spectrum(base, 5);
  auto cb = metrics::angular_power_spectrum(rot, 5);
  for (size_t l = 0; l < ca.size(); ++l)
    if (std::abs(ca[l] - cb[l]) / std::max(1e-12, std::abs(ca[l])) > 1e-6)
      return "rotation invariance at l=" + std::to_string(l);
  return "";
}

std::string criterion8() {
  metrics::LatLonGrid truth, approx;
  truth.latitudes = {60.0, 0.0};
  truth.longitudes = {0.0, 180.0};
  truth.values = {0.0, 0.0, 0.0, 0.0};
  approx = truth;
  approx.values = {2.0, 2.0, 1.0, 1.0};
  const double rmse = metrics::rmse_latweighted({truth}, {approx});
  if (std::abs(rmse - std::sqrt(2.0)) > 1e-12)
    return "2x2 oracle: got " + std::to_string(rmse);

  for (double r : {0.02, 1.0, 7.0}) {
    const double drop = metrics::psnr_from(10.0, r) - metrics::psnr_from(10.0, 2.0 * r);
    if (std::abs(drop - 20.0 * std::log10(2.0)) > 0.01) return "PSNR doubling law";
  }
  return "";
}

}  // namespace

int main() {
  Gate g;
  g.run(1, "structural laws", criterion1);
  g.run(2, "exactness", criterion2);
  g.run(3, "gradients", criterion3);
  g.run(4, "learning smoke", criterion4);
  g.run(5, "zero-shot SR", criterion5);
  g.run(6, "diffusion", criterion6);
  g.run(7, "spectra", criterion7);
  g.run(8, "metrics", criterion8);
  if (g.failures == 0) {
    std::printf("all acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d criterion(s) failed\n", g.failures);
  return 1;
}
