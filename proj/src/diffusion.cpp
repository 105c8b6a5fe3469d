#include "fsae/diffusion.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "fsae/sphharm.hpp"

namespace fsae::diffusion {

namespace {
constexpr double kPi = 3.14159265358979323846;

void check_t(int t, const NoiseSchedule& s) {
  if (t < 0 || t > s.T) throw std::invalid_argument("diffusion: step index out of range");
}
}  // namespace

NoiseSchedule cosine_schedule(int T) {
  if (T < 1) throw std::invalid_argument("cosine_schedule: T must be >= 1");
  NoiseSchedule s;
  s.T = T;
  s.alpha_bar.resize(size_t(T + 1));
  const double off = 0.008;
  auto f = [&](double t) {
    const double a = std::cos(((t / T + off) / (1.0 + off)) * kPi / 2.0);
    return a * a;
  };
  const double f0 = f(0.0);
  s.alpha_bar[0] = 1.0;
  for (int t = 1; t <= T; ++t) {
    double beta = 1.0 - f(double(t)) / f(double(t - 1));
    beta = std::min(beta, 0.999);
    s.alpha_bar[size_t(t)] = s.alpha_bar[size_t(t - 1)] * (1.0 - beta);
  }
  return s;
}

std::vector<double> q_sample(const std::vector<double>& x0, int t,
                             const std::vector<double>& eps, const NoiseSchedule& s) {
  check_t(t, s);
  if (x0.size() != eps.size()) throw std::invalid_argument("q_sample: shape mismatch");
  const double ab = s.alpha_bar[size_t(t)];
  const double ca = std::sqrt(ab), cb = std::sqrt(1.0 - ab);
  std::vector<double> out(x0.size());
  for (size_t i = 0; i < x0.size(); ++i) out[i] = ca * x0[i] + cb * eps[i];
  return out;
}

std::vector<double> v_target(const std::vector<double>& x0, const std::vector<double>& eps,
                             int t, const NoiseSchedule& s) {
  check_t(t, s);
  const double ab = s.alpha_bar[size_t(t)];
  const double ca = std::sqrt(ab), cb = std::sqrt(1.0 - ab);
  std::vector<double> out(x0.size());
  for (size_t i = 0; i < x0.size(); ++i) out[i] = ca * eps[i] - cb * x0[i];
  return out;
}

std::vector<double> x0_from_v(const std::vector<double>& x_t, const std::vector<double>& v,
                              int t, const NoiseSchedule& s) {
  check_t(t, s);
  const double ab = s.alpha_bar[size_t(t)];
  const double ca = std::sqrt(ab), cb = std::sqrt(1.0 - ab);
  std::vector<double> out(x_t.size());
  for (size_t i = 0; i < x_t.size(); ++i) out[i] = ca * x_t[i] - cb * v[i];
  return out;
}

std::vector<double> eps_from_v(const std::vector<double>& x_t, const std::vector<double>& v,
                               int t, const NoiseSchedule& s) {
  check_t(t, s);
  const double ab = s.alpha_bar[size_t(t)];
  const double ca = std::sqrt(ab), cb = std::sqrt(1.0 - ab);
  std::vector<double> out(x_t.size());
  for (size_t i = 0; i < x_t.size(); ++i) out[i] = cb * x_t[i] + ca * v[i];
  return out;
}

// ---- calendar ----

// days <-> civil (Gregorian), epoch 1940-01-01.
namespace {
constexpr std::int64_t kUnixDays1940 = -10958;  // 1940-01-01 relative to 1970-01-01
}  // namespace

std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = unsigned(y - era * 400);
  const unsigned doy = (153u * unsigned(m + (m > 2 ? -3 : 9)) + 2u) / 5u + unsigned(d) - 1u;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  const std::int64_t unix_days = era * 146097 + std::int64_t(doe) - 719468;
  return unix_days - kUnixDays1940;
}

CivilDate civil_from_days(std::int64_t days_since_epoch) {
  std::int64_t z = days_since_epoch + kUnixDays1940 + 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = unsigned(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = std::int64_t(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : -9);
  return {int(y + (m <= 2)), int(m), int(d)};
}

std::vector<double> timestamp_features(std::int64_t days_since_epoch, int harmonics) {
  const CivilDate cd = civil_from_days(days_since_epoch);
  const double doy = double(days_since_epoch - days_from_civil(cd.year, 1, 1));
  std::vector<double> f;
  f.reserve(size_t(2 * harmonics + 1));
  for (int h = 1; h <= harmonics; ++h) {
    const double phase = 2.0 * kPi * h * doy / 365.25;
    f.push_back(std::sin(phase));
    f.push_back(std::cos(phase));
  }
  f.push_back((double(cd.year) - 1940.0) / 100.0);
  return f;
}

std::vector<double> step_features(int t, int dim) {
  std::vector<double> f(static_cast<size_t>(dim));
  const int half = dim / 2;
  for (int i = 0; i < half; ++i) {
    const double freq = std::exp(-std::log(10000.0) * double(i) / double(half));
    f[size_t(i)] = std::sin(t * freq);
    f[size_t(half + i)] = std::cos(t * freq);
  }
  return f;
}

// ---- backbone ----

Backbone::Backbone(BackboneConfig cfg) : cfg_(std::move(cfg)), params_(cfg_.seed) {
  if (cfg_.d_model % cfg_.d_head != 0)
    throw std::invalid_argument("backbone: d_model % d_head != 0");
  if (cfg_.window < 1 || cfg_.variables.empty())
    throw std::invalid_argument("backbone: bad window or variable set");
}

std::vector<double> Backbone::flatten(const std::vector<DiffusionState>& window) const {
  if (int(window.size()) != cfg_.window)
    throw std::invalid_argument("backbone: window length mismatch");
  std::vector<double> flat;
  flat.reserve(size_t(cfg_.flat_dim()));
  for (const auto& var : cfg_.variables)
    for (const auto& st : window) {
      const Field& c = st.code.at(var);
      const Field& b = st.base.at(var);
      flat.insert(flat.end(), c.values.begin(), c.values.end());
      flat.insert(flat.end(), b.values.begin(), b.values.end());
    }
  return flat;
}

std::vector<DiffusionState> Backbone::unflatten(const std::vector<double>& flat,
                                                const std::vector<std::int64_t>& ts) const {
  const std::int64_t nc = healpix::npix(cfg_.z_code);
  const std::int64_t nb = healpix::npix(cfg_.z_base);
  std::vector<DiffusionState> window(size_t(cfg_.window));
  size_t off = 0;
  for (const auto& var : cfg_.variables)
    for (int w = 0; w < cfg_.window; ++w) {
      Field code;
      code.z = cfg_.z_code;
      code.variable = var;
      code.timestamp = ts.empty() ? 0 : ts[size_t(w)];
      code.values.assign(flat.begin() + off, flat.begin() + off + size_t(nc));
      off += size_t(nc);
      Field base;
      base.z = cfg_.z_base;
      base.variable = var;
      base.timestamp = code.timestamp;
      base.values.assign(flat.begin() + off, flat.begin() + off + size_t(nb));
      off += size_t(nb);
      window[size_t(w)].code[var] = std::move(code);
      window[size_t(w)].base[var] = std::move(base);
    }
  return window;
}

nn::Tape::Id Backbone::predict_graph(nn::Tape& tp, nn::GraphParams& gp,
                                     const std::vector<double>& x_t, int t,
                                     const std::vector<std::int64_t>& ts) const {
  using Id = nn::Tape::Id;
  const std::int64_t V = std::int64_t(cfg_.variables.size());
  const std::int64_t W = cfg_.window;
  const std::int64_t P = cfg_.pix_per_state();
  const std::int64_t N = V * W * P;
  const int d = cfg_.d_model;
  if (std::int64_t(x_t.size()) != N) throw std::invalid_argument("backbone: flat size mismatch");
  if (std::int64_t(ts.size()) != W) throw std::invalid_argument("backbone: timestamps mismatch");

  auto Pm = [&](const std::string& n, std::int64_t r, std::int64_t c, nn::Init i) {
    return gp.use(params_.get(n, r, c, i));
  };

  Id x = tp.constant(nn::Tensor(N, 1, x_t));
  Id h = tp.linear(x, Pm("lift_w", d, 1, nn::Init::kXavier), Pm("lift_b", 1, d, nn::Init::kZero));

  // grid embedding: SH basis at code and base pixel centers, learned lift
  {
    const int nbasis = sphharm::basis_count(cfg_.emb_degree);
    std::vector<double> grid;
    grid.reserve(size_t(P * nbasis));
    auto bc = sphharm::basis_matrix(cfg_.z_code, cfg_.emb_degree);
    auto bb = sphharm::basis_matrix(cfg_.z_base, cfg_.emb_degree);
    grid.insert(grid.end(), bc.begin(), bc.end());
    grid.insert(grid.end(), bb.begin(), bb.end());
    Id basis = tp.constant(nn::Tensor(P, nbasis, std::move(grid)));
    Id gemb = tp.bmm_nt(basis, Pm("grid_w", d, nbasis, nn::Init::kXavier), 1);  // [P, d]
    std::vector<std::int64_t> idx(static_cast<size_t>(N));
    for (std::int64_t i = 0; i < N; ++i) idx[size_t(i)] = i % P;
    h = tp.add(h, tp.gather_rows(gemb, std::move(idx)));
  }
  // variable embedding
  {
    Id vemb = Pm("var_emb", V, d, nn::Init::kXavier);
    std::vector<std::int64_t> idx(static_cast<size_t>(N));
    for (std::int64_t i = 0; i < N; ++i) idx[size_t(i)] = i / (W * P);
    h = tp.add(h, tp.gather_rows(vemb, std::move(idx)));
  }
  // calendar timestamp embedding
  {
    const int F = int(timestamp_features(0).size());
    nn::Tensor feats(W, F);
    for (std::int64_t w = 0; w < W; ++w) {
      auto f = timestamp_features(ts[size_t(w)]);
      std::copy(f.begin(), f.end(), feats.v.begin() + w * F);
    }
    Id temb = tp.bmm_nt(tp.constant(std::move(feats)),
                        Pm("time_w", d, F, nn::Init::kXavier), 1);  // [W, d]
    std::vector<std::int64_t> idx(static_cast<size_t>(N));
    for (std::int64_t i = 0; i < N; ++i) idx[size_t(i)] = (i / P) % W;
    h = tp.add(h, tp.gather_rows(temb, std::move(idx)));
  }
  // diffusion step embedding
  {
    auto f = step_features(t, d);
    Id semb = tp.constant(nn::Tensor(1, d, std::move(f)));
    Id lifted = tp.linear(semb, Pm("step_w", d, d, nn::Init::kXavier),
                          Pm("step_b", 1, d, nn::Init::kZero));
    h = tp.add_rowvec(h, lifted);
  }

  // natural row order is (v, w, p)
  // variable axis: (w, p, v) groups of size V
  std::vector<std::int64_t> to_var(static_cast<size_t>(N)), from_var(static_cast<size_t>(N));
  {
    std::int64_t j = 0;
    for (std::int64_t w = 0; w < W; ++w)
      for (std::int64_t p = 0; p < P; ++p)
        for (std::int64_t v = 0; v < V; ++v) {
          to_var[size_t(j)] = v * W * P + w * P + p;
          from_var[size_t(to_var[size_t(j)])] = j;
          ++j;
        }
  }
  // temporal axis: (v, p, w) groups of size W
  std::vector<std::int64_t> to_tmp(static_cast<size_t>(N)), from_tmp(static_cast<size_t>(N));
  {
    std::int64_t j = 0;
    for (std::int64_t v = 0; v < V; ++v)
      for (std::int64_t p = 0; p < P; ++p)
        for (std::int64_t w = 0; w < W; ++w) {
          to_tmp[size_t(j)] = v * W * P + w * P + p;
          from_tmp[size_t(to_tmp[size_t(j)])] = j;
          ++j;
        }
  }

  const int heads = d / cfg_.d_head;
  for (int blk = 0; blk < cfg_.n_blocks; ++blk) {
    const std::string bp = "blk" + std::to_string(blk);
    auto mha_params = [&](const std::string& ax) {
      nn::MhaParams m;
      m.wq = Pm(bp + "/" + ax + "/wq", d, d, nn::Init::kXavier);
      m.bq = Pm(bp + "/" + ax + "/bq", 1, d, nn::Init::kZero);
      m.wk = Pm(bp + "/" + ax + "/wk", d, d, nn::Init::kXavier);
      m.bk = Pm(bp + "/" + ax + "/bk", 1, d, nn::Init::kZero);
      m.wv = Pm(bp + "/" + ax + "/wv", d, d, nn::Init::kXavier);
      m.bv = Pm(bp + "/" + ax + "/bv", 1, d, nn::Init::kZero);
      m.wo = Pm(bp + "/" + ax + "/wo", d, d, nn::Init::kZero);
      m.bo = Pm(bp + "/" + ax + "/bo", 1, d, nn::Init::kZero);
      return m;
    };
    Id n1 = tp.layernorm_rows(h, Pm(bp + "/ln1_g", 1, d, nn::Init::kOne),
                              Pm(bp + "/ln1_b", 1, d, nn::Init::kZero));
    // three attention branches applied simultaneously to the same input
    Id a_var = tp.gather_rows(
        nn::multihead_attention(tp, tp.gather_rows(n1, to_var), tp.gather_rows(n1, to_var),
                                tp.gather_rows(n1, to_var), mha_params("var"), heads, W * P),
        from_var);
    Id a_sp = nn::multihead_attention(tp, n1, n1, n1, mha_params("sp"), heads, V * W);
    Id a_tm = tp.gather_rows(
        nn::multihead_attention(tp, tp.gather_rows(n1, to_tmp), tp.gather_rows(n1, to_tmp),
                                tp.gather_rows(n1, to_tmp), mha_params("tm"), heads, V * P),
        from_tmp);
    h = tp.add(tp.add(h, a_var), tp.add(a_sp, a_tm));
    Id n2 = tp.layernorm_rows(h, Pm(bp + "/ln2_g", 1, d, nn::Init::kOne),
                              Pm(bp + "/ln2_b", 1, d, nn::Init::kZero));
    Id ff = tp.linear(tp.gelu(tp.linear(n2, Pm(bp + "/ffn1_w", 4 * d, d, nn::Init::kXavier),
                                        Pm(bp + "/ffn1_b", 1, 4 * d, nn::Init::kZero))),
                      Pm(bp + "/ffn2_w", d, 4 * d, nn::Init::kZero),
                      Pm(bp + "/ffn2_b", 1, d, nn::Init::kZero));
    h = tp.add(h, ff);
  }
  // zero-initialized v head
  return tp.linear(h, Pm("head_w", 1, d, nn::Init::kZero), Pm("head_b", 1, 1, nn::Init::kZero));
}

std::vector<double> Backbone::predict_v(const std::vector<double>& x_t, int t,
                                        const std::vector<std::int64_t>& ts) const {
  nn::Tape tp;
  nn::GraphParams gp(tp);
  nn::Tape::Id v = predict_graph(tp, gp, x_t, t, ts);
  return tp.val(v).v;
}

nn::Tape::Id Backbone::loss_graph(nn::Tape& tp, nn::GraphParams& gp,
                                  const std::vector<double>& x0, const std::vector<double>& eps,
                                  int t, const std::vector<std::int64_t>& ts,
                                  const NoiseSchedule& sched) const {
  const auto x_t = q_sample(x0, t, eps, sched);
  const auto v = v_target(x0, eps, t, sched);
  nn::Tape::Id vhat = predict_graph(tp, gp, x_t, t, ts);
  nn::Tape::Id target = tp.constant(nn::Tensor(std::int64_t(v.size()), 1, v));
  nn::Tape::Id d = tp.sub(vhat, target);
  return tp.mean_all(tp.mul(d, d));
}

std::vector<double> ddim_sample(const Predictor& model, const NoiseSchedule& sched,
                                std::int64_t dim, int n_steps, std::uint64_t seed) {
  if (n_steps < 1 || n_steps > sched.T)
    throw std::invalid_argument("ddim_sample: bad step count");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<double> x(static_cast<size_t>(dim));
  for (double& v : x) v = nd(rng);

  // uniform stride sub-schedule T -> 0
  std::vector<int> steps(size_t(n_steps + 1));
  for (int j = 0; j <= n_steps; ++j)
    steps[size_t(j)] = int(std::llround(double(sched.T) * double(n_steps - j) / double(n_steps)));

  for (int j = 0; j < n_steps; ++j) {
    const int t_hi = steps[size_t(j)];
    const int t_lo = steps[size_t(j + 1)];
    const auto v = model(x, t_hi);
    const auto x0 = x0_from_v(x, v, t_hi, sched);
    const auto eps = eps_from_v(x, v, t_hi, sched);
    const double ca = std::sqrt(sched.alpha_bar[size_t(t_lo)]);
    const double cb = std::sqrt(1.0 - sched.alpha_bar[size_t(t_lo)]);
    for (size_t i = 0; i < x.size(); ++i) x[i] = ca * x0[i] + cb * eps[i];
  }
  return x;
}

}  // namespace fsae::diffusion
