#include "fsae/model.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "fsae/threads.hpp"

#include "fsae/sphharm.hpp"

namespace fsae::model {

using nn::Tape;

void FsaeConfig::validate() const {
  if (z_r.empty()) throw std::invalid_argument("fsae config: empty residual level set");
  if (z_c >= z_r.front()) throw std::invalid_argument("fsae config: z_c must be below residuals");
  if (z_r.back() != z_max) throw std::invalid_argument("fsae config: max residual must equal z_max");
  if (z_b >= z_max || z_b <= z_c) throw std::invalid_argument("fsae config: z_b out of range");
  if (d_model % d_head != 0) throw std::invalid_argument("fsae config: d_model % d_head != 0");
  for (size_t i = 1; i < z_r.size(); ++i)
    if (z_r[i] != z_r[i - 1] + 1) throw std::invalid_argument("fsae config: residuals not contiguous");
}

nn::Tape::Id build_patches(Tape& t, const TapeState& s, const PatchSpec& spec) {
  std::vector<Tape::Id> parts;
  parts.reserve(spec.levels.size());
  const std::int64_t tokens = spec.tokens();
  for (int z : spec.levels) {
    Tape::Id node;
    int z_field;
    if (z == s.z_base) {
      node = s.base;
      z_field = s.z_base;
    } else {
      auto it = s.residuals.find(z);
      if (it == s.residuals.end()) throw std::invalid_argument("build_patches: missing level");
      node = it->second;
      z_field = z;
    }
    if (z_field >= spec.z_p) {
      parts.push_back(t.reshape(node, tokens, chan_per_level(z_field, spec.z_p)));
    } else {
      std::vector<std::int64_t> idx(static_cast<size_t>(tokens));
      const int shift = 2 * (spec.z_p - z_field);
      for (std::int64_t i = 0; i < tokens; ++i) idx[size_t(i)] = i >> shift;
      parts.push_back(t.gather_rows(node, std::move(idx)));
    }
  }
  return t.concat_cols(parts);
}

nn::Tape::Id scatter_patches(Tape& t, Tape::Id patch, int z_target, int z_p) {
  const std::int64_t c = t.val(patch).cols;
  if (c != chan_per_level(z_target, z_p))
    throw std::invalid_argument("scatter_patches: channel count mismatch");
  return t.reshape(patch, healpix::npix(z_target), 1);
}

nn::Tape::Id scale_conserve_node(Tape& t, Tape::Id field, int z, int group_level) {
  const std::int64_t groups = healpix::npix(group_level);
  const std::int64_t gsz = std::int64_t{1} << (2 * (z - group_level));
  Tape::Id mat = t.reshape(field, groups, gsz);
  Tape::Id ones_col = t.constant(nn::Tensor(gsz, 1, std::vector<double>(size_t(gsz), 1.0)));
  Tape::Id mean = t.scale(t.matmul(mat, ones_col), 1.0 / double(gsz));  // [groups,1]
  Tape::Id ones_row = t.constant(nn::Tensor(1, gsz, std::vector<double>(size_t(gsz), 1.0)));
  Tape::Id centered = t.sub(mat, t.matmul(mean, ones_row));
  return t.reshape(centered, groups * gsz, 1);
}

FsaeModel::FsaeModel(FsaeConfig cfg) : cfg_(std::move(cfg)), params_(cfg_.seed) {
  cfg_.validate();
}

int FsaeModel::patch_zoom(int z_top) const { return std::max(cfg_.z_c, z_top - cfg_.patch_cap); }

PatchSpec FsaeModel::spec_for(const TapeState& s) const {
  PatchSpec spec;
  spec.z_p = patch_zoom(s.z_top());
  for (auto it = s.residuals.rbegin(); it != s.residuals.rend(); ++it)
    spec.levels.push_back(it->first);
  spec.levels.push_back(s.z_base);
  return spec;
}

nn::Tape::Id FsaeModel::position_embedding(Tape& t, nn::GraphParams& gp, int z_tok,
                                           const std::string& prefix) const {
  const int z_basis = std::min(z_tok, cfg_.emb_level);
  const int nb = sphharm::basis_count(cfg_.emb_degree);
  auto basis = sphharm::basis_matrix(z_basis, cfg_.emb_degree);
  Tape::Id b = t.constant(nn::Tensor(healpix::npix(z_basis), nb, std::move(basis)));
  if (z_tok > cfg_.emb_level) {  // finer token grids inherit the ancestor's embedding
    std::vector<std::int64_t> idx(size_t(healpix::npix(z_tok)));
    const int shift = 2 * (z_tok - cfg_.emb_level);
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = std::int64_t(i) >> shift;
    b = t.gather_rows(b, std::move(idx));
  }
  nn::Param& w = params_.get(prefix + "/emb_w", cfg_.d_model, nb, nn::Init::kXavier);
  return t.bmm_nt(b, gp.use(w), 1);  // [tokens, d_model]
}

TapeState FsaeModel::attention_block(Tape& t, nn::GraphParams& gp, const TapeState& s,
                                     const std::string& prefix) const {
  const PatchSpec spec = spec_for(s);
  const std::int64_t c_in = spec.c_in();
  const int d = cfg_.d_model;
  const int heads = d / cfg_.d_head;

  Tape::Id patches = build_patches(t, s, spec);
  auto P = [&](const std::string& n, std::int64_t r, std::int64_t c, nn::Init i) {
    return gp.use(params_.get(prefix + "/" + n, r, c, i));
  };
  Tape::Id lifted = t.linear(patches, P("lift_w", d, c_in, nn::Init::kXavier),
                             P("lift_b", 1, d, nn::Init::kZero));
  Tape::Id x0 = t.add(lifted, position_embedding(t, gp, spec.z_p, prefix));

  nn::MhaParams mha;
  mha.wq = P("wq", d, d, nn::Init::kXavier);
  mha.bq = P("bq", 1, d, nn::Init::kZero);
  mha.wk = P("wk", d, d, nn::Init::kXavier);
  mha.bk = P("bk", 1, d, nn::Init::kZero);
  mha.wv = P("wv", d, d, nn::Init::kXavier);
  mha.bv = P("bv", 1, d, nn::Init::kZero);
  mha.wo = P("wo", d, d, nn::Init::kZero);  // block is the identity at init
  mha.bo = P("bo", 1, d, nn::Init::kZero);

  Tape::Id n1 = t.layernorm_rows(x0, P("ln1_g", 1, d, nn::Init::kOne),
                                 P("ln1_b", 1, d, nn::Init::kZero));
  Tape::Id h1 = t.add(x0, nn::multihead_attention(t, n1, n1, n1, mha, heads));
  Tape::Id n2 = t.layernorm_rows(h1, P("ln2_g", 1, d, nn::Init::kOne),
                                 P("ln2_b", 1, d, nn::Init::kZero));
  Tape::Id ff = t.linear(t.gelu(t.linear(n2, P("ffn1_w", 4 * d, d, nn::Init::kXavier),
                                         P("ffn1_b", 1, 4 * d, nn::Init::kZero))),
                         P("ffn2_w", d, 4 * d, nn::Init::kZero),
                         P("ffn2_b", 1, d, nn::Init::kZero));
  Tape::Id h2 = t.add(h1, ff);

  // Residual path at patch level: delta of the token stack projected back to
  // channels. Base channels are read-only conditioning; deltas land on the
  // residual levels only.
  Tape::Id delta_tok = t.sub(h2, x0);
  Tape::Id delta = t.bmm_nt(delta_tok, P("proj_w", c_in, d, nn::Init::kXavier), 1);

  TapeState out = s;
  std::int64_t off = 0;
  for (int z : spec.levels) {
    const std::int64_t c = chan_per_level(z == s.z_base ? s.z_base : z, spec.z_p);
    if (z != s.z_base) {
      Tape::Id dz = t.slice_cols(delta, off, off + c);
      out.residuals[z] = t.add(s.residuals.at(z), scatter_patches(t, dz, z, spec.z_p));
    }
    off += c;
  }
  return out;
}

void FsaeModel::warm_start_compress(nn::Param& w, const PatchSpec& spec, int z_down) const {
  // near an averaging map: each output channel is the mean of its 4 child
  // channels at the consumed top level, plus a pass-through of the existing
  // target-level channel when present.
  const int z_top = spec.levels.front();
  std::int64_t off = 0;
  std::int64_t off_top = -1, off_down = -1;
  for (int z : spec.levels) {
    if (z == z_top) off_top = off;
    if (z == z_down) off_down = off;
    off += chan_per_level(z, spec.z_p);
  }
  const std::int64_t c_out = w.value.rows;
  for (std::int64_t j = 0; j < c_out; ++j) {
    for (std::int64_t i = 0; i < 4; ++i) w.value.at(j, off_top + 4 * j + i) += 0.25;
    if (off_down >= 0) w.value.at(j, off_down + j) += 1.0;
  }
}

TapeState FsaeModel::compress_block(Tape& t, nn::GraphParams& gp, const TapeState& s,
                                    const std::string& prefix) const {
  const PatchSpec spec = spec_for(s);
  const int z_top = s.z_top();
  const int z_down = z_top - 1;
  const std::int64_t c_out = chan_per_level(z_down, spec.z_p);

  const std::string wname = prefix + "/w";
  const bool fresh = !params_.has(wname);
  nn::Param& w = params_.get(wname, c_out, spec.c_in(), nn::Init::kZero);
  if (fresh) warm_start_compress(w, spec, z_down);
  nn::Param& b = params_.get(prefix + "/b", 1, c_out, nn::Init::kZero);

  Tape::Id patches = build_patches(t, s, spec);
  Tape::Id out = t.linear(patches, gp.use(w), gp.use(b));

  TapeState next;
  next.base = s.base;
  next.z_base = s.z_base;
  for (const auto& [z, r] : s.residuals)
    if (z < z_down) next.residuals[z] = r;  // forwarded unchanged; z_top removed
  next.residuals[z_down] = scatter_patches(t, out, z_down, spec.z_p);
  return next;
}

TapeState FsaeModel::decompress_block(Tape& t, nn::GraphParams& gp, const TapeState& s,
                                      const std::string& prefix) const {
  const int z_up = s.z_top() + 1;
  PatchSpec spec = spec_for(s);
  spec.z_p = std::max(cfg_.z_c, z_up - cfg_.patch_cap);
  const std::int64_t c_out = chan_per_level(z_up, spec.z_p);

  nn::Param& w = params_.get(prefix + "/w", c_out, spec.c_in(), nn::Init::kZero);
  nn::Param& b = params_.get(prefix + "/b", 1, c_out, nn::Init::kZero);

  Tape::Id patches = build_patches(t, s, spec);
  Tape::Id out = t.linear(patches, gp.use(w), gp.use(b));

  TapeState next = s;  // all levels at or below z_top pass through unchanged
  next.residuals[z_up] = scatter_patches(t, out, z_up, spec.z_p);
  return next;
}

TapeState FsaeModel::encode_graph(Tape& t, nn::GraphParams& gp,
                                  const multiscale::MultiScaleState& s) const {
  TapeState st;
  st.z_base = s.base.z;
  st.base = t.constant(nn::Tensor(std::int64_t(s.base.values.size()), 1, s.base.values));
  for (const auto& [z, r] : s.residuals)
    st.residuals[z] = t.constant(nn::Tensor(std::int64_t(r.values.size()), 1, r.values));

  const int n = cfg_.n_stages();
  for (int k = 0; k < n; ++k) {
    const std::string sp = "enc/s" + std::to_string(k);
    st = attention_block(t, gp, st, sp + "/att0");
    st = attention_block(t, gp, st, sp + "/att1");
    st = compress_block(t, gp, st, sp + "/comp");
  }
  st = attention_block(t, gp, st, "bott/att0");
  st = attention_block(t, gp, st, "bott/att1");
  return st;
}

TapeState FsaeModel::decode_graph(Tape& t, nn::GraphParams& gp, const TapeState& bottleneck) const {
  TapeState st = bottleneck;
  st = attention_block(t, gp, st, "bott/att2");
  st = attention_block(t, gp, st, "bott/att3");
  const int n = cfg_.n_stages();
  for (int k = 0; k < n; ++k) {
    const std::string sp = "dec/s" + std::to_string(k);
    st = attention_block(t, gp, st, sp + "/att0");
    st = attention_block(t, gp, st, sp + "/att1");
    st = decompress_block(t, gp, st, sp + "/dec");
  }
  // re-enforce the scale-conservative hierarchy
  int prev = cfg_.z_c;
  for (auto& [z, r] : st.residuals) {
    r = scale_conserve_node(t, r, z, prev);
    prev = z;
  }
  return st;
}

nn::Tape::Id FsaeModel::reconstruct_graph(Tape& t, const TapeState& s) const {
  const int z_top = s.z_top();
  auto lift = [&](Tape::Id node, int z_from) {
    if (z_from == z_top) return node;
    std::vector<std::int64_t> idx(size_t(healpix::npix(z_top)));
    const int shift = 2 * (z_top - z_from);
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = std::int64_t(i) >> shift;
    return t.gather_rows(node, std::move(idx));
  };
  Tape::Id acc = lift(s.base, s.z_base);
  for (const auto& [z, r] : s.residuals) acc = t.add(acc, lift(r, z));
  return acc;
}

nn::Tape::Id FsaeModel::sqmean_graph(Tape& t, nn::GraphParams& gp, const Field& x) const {
  std::set<int> zr(cfg_.z_r.begin(), cfg_.z_r.end());
  const auto ms = multiscale::decompose(x, cfg_.z_c, zr);
  TapeState enc = encode_graph(t, gp, ms);
  TapeState dec = decode_graph(t, gp, enc);
  Tape::Id xhat = reconstruct_graph(t, dec);
  Tape::Id target = t.constant(nn::Tensor(std::int64_t(x.values.size()), 1, x.values));
  Tape::Id d = t.sub(xhat, target);
  return t.mean_all(t.mul(d, d));
}

nn::Tape::Id FsaeModel::loss_graph(Tape& t, nn::GraphParams& gp,
                                   const std::vector<Field>& batch) const {
  std::vector<Tape::Id> sq_means;
  for (const Field& x : batch) sq_means.push_back(sqmean_graph(t, gp, x));
  Tape::Id total = sq_means[0];
  for (size_t i = 1; i < sq_means.size(); ++i) total = t.add(total, sq_means[i]);
  return t.sqrt_scalar(t.scale(total, 1.0 / double(sq_means.size())));
}

CompressedState FsaeModel::encode(const Field& x) const {
  std::set<int> zr(cfg_.z_r.begin(), cfg_.z_r.end());
  return encode_state(multiscale::decompose(x, cfg_.z_c, zr));
}

CompressedState FsaeModel::encode_state(const multiscale::MultiScaleState& s) const {
  Tape t;
  nn::GraphParams gp(t);
  TapeState enc = encode_graph(t, gp, s);
  CompressedState c;
  c.base = s.base;
  c.code.z = cfg_.z_b;
  c.code.values = t.val(enc.residuals.at(cfg_.z_b)).v;
  c.code.variable = s.base.variable;
  c.code.units = "scaled";
  c.code.timestamp = s.base.timestamp;
  return c;
}

Field FsaeModel::decode(const CompressedState& c) const {
  if (c.code.z != cfg_.z_b || c.base.z != cfg_.z_c)
    throw std::invalid_argument("decode: compressed state levels do not match config");
  Tape t;
  nn::GraphParams gp(t);
  TapeState st;
  st.z_base = c.base.z;
  st.base = t.constant(nn::Tensor(std::int64_t(c.base.values.size()), 1, c.base.values));
  st.residuals[cfg_.z_b] =
      t.constant(nn::Tensor(std::int64_t(c.code.values.size()), 1, c.code.values));
  TapeState dec = decode_graph(t, gp, st);
  Tape::Id xhat = reconstruct_graph(t, dec);
  Field out;
  out.z = cfg_.z_max;
  out.values = t.val(xhat).v;
  out.variable = c.base.variable;
  out.units = c.base.units;
  out.timestamp = c.base.timestamp;
  return out;
}

double FsaeModel::zero_weight_baseline(const std::vector<Field>& dataset) const {
  double num = 0.0;
  std::int64_t count = 0;
  for (const Field& x : dataset) {
    const Field base = multiscale::downsample_avg(x, cfg_.z_c);
    const Field up = multiscale::broadcast(base, cfg_.z_max);
    for (size_t i = 0; i < x.values.size(); ++i) {
      const double d = x.values[i] - up.values[i];
      num += d * d;
      ++count;
    }
  }
  return std::sqrt(num / double(count));
}

TrainResult FsaeModel::train(const std::vector<Field>& dataset, const nn::TrainConfig& tc,
                             const std::function<void(int, double)>& on_iter) {
  if (dataset.empty()) throw std::invalid_argument("train: empty dataset");
  TrainResult res;
  res.baseline_rmse = zero_weight_baseline(dataset);
  res.loss_trace.reserve(size_t(tc.max_iters));
  {
    // Materialize every parameter once so the per-field graph builds below
    // only read the store and can safely run concurrently.
    Tape t0;
    nn::GraphParams gp0(t0);
    (void)sqmean_graph(t0, gp0, dataset[0]);
  }
  size_t cursor = 0;
  for (int it = 1; it <= tc.max_iters; ++it) {
    std::vector<Field> batch;
    if (int(dataset.size()) <= tc.batch_size) {
      batch = dataset;
    } else {
      for (int i = 0; i < tc.batch_size; ++i)
        batch.push_back(dataset[(cursor + size_t(i)) % dataset.size()]);
      cursor = (cursor + size_t(tc.batch_size)) % dataset.size();
    }
    const size_t n = batch.size();
    std::vector<std::unique_ptr<Tape>> tapes(n);
    std::vector<std::unique_ptr<nn::GraphParams>> gps(n);
    std::vector<double> sq(n);
    threads::parallel_for(0, std::int64_t(n), [&](std::int64_t i, int) {
      tapes[size_t(i)] = std::make_unique<Tape>();
      gps[size_t(i)] = std::make_unique<nn::GraphParams>(*tapes[size_t(i)]);
      Tape::Id sm = sqmean_graph(*tapes[size_t(i)], *gps[size_t(i)], batch[size_t(i)]);
      sq[size_t(i)] = tapes[size_t(i)]->val(sm).v[0];
      tapes[size_t(i)]->backward(sm);
    });
    double total = 0.0;
    for (double s : sq) total += s;
    const double lval = std::sqrt(total / double(n));
    if (!std::isfinite(lval))
      throw std::runtime_error("train: non-finite loss at iteration " + std::to_string(it));
    params_.zero_grad();
    // loss = sqrt(sum sq / n), so d(loss)/dθ = Σ d(sq_i)/dθ / (2 n loss).
    const double scale = 1.0 / (2.0 * double(n) * std::max(lval, 1e-12));
    for (auto& gp : gps) gp->accumulate_grads(scale);
    params_.adam_step(it, nn::lr_schedule(it, tc));
    res.loss_trace.push_back(lval);
    res.final_loss = lval;
    if (on_iter) on_iter(it, lval);
  }
  return res;
}

// ---- cross-variable attention ----

CrossVarAttention::CrossVarAttention(int z_b, int n_vars, int d_model, int d_head,
                                     std::uint64_t seed)
    : z_b_(z_b), n_vars_(n_vars), d_model_(d_model), d_head_(d_head), params_(seed) {
  if (d_model % d_head != 0) throw std::invalid_argument("cross-var: d_model % d_head != 0");
}

std::vector<nn::Tape::Id> CrossVarAttention::apply(Tape& t, nn::GraphParams& gp,
                                                   const std::vector<Tape::Id>& codes) const {
  if (int(codes.size()) != n_vars_)
    throw std::invalid_argument("cross-var: inconsistent variable set");
  const std::int64_t np = healpix::npix(z_b_);
  const int d = d_model_;
  auto P = [&](const std::string& n, std::int64_t r, std::int64_t c, nn::Init i) {
    return gp.use(params_.get(n, r, c, i));
  };
  Tape::Id lift_w = P("lift_w", d, 1, nn::Init::kXavier);
  Tape::Id lift_b = P("lift_b", 1, d, nn::Init::kZero);
  Tape::Id var_emb = P("var_emb", n_vars_, d, nn::Init::kXavier);

  std::vector<Tape::Id> lifted;
  for (int v = 0; v < n_vars_; ++v) {
    Tape::Id x = t.linear(codes[size_t(v)], lift_w, lift_b);  // [np, d]
    x = t.add_rowvec(x, t.gather_rows(var_emb, {v}));
    lifted.push_back(x);
  }
  // [np, V*d] -> rows grouped per pixel: [np*V, d]
  Tape::Id tokens = t.reshape(t.concat_cols(lifted), np * n_vars_, d);

  nn::MhaParams mha;
  mha.wq = P("wq", d, d, nn::Init::kXavier);
  mha.bq = P("bq", 1, d, nn::Init::kZero);
  mha.wk = P("wk", d, d, nn::Init::kXavier);
  mha.bk = P("bk", 1, d, nn::Init::kZero);
  mha.wv = P("wv", d, d, nn::Init::kXavier);
  mha.bv = P("bv", 1, d, nn::Init::kZero);
  mha.wo = P("wo", d, d, nn::Init::kXavier);
  mha.bo = P("bo", 1, d, nn::Init::kZero);
  Tape::Id ln_g = P("ln_g", 1, d, nn::Init::kOne);
  Tape::Id ln_b = P("ln_b", 1, d, nn::Init::kZero);
  Tape::Id att = nn::multihead_attention(t, t.layernorm_rows(tokens, ln_g, ln_b),
                                         t.layernorm_rows(tokens, ln_g, ln_b),
                                         t.layernorm_rows(tokens, ln_g, ln_b), mha,
                                         d / d_head_, np);

  // zero-initialized scalar head: exact identity at init
  Tape::Id head_w = P("head_w", 1, d, nn::Init::kZero);
  Tape::Id head_b = P("head_b", 1, 1, nn::Init::kZero);
  Tape::Id delta = t.linear(att, head_w, head_b);        // [np*V, 1]
  Tape::Id per_var = t.reshape(delta, np, n_vars_);      // column v = variable v

  std::vector<Tape::Id> out;
  for (int v = 0; v < n_vars_; ++v)
    out.push_back(t.add(codes[size_t(v)], t.slice_cols(per_var, v, v + 1)));
  return out;
}

std::vector<Field> CrossVarAttention::apply_fields(const std::vector<Field>& codes) const {
  Tape t;
  nn::GraphParams gp(t);
  std::vector<Tape::Id> ids;
  for (const auto& f : codes)
    ids.push_back(t.constant(nn::Tensor(std::int64_t(f.values.size()), 1, f.values)));
  auto out = apply(t, gp, ids);
  std::vector<Field> res = codes;
  for (size_t v = 0; v < res.size(); ++v) res[v].values = t.val(out[v]).v;
  return res;
}

}  // namespace fsae::model
