#include "fsae/nn.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace fsae::nn {

namespace {

void check(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

constexpr double kLnEps = 1e-6;  // layernorm variance floor

}  // namespace

Tape::Id Tape::push(Tensor val, bool needs_grad, std::function<void(Tape&)> back) {
  Node n;
  n.val = std::move(val);
  n.needs_grad = needs_grad;
  if (needs_grad) n.grad = Tensor(n.val.rows, n.val.cols);
  n.back = std::move(back);
  nodes_.push_back(std::move(n));
  return Id(nodes_.size() - 1);
}

Tape::Id Tape::constant(Tensor t) { return push(std::move(t), false, nullptr); }
Tape::Id Tape::leaf(Tensor t) { return push(std::move(t), true, nullptr); }

Tape::Id Tape::add(Id a, Id b) {
  const Tensor& x = val(a);
  const Tensor& y = val(b);
  check(x.rows == y.rows && x.cols == y.cols, "add: shape mismatch");
  Tensor out = x;
  for (std::int64_t i = 0; i < out.size(); ++i) out.v[size_t(i)] += y.v[size_t(i)];
  const bool ng = tracked(a) || tracked(b);
  Id id = push(std::move(out), ng, nullptr);
  if (ng)
    nodes_[size_t(id)].back = [a, b, id](Tape& t) {
      const Tensor& go = t.g(id);
      if (t.tracked(a))
        for (std::int64_t i = 0; i < go.size(); ++i) t.g(a).v[size_t(i)] += go.v[size_t(i)];
      if (t.tracked(b))
        for (std::int64_t i = 0; i < go.size(); ++i) t.g(b).v[size_t(i)] += go.v[size_t(i)];
    };
  return id;
}

Tape::Id Tape::sub(Id a, Id b) { return add(a, scale(b, -1.0)); }

Tape::Id Tape::mul(Id a, Id b) {
  const Tensor& x = val(a);
  const Tensor& y = val(b);
  check(x.rows == y.rows && x.cols == y.cols, "mul: shape mismatch");
  Tensor out = x;
  for (std::int64_t i = 0; i < out.size(); ++i) out.v[size_t(i)] *= y.v[size_t(i)];
  const bool ng = tracked(a) || tracked(b);
  Id id = push(std::move(out), ng, nullptr);
  if (ng)
    nodes_[size_t(id)].back = [a, b, id](Tape& t) {
      const Tensor& go = t.g(id);
      if (t.tracked(a))
        for (std::int64_t i = 0; i < go.size(); ++i)
          t.g(a).v[size_t(i)] += go.v[size_t(i)] * t.val(b).v[size_t(i)];
      if (t.tracked(b))
        for (std::int64_t i = 0; i < go.size(); ++i)
          t.g(b).v[size_t(i)] += go.v[size_t(i)] * t.val(a).v[size_t(i)];
    };
  return id;
}

Tape::Id Tape::scale(Id a, double s) {
  Tensor out = val(a);
  for (double& x : out.v) x *= s;
  const bool ng = tracked(a);
  Id id = push(std::move(out), ng, nullptr);
  if (ng)
    nodes_[size_t(id)].back = [a, s, id](Tape& t) {
      const Tensor& go = t.g(id);
      for (std::int64_t i = 0; i < go.size(); ++i) t.g(a).v[size_t(i)] += s * go.v[size_t(i)];
    };
  return id;
}

namespace {

// c += a[m,k] * b[k,n] (optionally b transposed as [n,k])
void gemm_acc(const double* a, const double* b, double* c, std::int64_t m, std::int64_t k,
              std::int64_t n, bool bt) {
  if (bt) {
    for (std::int64_t i = 0; i < m; ++i)
      for (std::int64_t j = 0; j < n; ++j) {
        const double* br = b + j * k;
        double s = 0.0;
        for (std::int64_t q = 0; q < k; ++q) s += a[i * k + q] * br[q];
        c[i * n + j] += s;
      }
  } else {
    for (std::int64_t i = 0; i < m; ++i)
      for (std::int64_t q = 0; q < k; ++q) {
        const double av = a[i * k + q];
        if (av == 0.0) continue;
        const double* br = b + q * n;
        double* cr = c + i * n;
        for (std::int64_t j = 0; j < n; ++j) cr[j] += av * br[j];
      }
  }
}

// c += a^T[k,m] * b[k,n]  (a stored [k,m])
void gemm_tn_acc(const double* a, const double* b, double* c, std::int64_t k, std::int64_t m,
                 std::int64_t n) {
  for (std::int64_t q = 0; q < k; ++q)
    for (std::int64_t i = 0; i < m; ++i) {
      const double av = a[q * m + i];
      if (av == 0.0) continue;
      for (std::int64_t j = 0; j < n; ++j) c[i * n + j] += av * b[q * n + j];
    }
}

}  // namespace

Tape::Id Tape::matmul(Id a, Id b) { return bmm(a, b, 1); }

Tape::Id Tape::bmm(Id a, Id b, std::int64_t groups) {
  const Tensor& x = val(a);
  const Tensor& y = val(b);
  check(x.rows % groups == 0 && y.rows % groups == 0, "bmm: rows not divisible by groups");
  const std::int64_t m = x.rows / groups, k = x.cols, n = y.cols;
  check(y.rows / groups == k, "bmm: inner dimension mismatch");
  Tensor out(groups * m, n);
  for (std::int64_t gi = 0; gi < groups; ++gi)
    gemm_acc(x.v.data() + gi * m * k, y.v.data() + gi * k * n, out.v.data() + gi * m * n, m, k, n,
             false);
  const bool ng = tracked(a) || tracked(b);
  Id id = push(std::move(out), ng, nullptr);
  if (ng)
    nodes_[size_t(id)].back = [a, b, groups, m, k, n, id](Tape& t) {
      const Tensor& go = t.g(id);
      for (std::int64_t gi = 0; gi < groups; ++gi) {
        const double* gop = go.v.data() + gi * m * n;
        if (t.tracked(a))  // dA = dC * B^T
          gemm_acc(gop, t.val(b).v.data() + gi * k * n, t.g(a).v.data() + gi * m * k, m, n, k,
                   true);
        if (t.tracked(b))  // dB = A^T * dC
          gemm_tn_acc(t.val(a).v.data() + gi * m * k, gop, t.g(b).v.data() + gi * k * n, m, k, n);
      }
    };
  return id;
}

Tape::Id Tape::bmm_nt(Id a, Id b, std::int64_t groups) {
  const Tensor& x = val(a);
  const Tensor& y = val(b);
  check(x.rows % groups == 0 && y.rows % groups == 0, "bmm_nt: rows not divisible by groups");
  const std::int64_t m = x.rows / groups, k = x.cols, n = y.rows / groups;
  check(y.cols == k, "bmm_nt: inner dimension mismatch");
  Tensor out(groups * m, n);
  for (std::int64_t gi = 0; gi < groups; ++gi)
    gemm_acc(x.v.data() + gi * m * k, y.v.data() + gi * n * k, out.v.data() + gi * m * n, m, k, n,
             true);
  const bool ng = tracked(a) || tracked(b);
  Id id = push(std::move(out), ng, nullptr);
  if (ng)
    nodes_[size_t(id)].back = [a, b, groups, m, k, n, id](Tape& t) {
      const Tensor& go = t.g(id);
      for (std::int64_t gi = 0; gi < groups; ++gi) {
        const double* gop = go.v.data() + gi * m * n;
        if (t.tracked(a))  // dA = dC * B
          gemm_acc(gop, t.val(b).v.data() + gi * n * k, t.g(a).v.data() + gi * m * k, m, n, k,
                   false);
        if (t.tracked(b))  // dB = dC^T * A
          gemm_tn_acc(gop, t.val(a).v.data() + gi * m * k, t.g(b).v.data() + gi * n * k, m, n, k);
      }
    };
  return id;
}

Tape::Id Tape::add_rowvec(Id x, Id r) {
  const Tensor& a = val(x);
  const Tensor& b = val(r);
  check(b.rows == 1 && b.cols == a.cols, "add_rowvec: shape mismatch");
  Tensor out = a;
  for (std::int64_t i = 0; i < a.rows; ++i)
    for (std::int64_t j = 0; j < a.cols; ++j) out.at(i, j) += b.at(0, j);
  const bool ng = tracked(x) || tracked(r);
  Id id = push(std::move(out), ng, nullptr);
  if (ng)
    nodes_[size_t(id)].back = [x, r, id](Tape& t) {
      const Tensor& go = t.g(id);
      if (t.tracked(x))
        for (std::int64_t i = 0; i < go.size(); ++i) t.g(x).v[size_t(i)] += go.v[size_t(i)];
      if (t.tracked(r))
        for (std::int64_t i = 0; i < go.rows; ++i)
          for (std::int64_t j = 0; j < go.cols; ++j) t.g(r).at(0, j) += go.at(i, j);
    };
  return id;
}

Tape::Id Tape::linear(Id x, Id w, Id b) { return add_rowvec(bmm_nt(x, w, 1), b); }

Tape::Id Tape::softmax_rows(Id a) {
  const Tensor& x = val(a);
  Tensor out = x;
  for (std::int64_t i = 0; i < x.rows; ++i) {
    double mx = -1e300;
    for (std::int64_t j = 0; j < x.cols; ++j) mx = std::max(mx, x.at(i, j));
    double s = 0.0;
    for (std::int64_t j = 0; j < x.cols; ++j) {
      out.at(i, j) = std::exp(x.at(i, j) - mx);
      s += out.at(i, j);
    }
    for (std::int64_t j = 0; j < x.cols; ++j) out.at(i, j) /= s;
  }
  const bool ng = tracked(a);
  Id id = push(std::move(out), ng, nullptr);
  if (ng)
    nodes_[size_t(id)].back = [a, id](Tape& t) {
      const Tensor& y = t.val(id);
      const Tensor& go = t.g(id);
      for (std::int64_t i = 0; i < y.rows; ++i) {
        double dot = 0.0;
        for (std::int64_t j = 0; j < y.cols; ++j) dot += go.at(i, j) * y.at(i, j);
        for (std::int64_t j = 0; j < y.cols; ++j)
          t.g(a).at(i, j) += y.at(i, j) * (go.at(i, j) - dot);
      }
    };
  return id;
}

Tape::Id Tape::layernorm_rows(Id x, Id gain, Id bias) {
  const Tensor& a = val(x);
  const Tensor& gn = val(gain);
  const Tensor& bs = val(bias);
  check(gn.rows == 1 && gn.cols == a.cols && bs.rows == 1 && bs.cols == a.cols,
        "layernorm: gain/bias shape mismatch");
  Tensor out(a.rows, a.cols);
  Tensor xhat(a.rows, a.cols);
  std::vector<double> inv_sigma(size_t(a.rows));
  for (std::int64_t i = 0; i < a.rows; ++i) {
    double mu = 0.0;
    for (std::int64_t j = 0; j < a.cols; ++j) mu += a.at(i, j);
    mu /= double(a.cols);
    double var = 0.0;
    for (std::int64_t j = 0; j < a.cols; ++j) {
      const double d = a.at(i, j) - mu;
      var += d * d;
    }
    var /= double(a.cols);
    const double is = 1.0 / std::sqrt(var + kLnEps);
    inv_sigma[size_t(i)] = is;
    for (std::int64_t j = 0; j < a.cols; ++j) {
      xhat.at(i, j) = (a.at(i, j) - mu) * is;
      out.at(i, j) = xhat.at(i, j) * gn.at(0, j) + bs.at(0, j);
    }
  }
  const bool ng = tracked(x) || tracked(gain) || tracked(bias);
  Id id = push(std::move(out), ng, nullptr);
  if (ng) {
    auto xh = std::make_shared<Tensor>(std::move(xhat));
    auto is = std::make_shared<std::vector<double>>(std::move(inv_sigma));
    nodes_[size_t(id)].back = [x, gain, bias, id, xh, is](Tape& t) {
      const Tensor& go = t.g(id);
      const Tensor& gn = t.val(gain);
      const std::int64_t n = go.cols;
      for (std::int64_t i = 0; i < go.rows; ++i) {
        if (t.tracked(gain))
          for (std::int64_t j = 0; j < n; ++j)
            t.g(gain).at(0, j) += go.at(i, j) * xh->at(i, j);
        if (t.tracked(bias))
          for (std::int64_t j = 0; j < n; ++j) t.g(bias).at(0, j) += go.at(i, j);
        if (t.tracked(x)) {
          double m1 = 0.0, m2 = 0.0;
          for (std::int64_t j = 0; j < n; ++j) {
            const double gy = go.at(i, j) * gn.at(0, j);
            m1 += gy;
            m2 += gy * xh->at(i, j);
          }
          m1 /= double(n);
          m2 /= double(n);
          for (std::int64_t j = 0; j < n; ++j) {
            const double gy = go.at(i, j) * gn.at(0, j);
            t.g(x).at(i, j) += (gy - m1 - xh->at(i, j) * m2) * (*is)[size_t(i)];
          }
        }
      }
    };
  }
  return id;
}

Tape::Id Tape::gelu(Id a) {
  const Tensor& x = val(a);
  Tensor out = x;
  for (double& v : out.v) v = 0.5 * v * (1.0 + std::erf(v / std::sqrt(2.0)));
  const bool ng = tracked(a);
  Id id = push(std::move(out), ng, nullptr);
  if (ng)
    nodes_[size_t(id)].back = [a, id](Tape& t) {
      const Tensor& x2 = t.val(a);
      const Tensor& go = t.g(id);
      constexpr double inv_sqrt2pi = 0.3989422804014327;
      for (std::int64_t i = 0; i < x2.size(); ++i) {
        const double v = x2.v[size_t(i)];
        const double cdf = 0.5 * (1.0 + std::erf(v / std::sqrt(2.0)));
        const double pdf = inv_sqrt2pi * std::exp(-0.5 * v * v);
        t.g(a).v[size_t(i)] += go.v[size_t(i)] * (cdf + v * pdf);
      }
    };
  return id;
}

Tape::Id Tape::concat_cols(const std::vector<Id>& parts) {
  check(!parts.empty(), "concat_cols: empty");
  const std::int64_t rows = val(parts[0]).rows;
  std::int64_t cols = 0;
  bool ng = false;
  for (Id p : parts) {
    check(val(p).rows == rows, "concat_cols: row mismatch");
    cols += val(p).cols;
    ng = ng || tracked(p);
  }
  Tensor out(rows, cols);
  std::int64_t off = 0;
  for (Id p : parts) {
    const Tensor& x = val(p);
    for (std::int64_t i = 0; i < rows; ++i)
      for (std::int64_t j = 0; j < x.cols; ++j) out.at(i, off + j) = x.at(i, j);
    off += x.cols;
  }
  Id id = push(std::move(out), ng, nullptr);
  if (ng) {
    auto ps = std::make_shared<std::vector<Id>>(parts);
    nodes_[size_t(id)].back = [ps, id](Tape& t) {
      const Tensor& go = t.g(id);
      std::int64_t off2 = 0;
      for (Id p : *ps) {
        const std::int64_t c = t.val(p).cols;
        if (t.tracked(p))
          for (std::int64_t i = 0; i < go.rows; ++i)
            for (std::int64_t j = 0; j < c; ++j) t.g(p).at(i, j) += go.at(i, off2 + j);
        off2 += c;
      }
    };
  }
  return id;
}

Tape::Id Tape::slice_cols(Id a, std::int64_t c0, std::int64_t c1) {
  const Tensor& x = val(a);
  check(0 <= c0 && c0 < c1 && c1 <= x.cols, "slice_cols: bad range");
  Tensor out(x.rows, c1 - c0);
  for (std::int64_t i = 0; i < x.rows; ++i)
    for (std::int64_t j = c0; j < c1; ++j) out.at(i, j - c0) = x.at(i, j);
  const bool ng = tracked(a);
  Id id = push(std::move(out), ng, nullptr);
  if (ng)
    nodes_[size_t(id)].back = [a, c0, c1, id](Tape& t) {
      const Tensor& go = t.g(id);
      for (std::int64_t i = 0; i < go.rows; ++i)
        for (std::int64_t j = c0; j < c1; ++j) t.g(a).at(i, j) += go.at(i, j - c0);
    };
  return id;
}

Tape::Id Tape::reshape(Id a, std::int64_t r, std::int64_t c) {
  const Tensor& x = val(a);
  check(r * c == x.size(), "reshape: element count mismatch");
  Tensor out(r, c, x.v);
  const bool ng = tracked(a);
  Id id = push(std::move(out), ng, nullptr);
  if (ng)
    nodes_[size_t(id)].back = [a, id](Tape& t) {
      const Tensor& go = t.g(id);
      for (std::int64_t i = 0; i < go.size(); ++i) t.g(a).v[size_t(i)] += go.v[size_t(i)];
    };
  return id;
}

Tape::Id Tape::gather_rows(Id a, std::vector<std::int64_t> idx) {
  const Tensor& x = val(a);
  Tensor out(std::int64_t(idx.size()), x.cols);
  for (size_t i = 0; i < idx.size(); ++i) {
    check(idx[i] >= 0 && idx[i] < x.rows, "gather_rows: index out of range");
    for (std::int64_t j = 0; j < x.cols; ++j) out.at(std::int64_t(i), j) = x.at(idx[i], j);
  }
  const bool ng = tracked(a);
  Id id = push(std::move(out), ng, nullptr);
  if (ng) {
    auto ix = std::make_shared<std::vector<std::int64_t>>(std::move(idx));
    nodes_[size_t(id)].back = [a, ix, id](Tape& t) {
      const Tensor& go = t.g(id);
      for (size_t i = 0; i < ix->size(); ++i)
        for (std::int64_t j = 0; j < go.cols; ++j)
          t.g(a).at((*ix)[i], j) += go.at(std::int64_t(i), j);
    };
  }
  return id;
}

Tape::Id Tape::transpose(Id a) {
  const Tensor& x = val(a);
  Tensor out(x.cols, x.rows);
  for (std::int64_t i = 0; i < x.rows; ++i)
    for (std::int64_t j = 0; j < x.cols; ++j) out.at(j, i) = x.at(i, j);
  const bool ng = tracked(a);
  Id id = push(std::move(out), ng, nullptr);
  if (ng)
    nodes_[size_t(id)].back = [a, id](Tape& t) {
      const Tensor& go = t.g(id);
      for (std::int64_t i = 0; i < go.rows; ++i)
        for (std::int64_t j = 0; j < go.cols; ++j) t.g(a).at(j, i) += go.at(i, j);
    };
  return id;
}

Tape::Id Tape::sum_all(Id a) {
  const Tensor& x = val(a);
  Tensor out(1, 1);
  for (double v : x.v) out.v[0] += v;
  const bool ng = tracked(a);
  Id id = push(std::move(out), ng, nullptr);
  if (ng)
    nodes_[size_t(id)].back = [a, id](Tape& t) {
      const double go = t.g(id).v[0];
      for (std::int64_t i = 0; i < t.val(a).size(); ++i) t.g(a).v[size_t(i)] += go;
    };
  return id;
}

Tape::Id Tape::mean_all(Id a) { return scale(sum_all(a), 1.0 / double(val(a).size())); }

Tape::Id Tape::sqrt_scalar(Id a) {
  const Tensor& x = val(a);
  check(x.size() == 1, "sqrt_scalar: expects a scalar");
  Tensor out(1, 1);
  out.v[0] = std::sqrt(x.v[0]);
  const bool ng = tracked(a);
  Id id = push(std::move(out), ng, nullptr);
  if (ng)
    nodes_[size_t(id)].back = [a, id](Tape& t) {
      const double y = t.val(id).v[0];
      if (y > 0.0) t.g(a).v[0] += t.g(id).v[0] * 0.5 / y;
    };
  return id;
}

void Tape::backward(Id root) {
  check(val(root).size() == 1, "backward: root must be a scalar");
  check(tracked(root), "backward: root does not depend on any leaf");
  g(root).v[0] = 1.0;
  for (std::int64_t i = root; i >= 0; --i)
    if (nodes_[size_t(i)].needs_grad && nodes_[size_t(i)].back) nodes_[size_t(i)].back(*this);
}

Tape::Id multihead_attention(Tape& t, Tape::Id q, Tape::Id k, Tape::Id v, const MhaParams& p,
                             int n_heads, std::int64_t groups) {
  const std::int64_t d = t.val(q).cols;
  check(d % n_heads == 0, "mha: d_model not divisible by heads");
  const std::int64_t dh = d / n_heads;
  const Tape::Id qq = t.linear(q, p.wq, p.bq);
  const Tape::Id kk = t.linear(k, p.wk, p.bk);
  const Tape::Id vv = t.linear(v, p.wv, p.bv);
  std::vector<Tape::Id> heads;
  heads.reserve(size_t(n_heads));
  for (int h = 0; h < n_heads; ++h) {
    const Tape::Id qh = t.slice_cols(qq, h * dh, (h + 1) * dh);
    const Tape::Id kh = t.slice_cols(kk, h * dh, (h + 1) * dh);
    const Tape::Id vh = t.slice_cols(vv, h * dh, (h + 1) * dh);
    Tape::Id scores = t.scale(t.bmm_nt(qh, kh, groups), 1.0 / std::sqrt(double(dh)));
    heads.push_back(t.bmm(t.softmax_rows(scores), vh, groups));
  }
  return t.linear(t.concat_cols(heads), p.wo, p.bo);
}

Param& ParamStore::get(const std::string& name, std::int64_t rows, std::int64_t cols, Init init) {
  auto it = params_.find(name);
  if (it != params_.end()) {
    check(it->second.value.rows == rows && it->second.value.cols == cols,
          "param store: shape mismatch for existing parameter");
    return it->second;
  }
  Param p;
  p.name = name;
  p.value = Tensor(rows, cols);
  p.grad = Tensor(rows, cols);
  p.adam_m = Tensor(rows, cols);
  p.adam_v = Tensor(rows, cols);
  if (init == Init::kOne) {
    std::fill(p.value.v.begin(), p.value.v.end(), 1.0);
  } else if (init == Init::kXavier) {
    // deterministic per (seed, name): FNV-1a hash mixed into the seed
    std::uint64_t h = 14695981039346656037ull;
    for (char ch : name) h = (h ^ std::uint64_t(std::uint8_t(ch))) * 1099511628211ull;
    std::mt19937_64 rng(seed_ ^ h);
    const double bound = std::sqrt(6.0 / double(rows + cols));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (double& v : p.value.v) v = dist(rng);
  }
  auto [ins, ok] = params_.emplace(name, std::move(p));
  (void)ok;
  return ins->second;
}

Param* ParamStore::find(const std::string& name) {
  auto it = params_.find(name);
  return it == params_.end() ? nullptr : &it->second;
}

void ParamStore::zero_grad() {
  for (auto& [n, p] : params_) std::fill(p.grad.v.begin(), p.grad.v.end(), 0.0);
}

bool ParamStore::adam_step(int t, double lr) {
  check(t >= 1, "adam: step index must be >= 1");
  constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  for (const auto& [n, p] : params_)
    for (double gv : p.grad.v)
      if (!std::isfinite(gv)) return false;
  const double c1 = 1.0 - std::pow(b1, t);
  const double c2 = 1.0 - std::pow(b2, t);
  for (auto& [n, p] : params_) {
    for (std::int64_t i = 0; i < p.value.size(); ++i) {
      const double gv = p.grad.v[size_t(i)];
      p.adam_m.v[size_t(i)] = b1 * p.adam_m.v[size_t(i)] + (1.0 - b1) * gv;
      p.adam_v.v[size_t(i)] = b2 * p.adam_v.v[size_t(i)] + (1.0 - b2) * gv * gv;
      const double mhat = p.adam_m.v[size_t(i)] / c1;
      const double vhat = p.adam_v.v[size_t(i)] / c2;
      p.value.v[size_t(i)] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
  }
  return true;
}

Tape::Id GraphParams::use(Param& p) {
  const Tape::Id id = tape_.leaf(p.value);
  bound_.emplace_back(&p, id);
  return id;
}

void GraphParams::accumulate_grads(double scale) {
  for (auto& [p, id] : bound_) {
    const Tensor& g = tape_.grad(id);
    for (std::int64_t i = 0; i < g.size(); ++i) p->grad.v[size_t(i)] += scale * g.v[size_t(i)];
  }
}

double lr_schedule(int iter, const TrainConfig& cfg) {
  if (iter <= cfg.warmup_iters)
    return cfg.base_lr * double(iter) / double(cfg.warmup_iters);
  const double frac = double(iter - cfg.warmup_iters) / double(cfg.max_iters - cfg.warmup_iters);
  return cfg.base_lr * 0.5 * (1.0 + std::cos(3.14159265358979323846 * frac));
}

}  // namespace fsae::nn
