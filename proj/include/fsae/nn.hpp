#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace fsae::nn {

// Row-major 2-D tensor, f64 throughout (desk scale).
struct Tensor {
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  std::vector<double> v;

  Tensor() = default;
  Tensor(std::int64_t r, std::int64_t c) : rows(r), cols(c), v(size_t(r * c), 0.0) {}
  Tensor(std::int64_t r, std::int64_t c, std::vector<double> data)
      : rows(r), cols(c), v(std::move(data)) {}
  double& at(std::int64_t r, std::int64_t c) { return v[size_t(r * cols + c)]; }
  double at(std::int64_t r, std::int64_t c) const { return v[size_t(r * cols + c)]; }
  std::int64_t size() const { return rows * cols; }
};

// Reverse-mode tape. Build a graph per evaluation, call backward(root) on a
// scalar node, read gradients of leaves.
class Tape {
 public:
  using Id = int;

  Id constant(Tensor t);  // gradient not tracked
  Id leaf(Tensor t);      // gradient tracked

  const Tensor& val(Id id) const { return nodes_[size_t(id)].val; }
  const Tensor& grad(Id id) const { return nodes_[size_t(id)].grad; }

  Id add(Id a, Id b);
  Id sub(Id a, Id b);
  Id mul(Id a, Id b);  // elementwise
  Id scale(Id a, double s);
  Id matmul(Id a, Id b);                  // [m,k] x [k,n]
  Id bmm(Id a, Id b, std::int64_t groups);     // [G*m,k] x per-group [G*k,n] -> [G*m,n]
  Id bmm_nt(Id a, Id b, std::int64_t groups);  // [G*m,k] x per-group [G*n,k]^T -> [G*m,n]
  Id add_rowvec(Id x, Id r);              // r is [1,n], broadcast over rows
  Id linear(Id x, Id w, Id b);            // x [m,k], w [n,k], b [1,n] -> x w^T + b
  Id softmax_rows(Id a);
  Id layernorm_rows(Id x, Id gain, Id bias);  // gain/bias [1,n]
  Id gelu(Id a);
  Id concat_cols(const std::vector<Id>& parts);
  Id slice_cols(Id a, std::int64_t c0, std::int64_t c1);
  Id reshape(Id a, std::int64_t r, std::int64_t c);
  Id gather_rows(Id a, std::vector<std::int64_t> idx);  // out row i = in row idx[i]
  Id transpose(Id a);
  Id sum_all(Id a);   // [1,1]
  Id mean_all(Id a);  // [1,1]
  Id sqrt_scalar(Id a);

  void backward(Id root);

  size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor val;
    Tensor grad;
    bool needs_grad = false;
    std::function<void(Tape&)> back;
  };
  std::vector<Node> nodes_;

  Id push(Tensor val, bool needs_grad, std::function<void(Tape&)> back);
  Tensor& g(Id id) { return nodes_[size_t(id)].grad; }
  bool tracked(Id id) const { return nodes_[size_t(id)].needs_grad; }
};

struct MhaParams {
  Tape::Id wq, bq, wk, bk, wv, bv, wo, bo;
};

// Per-head scaled dot-product attention over `groups` equal token blocks,
// concat + output projection. q/k/v are [G*T, d_model]; w* are [d_model,
// d_model], b* are [1, d_model].
Tape::Id multihead_attention(Tape& t, Tape::Id q, Tape::Id k, Tape::Id v,
                             const MhaParams& p, int n_heads, std::int64_t groups = 1);

// ---- parameters and optimization ----

struct Param {
  std::string name;
  Tensor value;
  Tensor grad;
  Tensor adam_m;
  Tensor adam_v;
};

enum class Init { kZero, kOne, kXavier };

class ParamStore {
 public:
  explicit ParamStore(std::uint64_t seed) : seed_(seed) {}

  // Creates the parameter deterministically (seed + name hash) if absent.
  Param& get(const std::string& name, std::int64_t rows, std::int64_t cols, Init init);
  Param* find(const std::string& name);
  bool has(const std::string& name) const { return params_.count(name) != 0; }

  void zero_grad();
  // Standard Adam (beta1=0.9, beta2=0.999, eps=1e-8) with bias correction.
  // Returns false without touching parameters if any gradient is non-finite.
  bool adam_step(int t, double lr);

  std::map<std::string, Param>& all() { return params_; }
  const std::map<std::string, Param>& all() const { return params_; }
  std::uint64_t seed() const { return seed_; }

 private:
  std::map<std::string, Param> params_;
  std::uint64_t seed_;
};

// Binds store parameters to tape leaves for one graph build and routes tape
// gradients back into Param::grad.
class GraphParams {
 public:
  explicit GraphParams(Tape& tape) : tape_(tape) {}
  Tape::Id use(Param& p);
  void accumulate_grads(double scale = 1.0);

 private:
  Tape& tape_;
  std::vector<std::pair<Param*, Tape::Id>> bound_;
};

struct TrainConfig {
  double base_lr = 1e-3;
  int warmup_iters = 2000;
  int max_iters = 30000;
  int batch_size = 8;
  int d_model = 512;
  int d_head = 16;
};

// Linear warmup to base_lr, then cosine annealing to zero at max_iters.
double lr_schedule(int iter, const TrainConfig& cfg);

}  // namespace fsae::nn
