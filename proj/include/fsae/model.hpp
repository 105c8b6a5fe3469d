#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "fsae/field.hpp"
#include "fsae/multiscale.hpp"
#include "fsae/nn.hpp"

namespace fsae::model {

// ---- patch algebra ----

// Channels contributed by level z to a patch anchored at z_p:
// 4^(z - z_p) for z >= z_p (children grouped into channels), 1 below
// (ancestor broadcast).
inline std::int64_t chan_per_level(int z, int z_p) {
  return z >= z_p ? (std::int64_t{1} << (2 * (z - z_p))) : 1;
}

struct PatchSpec {
  int z_p = 0;
  std::vector<int> levels;  // channel order: descending residuals first, coarse mean last

  std::int64_t c_in() const {
    std::int64_t c = 0;
    for (int z : levels) c += chan_per_level(z, z_p);
    return c;
  }
  std::int64_t tokens() const { return healpix::npix(z_p); }
};

// Multi-scale state living on a tape: base plus residual node per level.
struct TapeState {
  nn::Tape::Id base{-1};
  int z_base = 0;
  std::map<int, nn::Tape::Id> residuals;  // level -> [npix(level), 1] node

  int z_top() const { return residuals.rbegin()->first; }
};

// Gather the state's levels into a [tokens, C_in] patch tensor. Nested
// ordering makes per-level grouping a plain reshape; ancestor broadcast is a
// row gather.
nn::Tape::Id build_patches(nn::Tape& t, const TapeState& s, const PatchSpec& spec);

// Inverse of the per-level gather: [tokens, C] -> [npix(z_target), 1].
nn::Tape::Id scatter_patches(nn::Tape& t, nn::Tape::Id patch, int z_target, int z_p);

// Differentiable sibling-group mean removal (projection).
nn::Tape::Id scale_conserve_node(nn::Tape& t, nn::Tape::Id field, int z, int group_level);

// ---- model ----

struct CompressedState {
  Field base;  // stored verbatim at z_c
  Field code;  // single-feature field at the bottleneck level z_b
};

struct FsaeConfig {
  int z_max = 8;
  int z_c = 3;
  int z_b = 5;
  std::vector<int> z_r = {6, 7, 8};
  int d_model = 512;
  int d_head = 16;
  int emb_level = 3;   // SH position embeddings configured at this level
  int emb_degree = 8;  // L_emb
  int patch_cap = 5;   // z_P = max(z_c, z_top - patch_cap)
  std::uint64_t seed = 0;

  int n_stages() const { return z_max - z_b; }
  std::int64_t nominal_ratio() const { return std::int64_t{1} << (2 * n_stages()); }
  double effective_ratio() const {
    return double(healpix::npix(z_max)) / double(healpix::npix(z_b) + healpix::npix(z_c));
  }
  void validate() const;
};

struct TrainResult {
  std::vector<double> loss_trace;
  double final_loss = 0.0;
  double baseline_rmse = 0.0;  // zero-weight-decoder baseline on the same data
};

class FsaeModel {
 public:
  explicit FsaeModel(FsaeConfig cfg);

  const FsaeConfig& config() const { return cfg_; }
  nn::ParamStore& params() { return params_; }

  CompressedState encode(const Field& x) const;
  Field decode(const CompressedState& c) const;
  CompressedState encode_state(const multiscale::MultiScaleState& s) const;

  // Graph builders (also used by gradient tests). Training loss is the RMSE
  // between decode(encode(x)) and x.
  TapeState encode_graph(nn::Tape& t, nn::GraphParams& gp,
                         const multiscale::MultiScaleState& s) const;
  TapeState decode_graph(nn::Tape& t, nn::GraphParams& gp, const TapeState& bottleneck) const;
  nn::Tape::Id reconstruct_graph(nn::Tape& t, const TapeState& s) const;
  nn::Tape::Id loss_graph(nn::Tape& t, nn::GraphParams& gp, const std::vector<Field>& batch) const;
  // Mean squared reconstruction error of a single field; the batch loss is
  // sqrt of the average of these terms.
  nn::Tape::Id sqmean_graph(nn::Tape& t, nn::GraphParams& gp, const Field& x) const;

  TrainResult train(const std::vector<Field>& dataset, const nn::TrainConfig& tc,
                    const std::function<void(int, double)>& on_iter = {});

  // RMSE of decoding with all decoder weights ignored (broadcast of base).
  double zero_weight_baseline(const std::vector<Field>& dataset) const;

 private:
  FsaeConfig cfg_;
  mutable nn::ParamStore params_;

  int patch_zoom(int z_top) const;
  PatchSpec spec_for(const TapeState& s) const;
  nn::Tape::Id position_embedding(nn::Tape& t, nn::GraphParams& gp, int z_tok,
                                  const std::string& prefix) const;
  TapeState attention_block(nn::Tape& t, nn::GraphParams& gp, const TapeState& s,
                            const std::string& prefix) const;
  TapeState compress_block(nn::Tape& t, nn::GraphParams& gp, const TapeState& s,
                           const std::string& prefix) const;
  TapeState decompress_block(nn::Tape& t, nn::GraphParams& gp, const TapeState& s,
                             const std::string& prefix) const;
  void warm_start_compress(nn::Param& w, const PatchSpec& spec, int z_down) const;
};

// Cross-variable attention at the bottleneck: attention across the variable
// axis per code pixel, zero-initialized output projection (identity at init).
class CrossVarAttention {
 public:
  CrossVarAttention(int z_b, int n_vars, int d_model, int d_head, std::uint64_t seed);
  nn::ParamStore& params() { return params_; }

  // codes: one [npix(z_b), 1] node per variable, same order every call.
  std::vector<nn::Tape::Id> apply(nn::Tape& t, nn::GraphParams& gp,
                                  const std::vector<nn::Tape::Id>& codes) const;
  std::vector<Field> apply_fields(const std::vector<Field>& codes) const;

 private:
  int z_b_, n_vars_, d_model_, d_head_;
  mutable nn::ParamStore params_;
};

}  // namespace fsae::model
