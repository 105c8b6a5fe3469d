#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fsae/field.hpp"
#include "fsae/nn.hpp"

namespace fsae::diffusion {

// Cumulative signal coefficients alpha_bar[0..T], alpha_bar[0] = 1.
struct NoiseSchedule {
  int T = 0;
  std::vector<double> alpha_bar;
};

// Squared-cosine schedule (s = 0.008), per-step beta clipped at 0.999.
NoiseSchedule cosine_schedule(int T);

// x_t = sqrt(ab)*x0 + sqrt(1-ab)*eps
std::vector<double> q_sample(const std::vector<double>& x0, int t,
                             const std::vector<double>& eps, const NoiseSchedule& s);
// v = sqrt(ab)*eps - sqrt(1-ab)*x0
std::vector<double> v_target(const std::vector<double>& x0, const std::vector<double>& eps,
                             int t, const NoiseSchedule& s);
std::vector<double> x0_from_v(const std::vector<double>& x_t, const std::vector<double>& v,
                              int t, const NoiseSchedule& s);
std::vector<double> eps_from_v(const std::vector<double>& x_t, const std::vector<double>& v,
                               int t, const NoiseSchedule& s);

// ---- conditioning embeddings ----

// Calendar timestamp (days since 1940-01-01) -> day-of-year harmonics plus a
// normalized year scalar. Raw feature vector, before the learned lift.
std::vector<double> timestamp_features(std::int64_t days_since_epoch, int harmonics = 4);
// Standard sinusoidal positional features for the diffusion step.
std::vector<double> step_features(int t, int dim);

// Civil-date helpers for the 1940-01-01 day epoch.
struct CivilDate {
  int year, month, day;
};
CivilDate civil_from_days(std::int64_t days_since_epoch);
std::int64_t days_from_civil(int year, int month, int day);

// ---- backbone ----

// One diffusion state: per-variable base field (z_base) and code field
// (z_code) sharing a step index t.
struct DiffusionState {
  std::map<std::string, Field> base;
  std::map<std::string, Field> code;
  int t = 0;
};

struct BackboneConfig {
  int z_base = 0;
  int z_code = 2;
  int window = 3;  // consecutive daily states
  int d_model = 32;
  int d_head = 8;
  int n_blocks = 2;
  int emb_degree = 4;
  std::vector<std::string> variables = {"tas", "uas", "vas", "ps", "pr"};
  std::uint64_t seed = 0;

  std::int64_t pix_per_state() const {
    return healpix::npix(z_code) + healpix::npix(z_base);
  }
  // flattened layout: [variable][window][code pixels, base pixels]
  std::int64_t flat_dim() const {
    return std::int64_t(variables.size()) * window * pix_per_state();
  }
};

// Factored attention over variable, spatial, and temporal axes with v-output
// heads zero-initialized.
class Backbone {
 public:
  explicit Backbone(BackboneConfig cfg);
  const BackboneConfig& config() const { return cfg_; }
  nn::ParamStore& params() { return params_; }

  // x_t: flattened noisy window (flat_dim), timestamps: one per window step.
  std::vector<double> predict_v(const std::vector<double>& x_t, int t,
                                const std::vector<std::int64_t>& timestamps) const;

  nn::Tape::Id predict_graph(nn::Tape& tp, nn::GraphParams& gp, const std::vector<double>& x_t,
                             int t, const std::vector<std::int64_t>& timestamps) const;
  // MSE on v over one (x0, eps, t) draw.
  nn::Tape::Id loss_graph(nn::Tape& tp, nn::GraphParams& gp, const std::vector<double>& x0,
                          const std::vector<double>& eps, int t,
                          const std::vector<std::int64_t>& timestamps,
                          const NoiseSchedule& sched) const;

  std::vector<double> flatten(const std::vector<DiffusionState>& window) const;
  std::vector<DiffusionState> unflatten(const std::vector<double>& flat,
                                        const std::vector<std::int64_t>& timestamps) const;

 private:
  BackboneConfig cfg_;
  mutable nn::ParamStore params_;
};

// Deterministic DDIM (eta = 0) with a uniform-stride sub-schedule. The
// predictor maps (x_t, t) -> v.
using Predictor = std::function<std::vector<double>(const std::vector<double>&, int)>;

std::vector<double> ddim_sample(const Predictor& model, const NoiseSchedule& sched,
                                std::int64_t dim, int n_steps, std::uint64_t seed);

}  // namespace fsae::diffusion
