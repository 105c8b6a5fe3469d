// fsae: command-line front end for the field-space compression toolkit.
//
// Every subcommand is deterministic given its flags, config, and seed. On
// failure a single machine-parsable line is printed to stderr:
//   FSAE_ERROR code=<n> msg="<text>"
// and the process exits with <n>.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fsae/diffusion.hpp"
#include "fsae/field.hpp"
#include "fsae/healpix.hpp"
#include "fsae/io.hpp"
#include "fsae/metrics.hpp"
#include "fsae/model.hpp"
#include "fsae/multiscale.hpp"
#include "fsae/preprocess.hpp"
#include "fsae/remap.hpp"
#include "fsae/synthetic.hpp"

namespace {

using namespace fsae;

void check_finite(const Field& f, const std::string& origin) {
  for (double v : f.values)
    if (!std::isfinite(v))
      throw io::IoException(io::Error::kNonFinite, "non-finite value in " + origin);
}

Field load_field(const std::string& path) {
  Field f = io::read_field(path);
  check_finite(f, path);
  return f;
}

std::vector<Field> load_fields(const std::vector<std::string>& paths) {
  std::vector<Field> out;
  out.reserve(paths.size());
  for (const auto& p : paths) out.push_back(load_field(p));
  return out;
}

std::set<int> parse_levels(const std::string& csv) {
  std::set<int> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.insert(std::stoi(tok));
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(12);
  ss << v;
  return ss.str();
}

// ---- config <-> model wiring ----

model::FsaeConfig fsae_config_from(const io::RunConfig& cfg) {
  model::FsaeConfig mc;
  mc.z_max = int(cfg.get_int("model.z_max"));
  mc.z_c = int(cfg.get_int("model.z_c"));
  mc.z_b = int(cfg.get_int("model.z_b"));
  mc.z_r.clear();
  for (int z : parse_levels(cfg.get("model.z_r"))) mc.z_r.push_back(z);
  mc.d_model = int(cfg.get_int_or("model.d_model", 512));
  mc.d_head = int(cfg.get_int_or("model.d_head", 16));
  mc.emb_level = int(cfg.get_int_or("model.emb_level", 3));
  mc.emb_degree = int(cfg.get_int_or("model.emb_degree", 8));
  mc.patch_cap = int(cfg.get_int_or("model.patch_cap", 5));
  mc.seed = std::uint64_t(cfg.get_int_or("seed", 0));
  mc.validate();
  return mc;
}

void fsae_config_to(const model::FsaeConfig& mc, io::RunConfig& cfg) {
  cfg.set_int("model.z_max", mc.z_max);
  cfg.set_int("model.z_c", mc.z_c);
  cfg.set_int("model.z_b", mc.z_b);
  std::string zr;
  for (size_t i = 0; i < mc.z_r.size(); ++i)
    zr += (i ? "," : "") + std::to_string(mc.z_r[i]);
  cfg.set("model.z_r", zr);
  cfg.set_int("model.d_model", mc.d_model);
  cfg.set_int("model.d_head", mc.d_head);
  cfg.set_int("model.emb_level", mc.emb_level);
  cfg.set_int("model.emb_degree", mc.emb_degree);
  cfg.set_int("model.patch_cap", mc.patch_cap);
  cfg.set_int("seed", std::int64_t(mc.seed));
}

diffusion::BackboneConfig diff_config_from(const io::RunConfig& cfg) {
  diffusion::BackboneConfig bc;
  bc.z_base = int(cfg.get_int_or("diff.z_base", 0));
  bc.z_code = int(cfg.get_int_or("diff.z_code", 2));
  bc.window = int(cfg.get_int_or("diff.window", 3));
  bc.d_model = int(cfg.get_int_or("diff.d_model", 32));
  bc.d_head = int(cfg.get_int_or("diff.d_head", 8));
  bc.n_blocks = int(cfg.get_int_or("diff.n_blocks", 2));
  bc.emb_degree = int(cfg.get_int_or("diff.emb_degree", 4));
  if (cfg.has("diff.variables")) {
    bc.variables.clear();
    std::stringstream ss(cfg.get("diff.variables"));
    std::string tok;
    while (std::getline(ss, tok, ',')) bc.variables.push_back(tok);
  }
  bc.seed = std::uint64_t(cfg.get_int_or("seed", 0));
  return bc;
}

void diff_config_to(const diffusion::BackboneConfig& bc, io::RunConfig& cfg) {
  cfg.set_int("diff.z_base", bc.z_base);
  cfg.set_int("diff.z_code", bc.z_code);
  cfg.set_int("diff.window", bc.window);
  cfg.set_int("diff.d_model", bc.d_model);
  cfg.set_int("diff.d_head", bc.d_head);
  cfg.set_int("diff.n_blocks", bc.n_blocks);
  cfg.set_int("diff.emb_degree", bc.emb_degree);
  std::string vars;
  for (size_t i = 0; i < bc.variables.size(); ++i)
    vars += (i ? "," : "") + bc.variables[i];
  cfg.set("diff.variables", vars);
  cfg.set_int("seed", std::int64_t(bc.seed));
}

// ---- grid CSV (documented converter contract) ----
// Header row: "lat\lon,<lon0>,<lon1>,..."; each data row: "<lat>,<v0>,<v1>,...".
// Latitudes descending, longitudes ascending, degrees.
metrics::LatLonGrid read_grid_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw io::IoException(io::Error::kOpenFailed, "cannot open grid: " + path);
  metrics::LatLonGrid g;
  std::string line;
  if (!std::getline(is, line))
    throw io::IoException(io::Error::kTruncated, "empty grid file: " + path);
  {
    std::stringstream ss(line);
    std::string tok;
    std::getline(ss, tok, ',');  // corner label
    while (std::getline(ss, tok, ',')) g.longitudes.push_back(std::stod(tok));
  }
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string tok;
    std::getline(ss, tok, ',');
    g.latitudes.push_back(std::stod(tok));
    size_t count = 0;
    while (std::getline(ss, tok, ',')) {
      g.values.push_back(std::stod(tok));
      ++count;
    }
    if (count != g.n_lon())
      throw io::IoException(io::Error::kBadHeader, "ragged grid row in " + path);
  }
  g.validate();
  return g;
}

// ---- shared model loading ----

model::FsaeConfig load_fsae_checkpoint(const std::string& path, model::FsaeModel** out,
                                       std::vector<std::unique_ptr<model::FsaeModel>>& keep) {
  // Two passes: read the config echo first, then re-read weights into a model
  // built from it.
  nn::ParamStore probe(0);
  io::RunConfig cfg = io::read_checkpoint(path, probe);
  model::FsaeConfig mc = fsae_config_from(cfg);
  keep.push_back(std::make_unique<model::FsaeModel>(mc));
  io::read_checkpoint(path, keep.back()->params());
  *out = keep.back().get();
  return mc;
}

// ---- subcommand bodies ----

int cmd_gen_synthetic(int z, int count, double slope, std::uint64_t seed,
                      const std::string& variable, double amplitude, double offset,
                      std::int64_t start_day, const std::string& out_dir) {
  if (slope <= 0.0)
    throw io::IoException(io::Error::kConfigInvalid, "slope must be positive");
  std::filesystem::create_directories(out_dir);
  synth::SynthConfig sc;
  sc.z = z;
  sc.slope = slope;
  sc.seed = seed;
  sc.amplitude = amplitude;
  sc.offset = offset;
  sc.l_max = std::min(12, 2 * (1 << z));
  for (int i = 0; i < count; ++i) {
    Field f = synth::generate(sc, variable, start_day + i);
    std::ostringstream name;
    name << out_dir << "/" << variable << "_d" << (start_day + i) << "_z" << z << ".fsf";
    io::write_field(name.str(), f);
    std::cout << name.str() << "\n";
  }
  return 0;
}

int cmd_decompose(const std::string& input, const std::string& config_path,
                  const std::string& out_dir) {
  io::RunConfig cfg = io::RunConfig::load(config_path);
  Field x = load_field(input);
  const int z_c = int(cfg.get_int("model.z_c"));
  const std::set<int> z_r = parse_levels(cfg.get("model.z_r"));
  multiscale::MultiScaleState s = multiscale::decompose(x, z_c, z_r);
  std::filesystem::create_directories(out_dir);
  io::write_field(out_dir + "/base_z" + std::to_string(z_c) + ".fsf", s.base);
  for (const auto& [z, r] : s.residuals)
    io::write_field(out_dir + "/res_z" + std::to_string(z) + ".fsf", r);
  return 0;
}

int cmd_reconstruct(const std::string& in_dir, const std::string& output) {
  multiscale::MultiScaleState s;
  bool have_base = false;
  std::map<int, Field> residuals;
  for (const auto& entry : std::filesystem::directory_iterator(in_dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("base_z", 0) == 0) {
      s.base = load_field(entry.path().string());
      have_base = true;
    } else if (name.rfind("res_z", 0) == 0) {
      Field r = load_field(entry.path().string());
      residuals[r.z] = std::move(r);
    }
  }
  if (!have_base)
    throw io::IoException(io::Error::kOpenFailed, "no base_z*.fsf in " + in_dir);
  s.residuals = std::move(residuals);
  io::write_field(output, multiscale::reconstruct(s));
  return 0;
}

int cmd_remap(const std::string& grid_path, int z, const std::string& variable,
              std::int64_t timestamp, const std::string& output) {
  metrics::LatLonGrid g = read_grid_csv(grid_path);
  Field f = remap::remap_to_healpix(g, z);
  f.variable = variable;
  f.timestamp = timestamp;
  check_finite(f, "remap output");
  io::write_field(output, f);
  return 0;
}

int cmd_fit_norm(const std::vector<std::string>& inputs, const std::string& output) {
  std::map<std::string, std::vector<double>> by_var;
  for (const auto& p : inputs) {
    Field f = load_field(p);
    auto& v = by_var[f.variable];
    v.insert(v.end(), f.values.begin(), f.values.end());
  }
  io::RunConfig cfg;
  for (const auto& [var, vals] : by_var)
    io::norm_to_config(preprocess::fit_percentiles(vals, var), cfg);
  cfg.save(output);
  return 0;
}

void apply_norm(std::vector<Field>& fields, const io::RunConfig& cfg) {
  for (Field& f : fields) {
    if (!cfg.has("norm." + f.variable + ".p01")) continue;
    const auto s = io::norm_from_config(cfg, f.variable);
    preprocess::scale_inplace(f.values, s);
  }
}

int cmd_train_ae(const std::string& config_path, const std::vector<std::string>& inputs,
                 const std::string& ckpt_out, const std::string& loss_csv) {
  io::RunConfig cfg = io::RunConfig::load(config_path);
  model::FsaeConfig mc = fsae_config_from(cfg);
  std::vector<Field> data = load_fields(inputs);
  apply_norm(data, cfg);
  for (const Field& f : data)
    if (f.z != mc.z_max)
      throw io::IoException(io::Error::kConfigInvalid,
                            "training field level does not match model.z_max");
  nn::TrainConfig tc;
  tc.base_lr = cfg.get_real_or("train.base_lr", 1e-3);
  tc.warmup_iters = int(cfg.get_int_or("train.warmup", 2000));
  tc.max_iters = int(cfg.get_int_or("train.iters", 30000));
  tc.batch_size = int(cfg.get_int_or("train.batch", 8));

  model::FsaeModel m(mc);
  auto res = m.train(data, tc, [](int it, double loss) {
    if (it % 100 == 0) std::cout << "iter " << it << " loss " << loss << "\n";
  });
  io::RunConfig echo = cfg;
  fsae_config_to(mc, echo);
  io::write_checkpoint(ckpt_out, m.params(), echo);
  if (!loss_csv.empty()) {
    std::vector<std::vector<std::string>> rows;
    for (size_t i = 0; i < res.loss_trace.size(); ++i)
      rows.push_back({std::to_string(i), fmt(res.loss_trace[i])});
    io::write_csv(loss_csv, {"iter", "loss"}, rows);
  }
  std::cout << "final_loss " << res.final_loss << " baseline_rmse " << res.baseline_rmse
            << "\n";
  return 0;
}

int cmd_encode(const std::string& ckpt, const std::string& input,
               const std::string& out_base, const std::string& out_code) {
  std::vector<std::unique_ptr<model::FsaeModel>> keep;
  model::FsaeModel* m = nullptr;
  load_fsae_checkpoint(ckpt, &m, keep);
  Field x = load_field(input);
  if (x.z != m->config().z_max)
    throw io::IoException(io::Error::kConfigInvalid, "input level does not match checkpoint");
  model::CompressedState c = m->encode(x);
  io::write_field(out_base, c.base);
  io::write_field(out_code, c.code);
  return 0;
}

int cmd_decode(const std::string& ckpt, const std::string& base_path,
               const std::string& code_path, const std::string& output) {
  std::vector<std::unique_ptr<model::FsaeModel>> keep;
  model::FsaeModel* m = nullptr;
  load_fsae_checkpoint(ckpt, &m, keep);
  model::CompressedState c;
  c.base = load_field(base_path);
  c.code = load_field(code_path);
  if (c.base.z != m->config().z_c || c.code.z != m->config().z_b)
    throw io::IoException(io::Error::kConfigInvalid,
                          "base/code levels do not match checkpoint");
  io::write_field(output, m->decode(c));
  return 0;
}

int cmd_sr(const std::string& ckpt, const std::string& input, const std::string& mask_csv,
           const std::string& output) {
  std::vector<std::unique_ptr<model::FsaeModel>> keep;
  model::FsaeModel* m = nullptr;
  load_fsae_checkpoint(ckpt, &m, keep);
  const auto& mc = m->config();
  Field x = load_field(input);
  if (x.z != mc.z_max)
    throw io::IoException(io::Error::kConfigInvalid, "input level does not match checkpoint");
  const std::set<int> mask = parse_levels(mask_csv);
  for (int z : mask)
    if (std::find(mc.z_r.begin(), mc.z_r.end(), z) == mc.z_r.end())
      throw io::IoException(io::Error::kConfigInvalid,
                            "mask level " + std::to_string(z) + " is not a residual level");
  std::set<int> z_r(mc.z_r.begin(), mc.z_r.end());
  auto s = multiscale::decompose(x, mc.z_c, z_r);
  auto masked = multiscale::mask_residuals(s, mask);
  model::CompressedState c = m->encode_state(masked);
  Field y = m->decode(c);
  y.variable = x.variable;
  y.timestamp = x.timestamp;
  io::write_field(output, y);
  return 0;
}

// Groups input FieldFiles into per-timestamp diffusion states.
std::vector<diffusion::DiffusionState> collect_states(const std::vector<Field>& fields,
                                                      const diffusion::BackboneConfig& bc) {
  std::map<std::int64_t, diffusion::DiffusionState> by_day;
  for (const Field& f : fields) {
    if (f.z == bc.z_code)
      by_day[f.timestamp].code[f.variable] = f;
    else if (f.z == bc.z_base)
      by_day[f.timestamp].base[f.variable] = f;
    else
      throw io::IoException(io::Error::kConfigInvalid,
                            "field level matches neither diff.z_code nor diff.z_base");
  }
  std::vector<diffusion::DiffusionState> out;
  for (auto& [day, st] : by_day) {
    for (const auto& var : bc.variables)
      if (!st.code.count(var) || !st.base.count(var))
        throw io::IoException(io::Error::kConfigInvalid,
                              "day " + std::to_string(day) + " missing variable " + var);
    out.push_back(std::move(st));
  }
  return out;
}

std::vector<std::int64_t> window_timestamps(const std::vector<diffusion::DiffusionState>& w,
                                            const diffusion::BackboneConfig& bc) {
  std::vector<std::int64_t> ts;
  for (const auto& st : w) ts.push_back(st.code.at(bc.variables.front()).timestamp);
  return ts;
}

int cmd_train_diff(const std::string& config_path, const std::vector<std::string>& inputs,
                   const std::string& ckpt_out, const std::string& loss_csv) {
  io::RunConfig cfg = io::RunConfig::load(config_path);
  diffusion::BackboneConfig bc = diff_config_from(cfg);
  std::vector<Field> fields = load_fields(inputs);
  apply_norm(fields, cfg);
  auto states = collect_states(fields, bc);
  if (int(states.size()) < bc.window)
    throw io::IoException(io::Error::kConfigInvalid, "need at least diff.window states");

  const int T = int(cfg.get_int_or("diff.T", 1000));
  const int iters = int(cfg.get_int_or("train.iters", 200));
  nn::TrainConfig tc;
  tc.base_lr = cfg.get_real_or("train.base_lr", 1e-3);
  tc.warmup_iters = int(cfg.get_int_or("train.warmup", 20));
  tc.max_iters = iters;

  diffusion::Backbone bb(bc);
  diffusion::NoiseSchedule sched = diffusion::cosine_schedule(T);
  std::mt19937_64 rng(bc.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> pick_t(1, T);
  std::uniform_int_distribution<size_t> pick_w(0, states.size() - size_t(bc.window));

  std::vector<std::vector<std::string>> rows;
  int step = 0;
  for (int it = 0; it < iters; ++it) {
    const size_t w0 = pick_w(rng);
    std::vector<diffusion::DiffusionState> window(states.begin() + std::ptrdiff_t(w0),
                                                 states.begin() + std::ptrdiff_t(w0) +
                                                     bc.window);
    std::vector<double> x0 = bb.flatten(window);
    std::vector<double> eps(x0.size());
    for (double& e : eps) e = gauss(rng);
    const int t = pick_t(rng);

    nn::Tape tape;
    nn::GraphParams gp(tape);
    nn::Tape::Id loss = bb.loss_graph(tape, gp, x0, eps, t, window_timestamps(window, bc),
                                      sched);
    tape.backward(loss);
    gp.accumulate_grads(1.0);
    const double lv = tape.val(loss).v[0];
    ++step;
    if (!bb.params().adam_step(step, nn::lr_schedule(it, tc)))
      std::cerr << "warning: non-finite gradients at iter " << it << ", step skipped\n";
    bb.params().zero_grad();
    rows.push_back({std::to_string(it), fmt(lv)});
    if (it % 20 == 0) std::cout << "iter " << it << " loss " << lv << "\n";
  }
  io::RunConfig echo = cfg;
  diff_config_to(bc, echo);
  echo.set_int("diff.T", T);
  io::write_checkpoint(ckpt_out, bb.params(), echo);
  if (!loss_csv.empty()) io::write_csv(loss_csv, {"iter", "loss"}, rows);
  return 0;
}

int cmd_sample(const std::string& ckpt, int members, std::uint64_t seed, int ddim_steps,
               std::int64_t start_day, const std::string& out_dir,
               const std::string& std_csv) {
  nn::ParamStore probe(0);
  io::RunConfig cfg = io::read_checkpoint(ckpt, probe);
  diffusion::BackboneConfig bc = diff_config_from(cfg);
  diffusion::Backbone bb(bc);
  io::read_checkpoint(ckpt, bb.params());
  const int T = int(cfg.get_int_or("diff.T", 1000));
  diffusion::NoiseSchedule sched = diffusion::cosine_schedule(T);

  std::vector<std::int64_t> ts;
  for (int i = 0; i < bc.window; ++i) ts.push_back(start_day + i);
  diffusion::Predictor pred = [&](const std::vector<double>& x_t, int t) {
    return bb.predict_v(x_t, t, ts);
  };

  std::filesystem::create_directories(out_dir);
  const std::int64_t dim = bc.flat_dim();
  std::vector<std::vector<double>> samples;
  for (int m = 0; m < members; ++m) {
    std::vector<double> x =
        diffusion::ddim_sample(pred, sched, dim, ddim_steps, seed + std::uint64_t(m));
    samples.push_back(x);
    auto window = bb.unflatten(x, ts);
    for (int w = 0; w < bc.window; ++w) {
      for (const auto& var : bc.variables) {
        std::ostringstream name;
        name << out_dir << "/m" << m << "_" << var << "_d" << ts[size_t(w)] << "_code.fsf";
        io::write_field(name.str(), window[size_t(w)].code.at(var));
      }
    }
  }

  // Per-pixel ensemble standard deviation over members, flat layout.
  std::vector<std::vector<std::string>> rows;
  for (std::int64_t i = 0; i < dim; ++i) {
    double mean = 0.0;
    for (const auto& s : samples) mean += s[size_t(i)];
    mean /= double(members);
    double var = 0.0;
    for (const auto& s : samples) var += (s[size_t(i)] - mean) * (s[size_t(i)] - mean);
    var /= double(members);
    rows.push_back({std::to_string(i), fmt(std::sqrt(var))});
  }
  io::write_csv(std_csv, {"flat_index", "ensemble_std"}, rows);
  return 0;
}

int cmd_metrics(const std::vector<std::string>& truth_paths,
                const std::vector<std::string>& approx_paths, const std::string& output) {
  if (truth_paths.size() != approx_paths.size())
    throw io::IoException(io::Error::kConfigInvalid, "truth/approx count mismatch");
  std::vector<Field> truth = load_fields(truth_paths);
  std::vector<Field> approx = load_fields(approx_paths);
  const double rmse = metrics::rmse_healpix(truth, approx);
  const double p = metrics::psnr(truth, approx);
  io::write_csv(output, {"metric", "value"},
                {{"rmse", fmt(rmse)}, {"psnr_db", fmt(p)}});
  std::cout << "rmse " << rmse << " psnr_db " << p << "\n";
  return 0;
}

int cmd_spectrum(const std::vector<std::string>& inputs, int l_max,
                 const std::string& output) {
  std::vector<Field> fields = load_fields(inputs);
  auto res = metrics::spectrum_series(fields, l_max);
  std::vector<std::vector<std::string>> rows;
  for (size_t l = 0; l < res.ell.size(); ++l)
    rows.push_back({std::to_string(size_t(res.ell[l])), fmt(res.c_mean[l]),
                    fmt(res.c_std[l])});
  io::write_csv(output, {"ell", "c_mean", "c_std"}, rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fsae: spherical field compression toolkit"};
  app.require_subcommand(1);

  // gen-synthetic
  int gs_z = 4, gs_count = 1;
  double gs_slope = 3.0, gs_amp = 1.0, gs_off = 0.0;
  std::uint64_t gs_seed = 0;
  std::int64_t gs_start = 0;
  std::string gs_var = "tas", gs_out = ".";
  auto* gen = app.add_subcommand("gen-synthetic", "generate band-limited random fields");
  gen->add_option("--level", gs_z, "HEALPix level");
  gen->add_option("--count", gs_count, "number of daily fields");
  gen->add_option("--slope", gs_slope, "spectral slope");
  gen->add_option("--seed", gs_seed, "rng seed");
  gen->add_option("--variable", gs_var, "variable name");
  gen->add_option("--amplitude", gs_amp, "field amplitude");
  gen->add_option("--offset", gs_off, "constant offset");
  gen->add_option("--start-day", gs_start, "first timestamp (days since 1940-01-01)");
  gen->add_option("--out-dir", gs_out, "output directory");

  // decompose / reconstruct
  std::string dc_input, dc_config, dc_out;
  auto* dec = app.add_subcommand("decompose", "split a field into base + residuals");
  dec->add_option("--input", dc_input)->required();
  dec->add_option("--config", dc_config)->required();
  dec->add_option("--out-dir", dc_out)->required();

  std::string rc_dir, rc_out;
  auto* rec = app.add_subcommand("reconstruct", "rebuild a field from base + residuals");
  rec->add_option("--in-dir", rc_dir)->required();
  rec->add_option("--output", rc_out)->required();

  // remap
  std::string rm_grid, rm_out, rm_var = "tas";
  int rm_z = 4;
  std::int64_t rm_ts = 0;
  auto* rm = app.add_subcommand("remap", "lat-lon CSV grid -> HEALPix field");
  rm->add_option("--grid", rm_grid)->required();
  rm->add_option("--level", rm_z);
  rm->add_option("--variable", rm_var);
  rm->add_option("--timestamp", rm_ts);
  rm->add_option("--output", rm_out)->required();

  // fit-norm
  std::vector<std::string> fn_inputs;
  std::string fn_out;
  auto* fn = app.add_subcommand("fit-norm", "fit per-variable percentile bounds");
  fn->add_option("--inputs", fn_inputs)->required();
  fn->add_option("--output", fn_out)->required();

  // train-ae
  std::string ta_config, ta_ckpt, ta_csv;
  std::vector<std::string> ta_inputs;
  auto* ta = app.add_subcommand("train-ae", "train the autoencoder");
  ta->add_option("--config", ta_config)->required();
  ta->add_option("--inputs", ta_inputs)->required();
  ta->add_option("--checkpoint", ta_ckpt)->required();
  ta->add_option("--loss-csv", ta_csv);

  // encode / decode
  std::string en_ckpt, en_input, en_base, en_code;
  auto* en = app.add_subcommand("encode", "compress a field");
  en->add_option("--checkpoint", en_ckpt)->required();
  en->add_option("--input", en_input)->required();
  en->add_option("--out-base", en_base)->required();
  en->add_option("--out-code", en_code)->required();

  std::string de_ckpt, de_base, de_code, de_out;
  auto* de = app.add_subcommand("decode", "decompress a field");
  de->add_option("--checkpoint", de_ckpt)->required();
  de->add_option("--base", de_base)->required();
  de->add_option("--code", de_code)->required();
  de->add_option("--output", de_out)->required();

  // sr
  std::string sr_ckpt, sr_input, sr_mask, sr_out;
  auto* sr = app.add_subcommand("sr", "zero-shot super-resolution via residual masking");
  sr->add_option("--checkpoint", sr_ckpt)->required();
  sr->add_option("--input", sr_input)->required();
  sr->add_option("--mask-levels", sr_mask)->required();
  sr->add_option("--output", sr_out)->required();

  // train-diff
  std::string td_config, td_ckpt, td_csv;
  std::vector<std::string> td_inputs;
  auto* td = app.add_subcommand("train-diff", "train the compressed-field diffusion model");
  td->add_option("--config", td_config)->required();
  td->add_option("--inputs", td_inputs)->required();
  td->add_option("--checkpoint", td_ckpt)->required();
  td->add_option("--loss-csv", td_csv);

  // sample
  std::string sa_ckpt, sa_out = ".", sa_csv = "ensemble_std.csv";
  int sa_members = 10, sa_steps = 100;
  std::uint64_t sa_seed = 0;
  std::int64_t sa_start = 0;
  auto* sa = app.add_subcommand("sample", "draw ensemble members with DDIM");
  sa->add_option("--checkpoint", sa_ckpt)->required();
  sa->add_option("--members", sa_members);
  sa->add_option("--seed", sa_seed);
  sa->add_option("--steps", sa_steps);
  sa->add_option("--start-day", sa_start);
  sa->add_option("--out-dir", sa_out);
  sa->add_option("--std-csv", sa_csv);

  // metrics / spectrum
  std::vector<std::string> me_truth, me_approx;
  std::string me_out;
  auto* me = app.add_subcommand("metrics", "RMSE / PSNR between field series");
  me->add_option("--truth", me_truth)->required();
  me->add_option("--approx", me_approx)->required();
  me->add_option("--output", me_out)->required();

  std::vector<std::string> sp_inputs;
  std::string sp_out;
  int sp_lmax = 16;
  auto* sp = app.add_subcommand("spectrum", "angular power spectrum of a field series");
  sp->add_option("--inputs", sp_inputs)->required();
  sp->add_option("--l-max", sp_lmax);
  sp->add_option("--output", sp_out)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return cmd_gen_synthetic(gs_z, gs_count, gs_slope, gs_seed, gs_var, gs_amp, gs_off,
                               gs_start, gs_out);
    if (dec->parsed()) return cmd_decompose(dc_input, dc_config, dc_out);
    if (rec->parsed()) return cmd_reconstruct(rc_dir, rc_out);
    if (rm->parsed()) return cmd_remap(rm_grid, rm_z, rm_var, rm_ts, rm_out);
    if (fn->parsed()) return cmd_fit_norm(fn_inputs, fn_out);
    if (ta->parsed()) return cmd_train_ae(ta_config, ta_inputs, ta_ckpt, ta_csv);
    if (en->parsed()) return cmd_encode(en_ckpt, en_input, en_base, en_code);
    if (de->parsed()) return cmd_decode(de_ckpt, de_base, de_code, de_out);
    if (sr->parsed()) return cmd_sr(sr_ckpt, sr_input, sr_mask, sr_out);
    if (td->parsed()) return cmd_train_diff(td_config, td_inputs, td_ckpt, td_csv);
    if (sa->parsed())
      return cmd_sample(sa_ckpt, sa_members, sa_seed, sa_steps, sa_start, sa_out, sa_csv);
    if (me->parsed()) return cmd_metrics(me_truth, me_approx, me_out);
    if (sp->parsed()) return cmd_spectrum(sp_inputs, sp_lmax, sp_out);
  } catch (const io::IoException& e) {
    std::cerr << "FSAE_ERROR code=" << int(e.code()) << " msg=\"" << e.what() << "\"\n";
    return int(e.code());
  } catch (const std::exception& e) {
    std::cerr << "FSAE_ERROR code=1 msg=\"" << e.what() << "\"\n";
    return 1;
  }
  return 0;
}
