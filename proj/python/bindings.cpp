// Python module exposing the main field operations: grid bookkeeping,
// multi-scale decomposition, spectra/metrics, the autoencoder, and the
// diffusion schedule. Fields cross the boundary as 1-D float64 numpy arrays
// in nested pixel order.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fsae/diffusion.hpp"
#include "fsae/field.hpp"
#include "fsae/healpix.hpp"
#include "fsae/io.hpp"
#include "fsae/metrics.hpp"
#include "fsae/model.hpp"
#include "fsae/multiscale.hpp"
#include "fsae/preprocess.hpp"
#include "fsae/sphharm.hpp"
#include "fsae/synthetic.hpp"

namespace py = pybind11;
using namespace fsae;

namespace {

Field to_field(int z, py::array_t<double, py::array::c_style | py::array::forcecast> arr) {
  if (arr.ndim() != 1) throw std::invalid_argument("field array must be 1-D");
  std::vector<double> v(arr.data(), arr.data() + arr.size());
  return Field(z, std::move(v));
}

py::array_t<double> from_field(const Field& f) {
  return py::array_t<double>(py::ssize_t(f.values.size()), f.values.data());
}

}  // namespace

PYBIND11_MODULE(_fsae, m) {
  m.doc() = "spherical climate-field compression toolkit";

  m.def("npix", &healpix::npix, py::arg("z"));
  m.def("parent", &healpix::parent, py::arg("pix"), py::arg("z"));
  m.def(
      "pix2ang",
      [](std::int64_t pix, int z) {
        const auto pt = healpix::pix2ang(pix, z);
        return py::make_tuple(pt.theta, pt.phi);
      },
      py::arg("pix"), py::arg("z"));
  m.def(
      "ang2pix",
      [](int z, double theta, double phi) {
        return healpix::ang2pix(z, {theta, phi});
      },
      py::arg("z"), py::arg("theta"), py::arg("phi"));

  m.def(
      "downsample",
      [](int z, py::array_t<double> values, int z_target) {
        return from_field(multiscale::downsample_avg(to_field(z, values), z_target));
      },
      py::arg("z"), py::arg("values"), py::arg("z_target"));
  m.def(
      "decompose",
      [](int z, py::array_t<double> values, int z_c, const std::set<int>& z_r) {
        auto s = multiscale::decompose(to_field(z, values), z_c, z_r);
        py::dict residuals;
        for (const auto& [lvl, r] : s.residuals) residuals[py::int_(lvl)] = from_field(r);
        return py::make_tuple(from_field(s.base), residuals);
      },
      py::arg("z"), py::arg("values"), py::arg("z_c"), py::arg("z_r"));
  m.def(
      "reconstruct",
      [](int z_c, py::array_t<double> base, const std::map<int, py::array_t<double>>& res) {
        multiscale::MultiScaleState s;
        s.base = to_field(z_c, base);
        for (const auto& [lvl, r] : res) s.residuals[lvl] = to_field(lvl, r);
        return from_field(multiscale::reconstruct(s));
      },
      py::arg("z_c"), py::arg("base"), py::arg("residuals"));

  m.def(
      "angular_power_spectrum",
      [](int z, py::array_t<double> values, int l_max) {
        return metrics::angular_power_spectrum(to_field(z, values), l_max);
      },
      py::arg("z"), py::arg("values"), py::arg("l_max"));
  m.def("psnr", &metrics::psnr_from, py::arg("range"), py::arg("rmse"));

  m.def(
      "generate_synthetic",
      [](int z, int l_max, double slope, std::uint64_t seed, std::int64_t timestamp) {
        synth::SynthConfig cfg;
        cfg.z = z;
        cfg.l_max = l_max;
        cfg.slope = slope;
        cfg.seed = seed;
        return from_field(synth::generate(cfg, "tas", timestamp));
      },
      py::arg("z"), py::arg("l_max"), py::arg("slope"), py::arg("seed"),
      py::arg("timestamp") = 0);

  m.def("cosine_alpha_bar", [](int T) { return diffusion::cosine_schedule(T).alpha_bar; },
        py::arg("T"));

  py::class_<model::FsaeConfig>(m, "FsaeConfig")
      .def(py::init<>())
      .def_readwrite("z_max", &model::FsaeConfig::z_max)
      .def_readwrite("z_c", &model::FsaeConfig::z_c)
      .def_readwrite("z_b", &model::FsaeConfig::z_b)
      .def_readwrite("z_r", &model::FsaeConfig::z_r)
      .def_readwrite("d_model", &model::FsaeConfig::d_model)
      .def_readwrite("d_head", &model::FsaeConfig::d_head)
      .def_readwrite("emb_level", &model::FsaeConfig::emb_level)
      .def_readwrite("emb_degree", &model::FsaeConfig::emb_degree)
      .def_readwrite("seed", &model::FsaeConfig::seed)
      .def("effective_ratio", &model::FsaeConfig::effective_ratio)
      .def("nominal_ratio", &model::FsaeConfig::nominal_ratio);

  py::class_<model::FsaeModel>(m, "FsaeModel")
      .def(py::init<model::FsaeConfig>())
      .def("encode",
           [](const model::FsaeModel& mm, py::array_t<double> values) {
             auto c = mm.encode(to_field(mm.config().z_max, values));
             return py::make_tuple(from_field(c.base), from_field(c.code));
           })
      .def("decode",
           [](const model::FsaeModel& mm, py::array_t<double> base,
              py::array_t<double> code) {
             model::CompressedState c;
             c.base = to_field(mm.config().z_c, base);
             c.code = to_field(mm.config().z_b, code);
             return from_field(mm.decode(c));
           })
      .def("train",
           [](model::FsaeModel& mm, const std::vector<py::array_t<double>>& fields,
              int iters, double base_lr, int warmup) {
             std::vector<Field> data;
             for (const auto& a : fields)
               data.push_back(to_field(mm.config().z_max, a));
             nn::TrainConfig tc;
             tc.max_iters = iters;
             tc.base_lr = base_lr;
             tc.warmup_iters = warmup;
             auto res = mm.train(data, tc);
             return py::make_tuple(res.final_loss, res.baseline_rmse, res.loss_trace);
           },
           py::arg("fields"), py::arg("iters"), py::arg("base_lr") = 1e-3,
           py::arg("warmup") = 10);
}
