#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "pinfield/bounds.hpp"
#include "pinfield/digest.hpp"
#include "pinfield/exact.hpp"
#include "pinfield/gaussian.hpp"
#include "pinfield/green.hpp"
#include "pinfield/runner.hpp"
#include "pinfield/sampler.hpp"

namespace py = pybind11;
using namespace pinfield;

namespace {

FieldConfig field(const std::vector<double>& eta) { return FieldConfig{eta}; }

py::dict estimate_dict(const Estimate& e) {
  py::dict out;
  out["mean"] = e.mean;
  out["error"] = e.error;
  out["samples"] = e.samples;
  return out;
}

py::list estimate_list(const std::vector<Estimate>& v) {
  py::list out;
  for (const auto& e : v) out.append(estimate_dict(e));
  return out;
}

}  // namespace

PYBIND11_MODULE(_pinfield, m) {
  m.attr("__version__") = version_string();

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<Volume>(m, "Volume")
      .def_static("box", &Volume::box, py::arg("d"), py::arg("L"))
      .def_static("from_sites", &Volume::from_sites, py::arg("d"), py::arg("sites"))
      .def_property_readonly("dimension", &Volume::dimension)
      .def("__len__", &Volume::size)
      .def("site", [](const Volume& v, std::size_t i) {
        if (i >= v.size()) throw py::index_error();
        auto s = v.site(i);
        return std::vector<int>(s.begin(), s.end());
      });

  py::class_<Potential>(m, "Potential")
      .def_static("gaussian", &Potential::gaussian, py::arg("curvature") = 1.0)
      .def_static("anharmonic", &Potential::anharmonic, py::arg("kappa"))
      .def("value", &Potential::value)
      .def_property_readonly("c_minus", &Potential::c_minus)
      .def_property_readonly("c_plus", &Potential::c_plus)
      .def("__repr__", &Potential::describe);

  py::class_<DisorderModel>(m, "DisorderModel")
      .def_static("parse", &DisorderModel::parse)
      .def_property_readonly("second_moment", &DisorderModel::second_moment)
      .def("__repr__", &DisorderModel::to_string);

  m.def("sample_disorder",
        [](const DisorderModel& law, const Volume& vol, std::uint64_t seed) {
          return sample_disorder(law, vol, seed).values;
        },
        py::arg("law"), py::arg("volume"), py::arg("seed"));

  m.def("exact_solution",
        [](const Volume& vol, const std::vector<double>& eta, double eps, double curvature, int threads) {
          const auto s = exact_mixed_solution(vol, field(eta), eps, curvature, threads);
          py::dict out;
          out["log_z"] = s.log_z;
          out["mean"] = s.mean;
          out["second_moment"] = s.second_moment;
          out["pin_probability"] = s.pin_probability;
          out["overlap"] = s.overlap;
          out["pinned_fraction"] = s.pinned_fraction;
          return out;
        },
        py::arg("volume"), py::arg("eta"), py::arg("eps"), py::arg("curvature") = 1.0, py::arg("threads") = 1);

  m.def("gaussian_log_partition",
        [](const Volume& vol, const std::vector<double>& eta, std::vector<std::size_t> pinned, double curvature) {
          return gaussian_log_partition(vol, pinned, field(eta), curvature).log_z;
        },
        py::arg("volume"), py::arg("eta"), py::arg("pinned") = std::vector<std::size_t>{},
        py::arg("curvature") = 1.0);

  m.def("estimate_observables",
        [](const Volume& vol, const Potential& pot, const std::vector<double>& eta, double eps, std::size_t sweeps,
           std::size_t burn_in, std::size_t batches, std::size_t thinning, std::uint64_t seed) {
          SamplerConfig c;
          c.sweeps = sweeps;
          c.burn_in = burn_in;
          c.batches = batches;
          c.thinning = thinning;
          c.seed = seed;
          EstimatorResult r;
          {
            py::gil_scoped_release release;
            r = estimate_observables(ModelParams(vol, pot, eps, field(eta)), c);
          }
          py::dict out;
          out["overlap"] = estimate_dict(r.overlap);
          out["pinned_fraction"] = estimate_dict(r.pinned_fraction);
          out["mean"] = estimate_list(r.mean);
          out["second_moment"] = estimate_list(r.second_moment);
          out["pin_probability"] = estimate_list(r.pin_probability);
          out["slow_mixing"] = r.slow_mixing;
          return out;
        },
        py::arg("volume"), py::arg("potential"), py::arg("eta"), py::arg("eps"), py::arg("sweeps") = 100000,
        py::arg("burn_in") = 1000, py::arg("batches") = 20, py::arg("thinning") = 1, py::arg("seed") = 1);

  py::class_<GreenScan>(m, "GreenScan")
      .def_readonly("d", &GreenScan::d)
      .def_property_readonly("rows", [](const GreenScan& s) {
        py::list rows;
        for (const auto& r : s.rows) {
          py::dict row;
          row["L"] = r.L;
          row["g00"] = r.g00;
          row["avg_diag"] = r.avg_diag;
          row["sum_all"] = r.sum_all;
          rows.append(row);
        }
        return rows;
      })
      .def_property_readonly("diagonal_slope", [](const GreenScan& s) { return s.diagonal_fit.slope; })
      .def_property_readonly("sum_exponent", [](const GreenScan& s) { return s.sum_exponent_fit.slope; });

  m.def("green_scan",
        [](int d, const std::vector<int>& Ls, double curvature) { return green_diagonal_scan(d, Ls, curvature); },
        py::arg("d"), py::arg("Ls"), py::arg("curvature") = 1.0);
  m.def("infinite_volume_green_origin", &infinite_volume_green_origin, py::arg("d"));
  m.def("extrapolate_green_origin", &extrapolate_green_origin);

  py::class_<BoundConstants>(m, "BoundConstants")
      .def_readonly("d", &BoundConstants::d)
      .def_readonly("stabilized", &BoundConstants::stabilized)
      .def("table", [](const BoundConstants& c) {
        py::dict out;
        for (const auto& [name, k] : c.table()) out[py::str(name)] = k.value;
        return out;
      });

  m.def("constants",
        [](const Potential& pot, int d, std::vector<int> sweep) {
          return sweep.empty() ? estimate_constants(pot, d) : estimate_constants(pot, d, sweep);
        },
        py::arg("potential"), py::arg("d"), py::arg("sweep") = std::vector<int>{});

  m.def("overlap_bound",
        [](const Volume& vol, const Potential& pot, const std::vector<double>& eta, double eps,
           const BoundConstants& c) { return audit_overlap_bound(vol, pot, field(eta), eps, c).to_json(); },
        py::arg("volume"), py::arg("potential"), py::arg("eta"), py::arg("eps"), py::arg("constants"));
  m.def("pinning_bound",
        [](const Volume& vol, const Potential& pot, const std::vector<double>& eta, double eps, double eps0,
           const BoundConstants& c) { return audit_pinning_bound(vol, pot, field(eta), eps, eps0, c).to_json(); },
        py::arg("volume"), py::arg("potential"), py::arg("eta"), py::arg("eps"), py::arg("eps0"),
        py::arg("constants"));
  m.def("gaussian_ibp",
        [](const Volume& vol, const Potential& pot, const DisorderModel& law, double eps, std::size_t replicas,
           std::uint64_t seed) { return check_gaussian_ibp(vol, pot, law, eps, replicas, seed).to_json(); },
        py::arg("volume"), py::arg("potential"), py::arg("law"), py::arg("eps"), py::arg("replicas"),
        py::arg("seed") = 1);
  m.def("monotonicity",
        [](const Volume& vol, const Potential& pot, const std::vector<double>& eta, const std::string& mode,
           const std::vector<double>& grid, double parameter) {
          MonotoneMode mm;
          if (mode == "field") {
            mm = MonotoneMode::field;
          } else if (mode == "pinning") {
            mm = MonotoneMode::pinning;
          } else {
            throw py::value_error("mode must be 'field' or 'pinning'");
          }
          return check_monotonicity(vol, pot, field(eta), mm, grid, parameter).to_json();
        },
        py::arg("volume"), py::arg("potential"), py::arg("eta"), py::arg("mode"), py::arg("grid"),
        py::arg("parameter") = 1.0);

  m.def("run_config",
        [](const std::string& text) {
          const RunConfig c = RunConfig::from_json_text(text);
          RunResult r;
          {
            py::gil_scoped_release release;
            r = run(c);
          }
          return py::make_tuple(r.status, r.message, r.outputs);
        },
        py::arg("config_json"));
  m.def("sha256_file", &sha256_file);
}
