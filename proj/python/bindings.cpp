#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>
#include <vector>

#include "sea/config.hpp"
#include "sea/errors.hpp"
#include "sea/ident.hpp"
#include "sea/plant.hpp"
#include "sea/poly.hpp"
#include "sea/presets.hpp"
#include "sea/reproduce.hpp"
#include "sea/sim.hpp"
#include "sea/synth.hpp"

namespace py = pybind11;

namespace {

// Polynomials cross the boundary as coefficient lists, highest degree first.
std::vector<double> coeffs(const sea::Polynomial& p) { return p.coeffs(); }

py::array_t<double> as_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

std::vector<double> as_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 1) throw sea::ValidationError("expected a one-dimensional array");
  return {a.data(), a.data() + a.size()};
}

py::dict trace_dict(const sea::SimTrace& tr) {
  py::dict d;
  for (auto name : sea::SimTrace::kChannels) d[py::str(std::string(name))] = as_array(tr.channel(name));
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Series elastic actuator 2-DOF control toolkit";

  py::register_exception<sea::ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<sea::NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<sea::SeaParams>(m, "SeaParams")
      .def(py::init<>())
      .def_readwrite("J_A", &sea::SeaParams::J_A)
      .def_readwrite("b_f", &sea::SeaParams::b_f)
      .def_readwrite("K_s", &sea::SeaParams::K_s)
      .def_readwrite("r_winch", &sea::SeaParams::r_winch)
      .def_readwrite("K_g", &sea::SeaParams::K_g)
      .def_readwrite("K_pv", &sea::SeaParams::K_pv)
      .def_readwrite("K_iv", &sea::SeaParams::K_iv)
      .def("validate", &sea::SeaParams::validate)
      .def("__eq__", [](const sea::SeaParams& a, const sea::SeaParams& b) { return a == b; });

  py::class_<sea::SynthesisWeights>(m, "SynthesisWeights")
      .def(py::init<>())
      .def(py::init([](double rho, double lambda, double k) { return sea::SynthesisWeights{rho, lambda, k}; }),
           py::arg("rho") = 0.0005, py::arg("lambda_") = 1.0, py::arg("k") = 1.0)
      .def_readwrite("rho", &sea::SynthesisWeights::rho)
      .def_readwrite("lambda_", &sea::SynthesisWeights::lambda)
      .def_readwrite("k", &sea::SynthesisWeights::k);

  py::class_<sea::TransferFunction>(m, "TransferFunction")
      .def(py::init([](std::vector<double> num, std::vector<double> den) {
             return sea::TransferFunction(sea::Polynomial(std::move(num)), sea::Polynomial(std::move(den)));
           }),
           py::arg("num"), py::arg("den"))
      .def_property_readonly("num", [](const sea::TransferFunction& g) { return coeffs(g.num()); })
      .def_property_readonly("den", [](const sea::TransferFunction& g) { return coeffs(g.den()); })
      .def_property_readonly("order", &sea::TransferFunction::order)
      .def("evaluate", &sea::TransferFunction::evaluate, py::arg("omega"), "Value at s = j omega.")
      .def("at", &sea::TransferFunction::at, py::arg("s"))
      .def("dc_gain", &sea::TransferFunction::dc_gain)
      .def("is_stable", [](const sea::TransferFunction& g) { return sea::is_stable(g); })
      .def("minimal", [](const sea::TransferFunction& g) { return sea::minimal_form(g); })
      .def("__repr__", [](const sea::TransferFunction& g) {
        return "<TransferFunction order " + std::to_string(g.order()) + ">";
      });

  py::class_<sea::SeaModel>(m, "SeaModel")
      .def_readonly("params", &sea::SeaModel::params)
      .def_property_readonly("a", [](const sea::SeaModel& s) { return coeffs(s.a); })
      .def_property_readonly("b", [](const sea::SeaModel& s) { return coeffs(s.b); })
      .def_readonly("P", &sea::SeaModel::P)
      .def_readonly("G", &sea::SeaModel::G);

  py::class_<sea::TwoDofController>(m, "TwoDofController")
      .def_readonly("C1", &sea::TwoDofController::C1)
      .def_readonly("C2", &sea::TwoDofController::C2)
      .def_readonly("weights", &sea::TwoDofController::weights)
      .def_readonly("diophantine_condition", &sea::TwoDofController::diophantine_condition)
      .def_property_readonly("p", [](const sea::TwoDofController& c) { return coeffs(c.p); })
      .def_property_readonly("q", [](const sea::TwoDofController& c) { return coeffs(c.q); })
      .def_property_readonly("c1_num", [](const sea::TwoDofController& c) { return coeffs(c.c1_num); })
      .def_property_readonly("d_rho", [](const sea::TwoDofController& c) { return coeffs(c.d_rho); })
      .def_property_readonly("d_lambda_k", [](const sea::TwoDofController& c) { return coeffs(c.d_lambda_k); });

  py::class_<sea::TorqueLoopMaps>(m, "TorqueLoopMaps")
      .def_readonly("G1", &sea::TorqueLoopMaps::G1)
      .def_readonly("H_phi", &sea::TorqueLoopMaps::H_phi);

  py::class_<sea::FrfEstimate>(m, "FrfEstimate")
      .def_property_readonly("freqs_hz", [](const sea::FrfEstimate& e) { return as_array(e.freqs_hz); })
      .def_property_readonly("magnitude_db", [](const sea::FrfEstimate& e) { return as_array(e.magnitude_db); })
      .def_property_readonly("phase_deg", [](const sea::FrfEstimate& e) { return as_array(e.phase_deg); })
      .def_property_readonly("coherence", [](const sea::FrfEstimate& e) { return as_array(e.coherence); });

  py::class_<sea::SimTrace>(m, "SimTrace")
      .def_readonly("dt_s", &sea::SimTrace::dt_s)
      .def("__len__", &sea::SimTrace::size)
      .def("channel", [](const sea::SimTrace& t, const std::string& name) { return as_array(t.channel(name)); })
      .def("as_dict", &trace_dict);

  m.def("default_params", &sea::default_params);
  m.def("build_plant", &sea::build_plant, py::arg("params") = sea::default_params());
  m.def(
      "roots", [](std::vector<double> c) { return sea::roots(sea::Polynomial(std::move(c))).roots; }, py::arg("coeffs"));
  m.def(
      "spectral_factor",
      [](std::vector<double> a, std::vector<double> b, double wa, double wb) {
        return coeffs(sea::spectral_factor(sea::Polynomial(std::move(a)), sea::Polynomial(std::move(b)), wa, wb));
      },
      py::arg("a"), py::arg("b"), py::arg("w_a"), py::arg("w_b"));
  m.def(
      "solve_diophantine",
      [](std::vector<double> a, std::vector<double> b, std::vector<double> c) {
        const auto sol = sea::solve_diophantine(sea::Polynomial(std::move(a)), sea::Polynomial(std::move(b)),
                                                sea::Polynomial(std::move(c)));
        return py::make_tuple(coeffs(sol.p), coeffs(sol.q));
      },
      py::arg("a"), py::arg("b"), py::arg("c"));
  m.def(
      "h2_synthesize",
      [](const sea::SeaModel& model, const sea::SynthesisWeights& w) { return sea::h2_synthesize(model, w); },
      py::arg("model"), py::arg("weights") = sea::SynthesisWeights{});
  m.def("build_compensator", &sea::build_compensator, py::arg("model"), py::arg("controller"));
  m.def("torque_loop_maps", &sea::torque_loop_maps, py::arg("model"), py::arg("controller"),
        py::arg("with_compensator") = false);
  m.def(
      "bandwidth_3db", [](const sea::TransferFunction& g) { return sea::bandwidth_3db(g); }, py::arg("tf"));
  m.def(
      "phase_at", [](const sea::TransferFunction& g, double f) { return sea::phase_at(g, f); }, py::arg("tf"),
      py::arg("f_hz"));
  m.def(
      "frequency_response",
      [](const sea::TransferFunction& g, const py::array_t<double, py::array::c_style | py::array::forcecast>& f) {
        const auto fr = sea::frequency_response(g, as_vector(f));
        return py::make_tuple(as_array(fr.magnitude_db), as_array(fr.phase_deg));
      },
      py::arg("tf"), py::arg("freqs_hz"));
  m.def(
      "estimate_frf",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& u,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& y, double dt,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& f, int segments) {
        return sea::estimate_frf(as_vector(u), as_vector(y), dt, as_vector(f), sea::WelchOptions{segments});
      },
      py::arg("input"), py::arg("output"), py::arg("dt_s"), py::arg("freqs_hz"), py::arg("segments") = 8);
  m.def("preset_names", &sea::preset_names);
  m.def(
      "run_preset_trace",
      [](const std::string& name, const std::string& run, std::uint64_t seed) {
        const auto preset = sea::preset(name, seed);
        const sea::SeaModel model = sea::build_plant(sea::default_params());
        const auto ctrl = sea::h2_synthesize(model, sea::SynthesisWeights{});
        for (const auto& r : preset.runs) {
          if (run.empty() || r.name == run) {
            py::gil_scoped_release release;
            return sea::run_scenario(r.def, model, ctrl);
          }
        }
        throw sea::ValidationError("preset '" + name + "' has no run '" + run + "'");
      },
      py::arg("name"), py::arg("run") = "", py::arg("seed") = sea::kDefaultSeed,
      "Simulates one run of a named preset on the default plant and controller.");
  m.def(
      "reproduce",
      [](const std::filesystem::path& out_dir, std::uint64_t seed) {
        sea::ReproduceReport report;
        {
          py::gil_scoped_release release;
          report = sea::reproduce_all(sea::ProjectConfig{}, out_dir, seed);
        }
        py::list rows;
        for (const auto& c : report.checks) {
          py::dict row;
          row["preset"] = c.preset;
          row["name"] = c.name;
          row["value"] = c.value;
          row["limit"] = c.limit;
          row["passed"] = c.passed;
          rows.append(row);
        }
        return rows;
      },
      py::arg("out_dir"), py::arg("seed") = sea::kDefaultSeed,
      "Runs every preset into out_dir and returns the checks.");
}
