#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "selfaccel/airy.hpp"
#include "selfaccel/diagnostics.hpp"
#include "selfaccel/errors.hpp"
#include "selfaccel/experiments.hpp"
#include "selfaccel/output.hpp"
#include "selfaccel/residual.hpp"

namespace py = pybind11;
using namespace selfaccel;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;
using CArray = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vec(const Array& a) { return {a.data(), a.data() + a.size()}; }

CArray to_array(const std::vector<Complex>& v) {
  CArray out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

ComplexWaveField to_field(const Grid1D& grid, const CArray& values) {
  if (values.size() != grid.size()) throw Error(ErrorCode::InvalidArgument, "field length differs from grid size");
  return {grid, std::vector<Complex>(values.data(), values.data() + values.size())};
}

py::dict record_to_dict(const PropagationRecord& r) {
  py::dict d;
  d["times"] = r.times;
  d["norms"] = r.norms;
  d["centroids"] = r.centroids;
  d["peaks"] = r.peaks;
  d["max_abs"] = r.max_abs;
  d["completed_steps"] = r.completed_steps;
  d["warnings"] = r.warnings;
  const auto n = static_cast<py::ssize_t>(r.grid.size());
  CArray fields({static_cast<py::ssize_t>(r.fields.size()), n});
  for (std::size_t i = 0; i < r.fields.size(); ++i) {
    std::copy(r.fields[i].values.begin(), r.fields[i].values.end(), fields.mutable_data() + i * n);
  }
  d["fields"] = fields;
  if (r.failure) {
    d["failure"] = py::dict(py::arg("code") = std::string(to_string(r.failure->code)),
                            py::arg("message") = r.failure->message, py::arg("step") = r.failure->step);
  } else {
    d["failure"] = py::none();
  }
  return d;
}

py::dict report_to_dict(const ResidualReport& r) {
  return py::dict(py::arg("l_inf") = r.l_inf, py::arg("l2") = r.l2, py::arg("sample_count") = r.sample_count,
                  py::arg("skipped") = r.skipped, py::arg("grid_step") = r.grid_step,
                  py::arg("derivative_scheme") = r.derivative_scheme);
}

std::vector<double> vec_of(const SolutionFamily& f, const Array& q, double (*fn)(const SolutionFamily&, double)) {
  std::vector<double> out(q.size());
  for (py::ssize_t i = 0; i < q.size(); ++i) out[i] = fn(f, q.data()[i]);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Accelerating waves under complex comoving potentials";
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  m.attr("DARK_SOLITON_MU_SIGN") = kDarkSolitonMuSign;
  m.attr("NONLINEAR_MU_SHIFT_COEFFICIENT") = kNonlinearMuShiftCoefficient;

  m.def("airy_ai", py::vectorize(&airy_ai), py::arg("x"));
  m.def("airy_ai_prime", py::vectorize(&airy_ai_prime), py::arg("x"));

  py::class_<FrameParams>(m, "FrameParams")
      .def(py::init(&make_frame), py::arg("a"), py::arg("mu"))
      .def_readonly("a", &FrameParams::a)
      .def_readonly("mu", &FrameParams::mu)
      .def("__repr__", [](const FrameParams& f) {
        return "FrameParams(a=" + format_number(f.a) + ", mu=" + format_number(f.mu) + ")";
      });

  py::class_<SolutionFamily>(m, "SolutionFamily")
      .def_static("airy_free", &SolutionFamily::airy_free, py::arg("a"), py::arg("mu"))
      .def_static("const_intensity_inv_harm", &SolutionFamily::const_intensity_inv_harm, py::arg("v0"), py::arg("a"),
                  py::arg("mu"))
      .def_static("const_intensity_power_law", &SolutionFamily::const_intensity_power_law, py::arg("v0"),
                  py::arg("n"), py::arg("a"), py::arg("branch_sign") = -1)
      .def_static("gaussian_localized", &SolutionFamily::gaussian_localized, py::arg("omega"), py::arg("a"))
      .def_static("dark_soliton", &SolutionFamily::dark_soliton, py::arg("sigma"), py::arg("a"))
      .def_property_readonly("tag", [](const SolutionFamily& f) { return std::string(to_string(f.tag())); })
      .def_property_readonly("frame", &SolutionFamily::frame)
      .def_property_readonly("at_constant_gain_threshold", &SolutionFamily::at_constant_gain_threshold)
      .def_property_readonly("branch",
                             [](const SolutionFamily& f) {
                               const auto b = f.branch();
                               return py::dict(py::arg("kind") = b.kind, py::arg("sign_at_right") = b.sign_at_right,
                                               py::arg("flip_points") = b.flip_points);
                             })
      .def("psi", [](const SolutionFamily& f, const Array& q) { return vec_of(f, q, &psi); })
      .def("g", [](const SolutionFamily& f, const Array& q) { return vec_of(f, q, &g_aux); })
      .def("v_real", [](const SolutionFamily& f, const Array& q) { return vec_of(f, q, &v_real); })
      .def("v_imag", [](const SolutionFamily& f, const Array& q) { return vec_of(f, q, &v_imag); })
      .def("phase_integral", [](const SolutionFamily& f, const Array& q) { return vec_of(f, q, &phase_integral); });

  m.def("nonlinear_mu_shift", &nonlinear_mu_shift, py::arg("mu"), py::arg("sigma_nl"), py::arg("p"));

  py::class_<Grid1D>(m, "Grid1D")
      .def(py::init<double, double, int>(), py::arg("x_min"), py::arg("x_max"), py::arg("n"))
      .def_property_readonly("x_min", &Grid1D::x_min)
      .def_property_readonly("x_max", &Grid1D::x_max)
      .def_property_readonly("n", &Grid1D::size)
      .def_property_readonly("dx", &Grid1D::dx)
      .def("positions", &Grid1D::positions);

  m.def(
      "assemble_lab_frame",
      [](const SolutionFamily& f, const Grid1D& g, double t, std::optional<double> mu_for_phase) {
        const auto field = mu_for_phase ? assemble_lab_frame(f, g, t, *mu_for_phase) : assemble_lab_frame(f, g, t);
        return to_array(field.values);
      },
      py::arg("family"), py::arg("grid"), py::arg("t"), py::arg("mu_for_phase") = py::none());

  py::class_<ComovingPotential>(m, "Potential")
      .def_static("comoving", &comoving_potential, py::arg("family"))
      .def_static("uniform", &uniform_potential, py::arg("v_real"), py::arg("v_imag"))
      .def_readonly("description", &ComovingPotential::description)
      .def("lab", [](const ComovingPotential& p, const Array& x, double t) {
        std::vector<Complex> out(x.size());
        for (py::ssize_t i = 0; i < x.size(); ++i) out[i] = p.lab(x.data()[i], t);
        return to_array(out);
      });

  m.def(
      "propagate",
      [](const CArray& initial, const Grid1D& grid, const ComovingPotential& potential, double dt, int n_steps,
         const std::string& scheme, int record_stride, std::optional<std::pair<double, double>> absorber,
         std::optional<std::pair<double, double>> nonlinear) {
        PropagatorConfig c;
        c.dt = dt;
        c.n_steps = n_steps;
        c.scheme = scheme_from_string(scheme);
        c.record_stride = record_stride;
        if (absorber) c.absorber = Absorber{absorber->first, absorber->second};
        std::optional<NonlinearTerm> nl;
        if (nonlinear) nl = make_nonlinear(nonlinear->first, nonlinear->second);
        const auto field = to_field(grid, initial);
        std::optional<PropagationRecord> r;
        {
          py::gil_scoped_release release;
          r.emplace(propagate(field, potential, nl, c));
        }
        return record_to_dict(*r);
      },
      py::arg("initial"), py::arg("grid"), py::arg("potential"), py::arg("dt"), py::arg("n_steps"),
      py::arg("scheme") = "split-step", py::arg("record_stride") = 1, py::arg("absorber") = py::none(),
      py::arg("nonlinear") = py::none(),
      "Propagate a sampled field; absorber = (layer_width, strength), nonlinear = (sigma, p).");

  m.def("norm", [](const CArray& v, const Grid1D& g) { return norm(to_field(g, v)); });
  m.def(
      "centroid", [](const CArray& v, const Grid1D& g, double floor) { return centroid(to_field(g, v), floor); },
      py::arg("values"), py::arg("grid"), py::arg("floor") = 1e-12);
  m.def("peak_position", [](const CArray& v, const Grid1D& g) {
    const auto p = peak_position(to_field(g, v));
    return py::make_tuple(p.position, p.index, p.degenerate);
  });
  m.def("intensity_flatness", [](const CArray& v, const Grid1D& g, double lo, double hi, double target) {
    return intensity_flatness(to_field(g, v), lo, hi, target);
  });
  m.def(
      "compare_fields",
      [](const CArray& v, const CArray& ref, const Grid1D& g, bool align,
         std::optional<std::pair<double, double>> window) {
        const auto c = compare_fields(to_field(g, v), to_field(g, ref), align, window);
        return py::dict(py::arg("l2") = c.l2, py::arg("l_inf") = c.l_inf, py::arg("phase_aligned") = c.phase_aligned,
                        py::arg("removed_phase") = c.removed_phase);
      },
      py::arg("values"), py::arg("reference"), py::arg("grid"), py::arg("align_phase") = false,
      py::arg("window") = py::none());
  m.def(
      "fit_parabola",
      [](const Array& t, const Array& x) {
        Trajectory traj{to_vec(t), to_vec(x), {}, "python"};
        const auto f = fit_parabola(traj);
        return py::dict(py::arg("x0") = f.x0, py::arg("v0") = f.v0, py::arg("acc") = f.acc,
                        py::arg("rms_residual") = f.rms_residual);
      },
      py::arg("times"), py::arg("positions"));

  m.def(
      "ode_residuals",
      [](const SolutionFamily& f, const Array& q) {
        const auto samples = to_vec(q);
        return py::make_tuple(
            report_to_dict(ode_residual_G(envelope(f), auxiliary_g(f), v_real_profile(f), f.frame(), samples)),
            report_to_dict(ode_residual_VI(auxiliary_g(f), envelope(f), v_imag_profile(f), samples)));
      },
      py::arg("family"), py::arg("q"), "(G residual, V_I residual) reports at the sample points.");
  m.def(
      "pde_residual",
      [](const SolutionFamily& f, const Grid1D& g, double t, double dt_probe, int order) {
        const WaveFn wave = [f](double x, double tt) { return lab_frame_value(f, x, tt); };
        return report_to_dict(pde_residual(wave, comoving_potential(f), std::nullopt, g, t, dt_probe, order));
      },
      py::arg("family"), py::arg("grid"), py::arg("t"), py::arg("dt_probe") = 1e-3, py::arg("order") = 2);
  m.def("adjudicate_dark_soliton_mu_json", [] { return to_json(adjudicate_dark_soliton_mu()).dump(); });
  m.def("adjudicate_nonlinear_shift_json", [] { return to_json(adjudicate_nonlinear_shift()).dump(); });

  m.def(
      "synthesize_table",
      [](const Array& q, const Array& psi_values, std::optional<Array> v_real_values, double a, double mu,
         int sign_at_right) {
        const auto r = synthesize_table(to_vec(q), to_vec(psi_values),
                                        v_real_values ? to_vec(*v_real_values) : std::vector<double>{},
                                        make_frame(a, mu), sign_at_right);
        return py::dict(py::arg("q") = r.q, py::arg("g") = r.g, py::arg("v_imag") = r.v_imag,
                        py::arg("valid") = r.valid, py::arg("branch_kind") = r.branch.kind,
                        py::arg("flip_points") = r.branch.flip_points);
      },
      py::arg("q"), py::arg("psi"), py::arg("v_real") = py::none(), py::arg("a") = 1.0, py::arg("mu") = 0.0,
      py::arg("sign_at_right") = 1);

  m.def("preset_names", &preset_names);
  m.def("preset_config", [](const std::string& name) { return serialize_config(preset(name)); });
  m.def("normalize_config", [](const std::string& text) { return serialize_config(parse_config(text)); });
  m.def(
      "run_config_json",
      [](const std::string& text, const std::string& out_dir, const std::string& base_dir, double resolution_scale) {
        const auto spec = parse_config(text);
        RunOptions o;
        o.out_dir = out_dir;
        o.base_dir = base_dir;
        o.resolution_scale = resolution_scale;
        py::gil_scoped_release release;
        return run_scenario(spec, o).manifest.dump();
      },
      py::arg("text"), py::arg("out_dir"), py::arg("base_dir") = ".", py::arg("resolution_scale") = 1.0);
  m.def("describe_family_json", [](const std::string& name) { return describe_family(name).dump(); });
}
