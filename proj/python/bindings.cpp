#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <string>

#include "conicond/condition.hpp"
#include "conicond/errors.hpp"
#include "conicond/gcc.hpp"
#include "conicond/grassmann.hpp"
#include "conicond/harness.hpp"
#include "conicond/linalg.hpp"
#include "conicond/report.hpp"

namespace py = pybind11;
using namespace conicond;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const Array& a) {
  if (a.ndim() == 1) {
    Matrix m(1, a.shape(0));
    std::copy(a.data(), a.data() + a.shape(0), m.row(0).begin());
    return m;
  }
  if (a.ndim() != 2) throw Error(ErrorKind::kDimension, "expected a 1-D or 2-D array");
  Matrix m(a.shape(0), a.shape(1));
  std::copy(a.data(), a.data() + a.size(), m.row(0).begin());
  return m;
}

Vector to_vector(const Array& a) {
  if (a.ndim() != 1) throw Error(ErrorKind::kDimension, "expected a 1-D array");
  return Vector(a.data(), a.data() + a.shape(0));
}

Array from_matrix(const Matrix& m) {
  Array out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

Array from_vector(const Vector& v) {
  Array out(v.size());
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::dict condition_dict(const ConditionValue& c) {
  py::dict d;
  d["kind"] = c.is_exact() ? "exact" : "interval";
  d["lower"] = c.lower;
  d["upper"] = c.upper;
  d["basis"] = c.basis;
  return d;
}

py::dict witness_dict(const PerturbationWitness& w) {
  py::dict d;
  d["property"] = std::string(to_string(w.property));
  d["delta"] = from_matrix(w.delta);
  d["frob_norm"] = w.frob_norm;
  d["target"] = from_vector(w.target);
  d["residual"] = w.residual;
  return d;
}

Subspace span(const Array& rows) { return Subspace::from_rowspan(to_matrix(rows)); }

}  // namespace

PYBIND11_MODULE(_conicond, m) {
  m.doc() = "Condition numbers for homogeneous conic feasibility problems";

  static py::exception<Error> error(m, "ConicondError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error)(e.what());
      exc.attr("kind") = std::string(to_string(e.kind()));
      py::set_error(error, exc);
    }
  });

  py::class_<Cone>(m, "Cone")
      .def_static("orthant", &Cone::orthant)
      .def_static("lorentz", &Cone::lorentz)
      .def_static("product", &Cone::product)
      .def_static("negated", &Cone::negated)
      .def_property_readonly("dim", &Cone::dim)
      .def("dual", &Cone::dual)
      .def("contains", [](const Cone& c, const Array& x, double tol) { return c.contains(to_vector(x), tol); },
           py::arg("x"), py::arg("tolerance") = 1e-9)
      .def("project", [](const Cone& c, const Array& x) { return from_vector(c.project(to_vector(x))); })
      .def("__str__", &Cone::to_string)
      .def("__repr__", [](const Cone& c) { return "Cone('" + c.to_string() + "')"; });

  m.def("parse_cone", [](const std::string& spec) { return parse_cone(spec); });

  m.def("kappa", [](const Array& a) { return kappa(to_matrix(a)); });
  m.def("singular_values", [](const Array& a) { return from_vector(singular_values(to_matrix(a))); });
  m.def("polar_decompose", [](const Array& a) {
    const PolarFactors f = polar_decompose(to_matrix(a));
    return py::make_tuple(from_matrix(f.scale), from_matrix(f.balanced_part));
  });
  m.def("rank_deficiency_distance", [](const Array& a) { return rank_deficiency_distance(to_matrix(a)); });

  m.def("principal_angles", [](const Array& a, const Array& b) {
    return from_vector(principal_angles(span(a), span(b)).angles);
  });
  m.def("grassmann_distances", [](const Array& a, const Array& b) {
    const GrassmannDistances d = grassmann_distances(span(a), span(b));
    py::dict out;
    out["projection"] = d.projection;
    out["geodesic"] = d.geodesic;
    out["hausdorff"] = d.hausdorff;
    return out;
  });

  m.def("cone_subspace_angle", [](const Cone& c, const Array& rows) {
    const ConeAngleResult r = cone_subspace_angle(c, span(rows));
    return py::make_tuple(r.angle, from_vector(r.witness));
  });
  m.def("classify_feasibility", [](const Cone& c, const Array& rows) {
    const FeasibilityStatus s = classify_feasibility(c, span(rows));
    py::dict out;
    out["status"] = std::string(to_string(s.tag));
    out["primal_angle"] = s.primal_angle();
    out["dual_angle"] = s.dual_angle();
    return out;
  });
  m.def("grassmann_condition",
        [](const Cone& c, const Array& rows) { return grassmann_condition(c, span(rows)).value(); });
  m.def("renegar_condition", [](const Cone& c, const Array& a) {
    return condition_dict(renegar_condition(c, to_matrix(a)));
  });
  m.def("gcc_condition", [](const Array& a) { return gcc_condition(to_matrix(a)).value(); });
  m.def("smallest_enclosing_cap", [](const Array& points) {
    const Matrix p = to_matrix(points);
    std::vector<Vector> pts;
    for (std::size_t i = 0; i < p.rows(); ++i) pts.emplace_back(p.row(i).begin(), p.row(i).end());
    const SphericalCap cap = smallest_enclosing_cap(pts);
    py::dict out;
    out["center"] = from_vector(cap.center);
    out["radius"] = cap.radius;
    out["support"] = cap.support;
    return out;
  });

  m.def("witness_image",
        [](const Array& b, const Array& x) { return witness_dict(witness_image(to_matrix(b), to_vector(x))); });
  m.def("witness_kernel",
        [](const Array& b, const Array& x) { return witness_dict(witness_kernel(to_matrix(b), to_vector(x))); });

  m.def(
      "analyze_json",
      [](const Cone& c, const Array& a, bool witnesses) {
        ReportOptions options;
        options.witnesses = witnesses;
        return report_to_json(analyze(c, to_matrix(a), options));
      },
      py::arg("cone"), py::arg("a"), py::arg("witnesses") = false);

  m.def(
      "run_experiment",
      [](std::size_t n, std::size_t m_rows, std::size_t trials, std::uint64_t seed, const std::string& cone) {
        ExperimentConfig cfg;
        cfg.n = n;
        cfg.m = m_rows;
        cfg.trials = trials;
        cfg.seed = seed;
        cfg.cone_spec = cone;
        py::list out;
        for (const TrialRecord& r : run_experiment(cfg)) {
          py::dict d;
          d["trial"] = r.trial_index;
          d["status"] = std::string(to_string(r.status));
          d["grassmann"] = r.grassmann;
          d["kappa"] = r.kappa;
          d["renegar"] = condition_dict(r.renegar);
          d["sandwich_ok"] = r.sandwich_ok;
          out.append(d);
        }
        return out;
      },
      py::arg("n"), py::arg("m"), py::arg("trials") = 100, py::arg("seed") = 0, py::arg("cone") = "");
}
