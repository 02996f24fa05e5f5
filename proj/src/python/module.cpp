#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

#include "embedfield/constitutive.hpp"
#include "embedfield/grid.hpp"
#include "embedfield/heat.hpp"
#include "embedfield/nn_weights.hpp"
#include "embedfield/norms.hpp"
#include "embedfield/tensor.hpp"

namespace py = pybind11;
using namespace embedfield;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

// (n,) is read as n one-component elements, (n, c) as n elements of c.
FieldBuffer to_field(const Array& a) {
  if (a.ndim() != 1 && a.ndim() != 2) throw py::value_error("expected a 1-D or 2-D array");
  const auto n = static_cast<std::size_t>(a.shape(0));
  const std::size_t c = a.ndim() == 2 ? static_cast<std::size_t>(a.shape(1)) : 1;
  FieldBuffer f(n, c);
  if (f.size()) std::memcpy(f.data(), a.data(), f.size() * sizeof(double));
  return f;
}

Array to_array(const FieldBuffer& f, bool flat = false) {
  const auto n = static_cast<py::ssize_t>(f.elements());
  const auto c = static_cast<py::ssize_t>(f.components());
  Array a = flat ? Array({n}) : Array({n, c});
  if (f.size()) std::memcpy(a.mutable_data(), f.data(), f.size() * sizeof(double));
  return a;
}

StrainRange range_from(double half_width) { return StrainRange::symmetric(half_width); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native field kernels: Hooke's law, strain symmetrisation, error norms, heat sweeps";

  py::register_exception<ShapeMismatch>(m, "ShapeMismatch", PyExc_ValueError);

  py::class_<LameParams>(m, "LameParams")
      .def(py::init<>())
      .def(py::init([](double lambda, double mu) { return LameParams{lambda, mu}; }), py::arg("lam"),
           py::arg("mu"))
      .def_readwrite("lam", &LameParams::lambda)
      .def_readwrite("mu", &LameParams::mu)
      .def("__repr__", [](const LameParams& p) {
        return "LameParams(lam=" + std::to_string(p.lambda) + ", mu=" + std::to_string(p.mu) + ")";
      });

  m.def("lame_from_engineering", &lame_from_engineering, py::arg("youngs_modulus"),
        py::arg("poisson_ratio"));
  m.def("stiffness_matrix", [](const LameParams& p) {
    const Matrix6 c = stiffness_matrix(p);
    Array out({6, 6});
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) out.mutable_at(i, j) = c[i][j];
    return out;
  });
  m.def("hooke_native", [](const Array& strain, const LameParams& p) {
    return to_array(hooke_native(to_field(strain), p));
  }, py::arg("strain"), py::arg("lame"));
  m.def("symmetrize_gradient", [](const Array& grad) {
    return to_array(symmetrize_gradient(to_field(grad)));
  });
  m.def("synth_strain_field", [](std::size_t n, std::uint64_t seed, double half_width) {
    return to_array(synth_strain_field(n, seed, range_from(half_width)));
  }, py::arg("n"), py::arg("seed"), py::arg("half_width") = kDefaultStrainHalfWidth);

  m.def("error_norms", [](const Array& a, const Array& b) {
    const ErrorNorms e = error_norms(to_field(a), to_field(b));
    return py::dict(py::arg("l2_mean") = e.l2_mean, py::arg("linf") = e.linf);
  });

  m.def("exact_nn_forward", [](const Array& strain, const LameParams& p, double half_width) {
    return to_array(nn_forward(build_exact_nn_weights(p, range_from(half_width)), to_field(strain)));
  }, py::arg("strain"), py::arg("lame"), py::arg("half_width") = kDefaultStrainHalfWidth,
     "Forward pass of the exactly-constructed 6-20-6 Hooke network.");

  m.def("compute_gamma", &compute_gamma, py::arg("diffusivity"), py::arg("dt"), py::arg("dx"));

  py::class_<StructuredGrid>(m, "StructuredGrid")
      .def_readonly("nx", &StructuredGrid::nx)
      .def_readonly("ny", &StructuredGrid::ny)
      .def_readonly("lx", &StructuredGrid::lx)
      .def_readonly("ly", &StructuredGrid::ly)
      .def_readonly("dx", &StructuredGrid::dx)
      .def("face_centres", [](const StructuredGrid& g, const std::string& patch) {
        auto p = parse_patch(patch);
        if (!p) throw py::value_error("unknown patch '" + patch + "'");
        return to_array(g.patch_faces(*p));
      });
  m.def("make_grid", &make_grid, py::arg("nx"), py::arg("ny"), py::arg("lx"), py::arg("ly"));

  m.def("native_fd_step", [](Array T, double gamma, const StructuredGrid& grid) {
    FieldBuffer f = to_field(T);
    require_components(f, 1, "native_fd_step");
    const double change = native_fd_step(f, gamma, grid);
    return py::make_tuple(to_array(f, true), change);
  }, py::arg("T"), py::arg("gamma"), py::arg("grid"), "One in-place sweep; returns (T, max change).");

  m.def("solve_heat", [](const StructuredGrid& grid, std::array<double, 4> bc, double diffusivity,
                         double dt, double tol, std::size_t max_iters) {
    HeatConfig cfg = make_heat_config(grid, bc[0], bc[1], bc[2], bc[3]);
    cfg.diffusivity = diffusivity;
    cfg.dt = dt;
    cfg.tol = tol;
    cfg.max_iters = max_iters;
    cfg.validate();
    SolveReport r = solve_steady(cfg);
    py::dict out;
    out["T"] = to_array(r.T, true);
    out["iterations"] = r.iterations;
    out["converged"] = r.converged;
    out["residual"] = r.residual_history.empty() ? 0.0 : r.residual_history.back();
    out["centre"] = centre_value(r.T, grid);
    return out;
  }, py::arg("grid"), py::arg("bc"), py::arg("diffusivity") = 4e-5, py::arg("dt") = 0.005,
     py::arg("tol") = 1e-8, py::arg("max_iters") = 1'000'000,
     "Steady solve; bc is (left, bottom, right, top) in K.");
}
