#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gelfand/analysis.hpp"
#include "gelfand/errors.hpp"
#include "gelfand/geometry.hpp"
#include "gelfand/mesh.hpp"
#include "gelfand/nonlinearity.hpp"
#include "gelfand/norms.hpp"
#include "gelfand/solver.hpp"
#include "gelfand/stability.hpp"

namespace py = pybind11;
using namespace gelfand;

PYBIND11_MODULE(_gelfand, m) {
  m.doc() = "Radial semilinear elliptic problems on Riemannian models: minimal "
            "branches, extremal parameters, semistability, Hardy inequalities.";

  py::register_exception<DomainError>(m, "DomainError");
  py::register_exception<GeometryError>(m, "GeometryError");
  py::register_exception<ValidityError>(m, "ValidityError");
  py::register_exception<NoConvergence>(m, "NoConvergence");
  py::register_exception<SingularJacobian>(m, "SingularJacobian");
  py::register_exception<HypothesisError>(m, "HypothesisError");
  py::register_exception<gelfand::OverflowError>(m, "EvalOverflowError");

  py::enum_<SpaceForm>(m, "SpaceForm")
      .value("Euclidean", SpaceForm::Euclidean)
      .value("Hyperbolic", SpaceForm::Hyperbolic)
      .value("Elliptic", SpaceForm::Elliptic)
      .value("Custom", SpaceForm::Custom);

  py::enum_<NonlinearityKind>(m, "NonlinearityKind")
      .value("ExpModel", NonlinearityKind::ExpModel)
      .value("PowerModel", NonlinearityKind::PowerModel)
      .value("GelfandClassic", NonlinearityKind::GelfandClassic)
      .value("PowerClassic", NonlinearityKind::PowerClassic)
      .value("Custom", NonlinearityKind::Custom);

  py::class_<RiemannianModel>(m, "RiemannianModel")
      .def_readonly("dim", &RiemannianModel::dim)
      .def_readonly("radius", &RiemannianModel::radius)
      .def_readonly("kind", &RiemannianModel::kind)
      .def("psi", [](const RiemannianModel& s, double r) { return s.psi(r); })
      .def("psi_prime", [](const RiemannianModel& s, double r) { return s.psi_prime(r); })
      .def("psi_second", [](const RiemannianModel& s, double r) { return s.psi_second(r); })
      .def_property_readonly("curvature", [](const RiemannianModel& s) {
        return s.curvature ? py::cast(*s.curvature) : py::none().cast<py::object>();
      });

  py::class_<Nonlinearity>(m, "Nonlinearity")
      .def_readonly("kind", &Nonlinearity::kind)
      .def_readonly("m", &Nonlinearity::m)
      .def("f", [](const Nonlinearity& nl, double u) { return eval(nl, u); })
      .def("f_prime", [](const Nonlinearity& nl, double u) { return eval_prime(nl, u); });

  m.def("make_space_form", &make_space_form, py::arg("kind"), py::arg("n"), py::arg("R"));
  m.def("make_custom_model", &make_custom_model, py::arg("n"), py::arg("R"), py::arg("psi"),
        py::arg("psi_prime"), py::arg("psi_second"));
  m.def("phi", &phi, py::arg("model"), py::arg("r"));
  m.def("sup_phi_over_psi", &sup_phi_over_psi);
  m.def("hardy_constant", &hardy_constant);
  m.def("critical_radii", [](const RiemannianModel& model) {
    auto c = critical_radii(model);
    return py::make_tuple(c.r0, c.re, c.rp);
  });
  m.def("delta_psi", &delta_psi);

  m.def("make_exp_model", &make_exp_model);
  m.def("make_power_model", &make_power_model, py::arg("model"), py::arg("m"),
        py::arg("allow_subcritical") = false);
  m.def("make_gelfand_classic", &make_gelfand_classic);
  m.def("make_power_classic", &make_power_classic, py::arg("m"));

  m.def("sphere_area", &sphere_area, py::arg("n"));

  py::class_<BranchPoint>(m, "BranchPoint")
      .def_readonly("lam", &BranchPoint::lambda)
      .def_readonly("u", &BranchPoint::u)
      .def_readonly("sup_u", &BranchPoint::sup_u)
      .def_readonly("l1_norm", &BranchPoint::l1_norm)
      .def_readonly("lambda1", &BranchPoint::lambda1)
      .def_readonly("newton_iters", &BranchPoint::newton_iters);

  py::class_<Branch>(m, "Branch")
      .def_readonly("points", &Branch::points)
      .def_readonly("lambda_star_estimate", &Branch::lambda_star_estimate)
      .def_readonly("fold_bracket", &Branch::fold_bracket)
      .def("csv", [](const Branch& b) { return branch_csv(b); });

  m.def(
      "continue_branch",
      [](const RiemannianModel& model, const Nonlinearity& nl, int N, double lambda_step0,
         double newton_tol, bool compute_lambda1, bool fold_polish) {
        RadialMesh mesh = RadialMesh::uniform(model.radius, N);
        ContinuationOptions opts;
        opts.lambda_step0 = lambda_step0;
        opts.newton_tol = newton_tol;
        opts.compute_lambda1 = compute_lambda1;
        opts.fold_polish = fold_polish;
        return continue_branch(model, mesh, nl, opts);
      },
      py::arg("model"), py::arg("nl"), py::arg("N") = 1024, py::arg("lambda_step0") = -1.0,
      py::arg("newton_tol") = 1e-10, py::arg("compute_lambda1") = true,
      py::arg("fold_polish") = true);

  m.def(
      "principal_eigenvalue",
      [](const RiemannianModel& model, const Nonlinearity& nl, double lam,
         const std::vector<double>& u, double eig_tol) {
        RadialMesh mesh = RadialMesh::uniform(model.radius, static_cast<int>(u.size()));
        EigenPair p = principal_eigenvalue(model, mesh, nl, lam, u, eig_tol);
        return py::make_tuple(p.lambda1, p.phi1);
      },
      py::arg("model"), py::arg("nl"), py::arg("lam"), py::arg("u"), py::arg("eig_tol") = 1e-10);

  m.def("regularity_exponents",
        [](int n, std::optional<double> mm) {
          auto e = regularity_exponents(n, mm);
          return py::make_tuple(e.p0, e.p1, e.n_m);
        },
        py::arg("n"), py::arg("m") = py::none());

  m.def(
      "closed_form_extremal",
      [](const RiemannianModel& model, NonlinearityKind family, std::optional<double> mm) {
        auto cf = closed_form_extremal(model, family, mm);
        return py::make_tuple(cf.lambda_star,
                              py::cpp_function([cf](double r) { return cf.u_star(r); }));
      },
      py::arg("model"), py::arg("family"), py::arg("m") = py::none());

  m.def(
      "verify_extremal",
      [](const RiemannianModel& model, const Nonlinearity& nl, const std::vector<int>& ladder) {
        ExtremalReport rep = verify_extremal(model, nl, ladder);
        return to_json(rep);
      },
      py::arg("model"), py::arg("nl"), py::arg("ladder"));

  m.def(
      "hardy_verify",
      [](const RiemannianModel& model, int trials, unsigned long long seed, int N) {
        HardyReport r = hardy_verify(model, trials, seed, N);
        py::dict d;
        d["h_constant"] = r.h_constant;
        d["worst_margin"] = r.worst_margin;
        d["worst_margin_rel"] = r.worst_margin_rel;
        d["worst_poincare_margin"] = r.worst_poincare_margin;
        d["worst_poincare_rel"] = r.worst_poincare_rel;
        d["trials"] = r.trials;
        return d;
      },
      py::arg("model"), py::arg("trials") = 200, py::arg("seed") = 0, py::arg("N") = 2048);

  m.def("power_semistability_conditions",
        [](const RiemannianModel& model, double mm) {
          auto c = power_semistability_conditions(model, mm);
          return py::make_tuple(c.cond1, c.cond2);
        },
        py::arg("model"), py::arg("m"));
}
