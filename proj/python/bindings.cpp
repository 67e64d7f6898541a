// Python bindings for the main operations: spectral synthesis and
// decomposition, operator-integral evaluation, perturbation identities,
// norm bounds and the Monte-Carlo tail experiment. Matrices cross the
// boundary as numpy complex arrays via Eigen.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "doi/bounds.hpp"
#include "doi/perturbation.hpp"
#include "doi/random_ensemble.hpp"
#include "doi/serialization.hpp"
#include "doi/verification.hpp"

namespace py = pybind11;

namespace {

doi::JordanStructureSpec spec_from_blocks(
    const std::vector<std::pair<doi::Complex, int>>& blocks) {
    doi::JordanStructureSpec spec;
    for (const auto& [lam, size] : blocks) spec.blocks.push_back({lam, size});
    spec.check();
    return spec;
}

py::dict bound_report_dict(const doi::BoundReport& r) {
    py::dict d;
    d["kind"] = r.kind;
    d["direction"] = r.is_upper ? "upper" : "lower";
    d["bound"] = r.bound_value;
    d["actual"] = r.actual_value;
    d["slack"] = r.slack;
    d["satisfied"] = r.satisfied;
    py::list terms;
    for (const auto& t : r.terms) terms.append(py::make_tuple(t.name, t.value));
    d["terms"] = terms;
    if (r.min_variant) d["min_variant"] = *r.min_variant;
    return d;
}

}  // namespace

PYBIND11_MODULE(_gdoi, m) {
    m.doc() = "Generalized double/triple operator integrals for arbitrary complex matrices";

    py::register_exception<doi::Error>(m, "GdoiError", PyExc_RuntimeError);

    py::class_<doi::SpectralComponent>(m, "SpectralComponent")
        .def_readonly("eigenvalue", &doi::SpectralComponent::eigenvalue)
        .def_readonly("projector", &doi::SpectralComponent::projector)
        .def_readonly("nilpotent", &doi::SpectralComponent::nilpotent)
        .def_readonly("index", &doi::SpectralComponent::index);

    py::class_<doi::SpectralDecomposition>(m, "SpectralDecomposition")
        .def_readonly("n", &doi::SpectralDecomposition::n)
        .def_readonly("components", &doi::SpectralDecomposition::components)
        .def_readonly("cond_estimate", &doi::SpectralDecomposition::cond_estimate)
        .def("reconstruct", &doi::SpectralDecomposition::reconstruct)
        .def("projector_part", &doi::SpectralDecomposition::projector_part)
        .def("eigenvalues", &doi::SpectralDecomposition::eigenvalues)
        .def("max_index", &doi::SpectralDecomposition::max_index);

    py::class_<doi::AnalyticFn1>(m, "AnalyticFn1")
        .def("__call__", &doi::AnalyticFn1::value)
        .def("derivative", &doi::AnalyticFn1::derivative, py::arg("order"), py::arg("z"))
        .def("radius", &doi::AnalyticFn1::radius);

    py::class_<doi::AnalyticFn2>(m, "AnalyticFn2")
        .def("__call__", &doi::AnalyticFn2::value)
        .def("partial", &doi::AnalyticFn2::partial, py::arg("q1"), py::arg("q2"), py::arg("z1"),
             py::arg("z2"));

    py::class_<doi::AnalyticFn3>(m, "AnalyticFn3")
        .def("__call__", &doi::AnalyticFn3::value)
        .def("partial", &doi::AnalyticFn3::partial);

    m.def("make_function", &doi::make_function, py::arg("descriptor"),
          "Build a one-variable function from a registry descriptor "
          "(poly:[...], exp, power:k, identity, const:c)");
    m.def("make_function2", &doi::make_function2, py::arg("descriptor"),
          "Build a two-variable symbol (const:c, proj1, proj2, poly2:[[..]], dd1:<descriptor>)");
    m.def("divided_diff_1",
          [](const doi::AnalyticFn1& f, double sep_tol, bool allow_confluent) {
              return doi::divided_diff_1(f, {sep_tol, allow_confluent});
          },
          py::arg("f"), py::arg("sep_tol") = 0.0, py::arg("allow_confluent") = false);
    m.def("divided_diff_2",
          [](const doi::AnalyticFn1& f, double sep_tol, bool allow_confluent) {
              return doi::divided_diff_2(f, {sep_tol, allow_confluent});
          },
          py::arg("f"), py::arg("sep_tol") = 0.0, py::arg("allow_confluent") = false);

    m.def("synthesize",
          [](const std::vector<std::pair<doi::Complex, int>>& blocks, const doi::CMat& basis,
             double cond_cap) {
              auto r = doi::synthesize(spec_from_blocks(blocks), basis, cond_cap);
              return py::make_tuple(r.matrix, r.decomposition);
          },
          py::arg("blocks"), py::arg("basis"), py::arg("cond_cap") = 1e3,
          "Build X = U J U^-1 and its exact spectral data from (eigenvalue, size) blocks");
    m.def("decompose", &doi::decompose, py::arg("x"), py::arg("group_tol") = 1e-6);
    m.def("validate",
          [](const doi::SpectralDecomposition& dec, double tol) {
              const auto rep = doi::validate(dec, tol);
              py::dict d;
              d["all_pass"] = rep.all_pass;
              d["max_residual"] = rep.max_residual;
              py::list checks;
              for (const auto& c : rep.checks)
                  checks.append(py::make_tuple(c.name, c.residual, c.pass));
              d["checks"] = checks;
              return d;
          },
          py::arg("dec"), py::arg("tol") = 1e-10);
    m.def("split_pn", &doi::split_pn, py::arg("dec"));

    m.def("eval_matrix_fn1", &doi::eval_matrix_fn1, py::arg("f"), py::arg("dec"));
    m.def("eval_matrix_fn2", &doi::eval_matrix_fn2, py::arg("f"), py::arg("dec1"),
          py::arg("dec2"));
    m.def("gdoi", &doi::gdoi, py::arg("beta"), py::arg("dec1"), py::arg("dec2"), py::arg("y"));
    m.def("gdoi_split",
          [](const doi::AnalyticFn2& beta, const doi::SpectralDecomposition& d1,
             const doi::SpectralDecomposition& d2, const doi::CMat& y) {
              const auto parts = doi::gdoi_split(beta, d1, d2, y);
              return py::make_tuple(parts.pp, parts.pn, parts.np, parts.nn);
          },
          py::arg("beta"), py::arg("dec1"), py::arg("dec2"), py::arg("y"));
    m.def("doi_hermitian", &doi::doi_hermitian, py::arg("beta"), py::arg("dec1"),
          py::arg("dec2"), py::arg("y"), py::arg("tol") = 1e-12);
    m.def("doi_variant_pre", &doi::doi_variant_pre, py::arg("beta"), py::arg("dec1"),
          py::arg("dec2"), py::arg("y"));
    m.def("doi_variant_post", &doi::doi_variant_post, py::arg("beta"), py::arg("dec1"),
          py::arg("dec2"), py::arg("y"));
    m.def("compose", &doi::compose, py::arg("beta"), py::arg("gamma"), py::arg("dec1"),
          py::arg("dec2"), py::arg("y"));
    m.def("gtoi", &doi::gtoi, py::arg("beta"), py::arg("dec1"), py::arg("dec2"), py::arg("dec3"),
          py::arg("y1"), py::arg("y2"));

    m.def("perturbation_commutator",
          [](const doi::AnalyticFn1& f, const doi::SpectralDecomposition& d1,
             const doi::SpectralDecomposition& d2, const doi::CMat& y, double sep_tol) {
              const auto c = doi::perturbation_commutator(f, d1, d2, y, sep_tol);
              return py::make_tuple(c.lhs, c.rhs, c.residual);
          },
          py::arg("f"), py::arg("dec1"), py::arg("dec2"), py::arg("y"), py::arg("sep_tol") = 0.0);
    m.def("perturbation_difference",
          [](const doi::AnalyticFn1& f, const doi::SpectralDecomposition& d1,
             const doi::SpectralDecomposition& d2, double sep_tol) {
              const auto c = doi::perturbation_difference(f, d1, d2, sep_tol);
              return py::make_tuple(c.lhs, c.rhs, c.residual);
          },
          py::arg("f"), py::arg("dec1"), py::arg("dec2"), py::arg("sep_tol") = 0.0);
    m.def("mu_extra_term", &doi::mu_extra_term, py::arg("f"), py::arg("dec1"), py::arg("dec2"),
          py::arg("sep_tol") = 0.0);
    m.def("divergence_triple",
          [](const doi::CMat& mu, double tol) {
              const auto t = doi::divergence_triple(mu, tol);
              return py::make_tuple(t.ell1, t.ell2, t.r);
          },
          py::arg("mu"), py::arg("tol") = 1e-8);
    m.def("telescope_residual", &doi::telescope_residual, py::arg("f"), py::arg("dec_a"),
          py::arg("dec_b"), py::arg("dec_x"), py::arg("y"), py::arg("sep_tol") = 0.0);
    m.def("continuity_probe",
          [](const doi::AnalyticFn2& beta, const doi::SpectralDecomposition& d1,
             const doi::SpectralDecomposition& d2, const doi::CMat& y,
             const std::vector<double>& scales, uint64_t seed) {
              const auto r = doi::continuity_probe(beta, d1, d2, y, scales, seed);
              return py::make_tuple(r.scales, r.deviations, r.accepted);
          },
          py::arg("beta"), py::arg("dec1"), py::arg("dec2"), py::arg("y"), py::arg("scales"),
          py::arg("seed"));

    m.def("reverse_triangle_lower", &doi::reverse_triangle_lower, py::arg("norms"));
    m.def("gdoi_upper_bound",
          [](const doi::AnalyticFn2& beta, const doi::SpectralDecomposition& d1,
             const doi::SpectralDecomposition& d2, const doi::CMat& y) {
              return bound_report_dict(doi::gdoi_upper_bound(beta, d1, d2, y));
          },
          py::arg("beta"), py::arg("dec1"), py::arg("dec2"), py::arg("y"));
    m.def("gdoi_lower_bound",
          [](const doi::AnalyticFn2& beta, const doi::SpectralDecomposition& d1,
             const doi::SpectralDecomposition& d2, const doi::CMat& y) {
              return bound_report_dict(doi::gdoi_lower_bound(beta, d1, d2, y));
          },
          py::arg("beta"), py::arg("dec1"), py::arg("dec2"), py::arg("y"));
    m.def("lipschitz_bounds",
          [](const doi::AnalyticFn1& f, const doi::SpectralDecomposition& d1,
             const doi::SpectralDecomposition& d2, double sep_tol) {
              const auto lb = doi::lipschitz_bounds(f, d1, d2, sep_tol);
              return py::make_tuple(bound_report_dict(lb.upper), bound_report_dict(lb.lower));
          },
          py::arg("f"), py::arg("dec1"), py::arg("dec2"), py::arg("sep_tol") = 0.0);
    m.def("holder_upper_bound",
          [](const doi::AnalyticFn1& f, const doi::SpectralDecomposition& d1,
             const doi::SpectralDecomposition& d2, double omega, double nu, double nu_prime,
             double cap_m) {
              const auto hr = doi::holder_upper_bound(f, d1, d2, {omega, nu, nu_prime, cap_m});
              py::dict d = bound_report_dict(hr.report);
              d["constants"] = py::dict(
                  py::arg("omega") = hr.constants.omega, py::arg("nu") = hr.constants.nu,
                  py::arg("cap_m") = hr.constants.cap_m, py::arg("c") = hr.constants.c,
                  py::arg("c_prime") = hr.constants.c_prime,
                  py::arg("d_omega") = hr.constants.d_omega);
              return d;
          },
          py::arg("f"), py::arg("dec1"), py::arg("dec2"), py::arg("omega"), py::arg("nu"),
          py::arg("nu_prime") = 0.0, py::arg("cap_m") = 0.0);

    py::class_<doi::EnsembleSpec>(m, "EnsembleSpec")
        .def(py::init([](std::vector<int> block_sizes, double radius, double cond_cap,
                         double pair_separation) {
                 doi::EnsembleSpec spec;
                 spec.block_sizes = std::move(block_sizes);
                 spec.eigenvalues.r_outer = radius;
                 if (cond_cap <= 1.0) {
                     spec.basis.cond_cap = 1.0;
                 } else {
                     spec.basis.cond_cap = cond_cap;
                 }
                 spec.pair_separation = pair_separation;
                 spec.check();
                 return spec;
             }),
             py::arg("block_sizes"), py::arg("radius") = 1.0, py::arg("cond_cap") = 1.0,
             py::arg("pair_separation") = 0.1);

    m.def("sample_pair",
          [](const doi::EnsembleSpec& spec, uint64_t seed) {
              const auto p = doi::sample_pair(spec, seed);
              return py::make_tuple(p.first.matrix, p.first.decomposition, p.second.matrix,
                                    p.second.decomposition);
          },
          py::arg("spec"), py::arg("seed"));
    m.def("monte_carlo_tail",
          [](const doi::AnalyticFn1& f, const doi::EnsembleSpec& spec,
             std::vector<double> deltas, int trials, uint64_t seed) {
              const auto r = doi::monte_carlo_tail(f, spec, std::move(deltas), trials, seed);
              py::dict d;
              d["delta"] = r.delta_grid;
              d["empirical_freq"] = r.empirical_freq;
              d["markov_bound"] = r.markov_bound;
              d["margin"] = r.margin;
              d["e_estimate"] = r.e_estimate;
              d["b_terms"] = py::make_tuple(r.b_terms.b1, r.b_terms.b2, r.b_terms.b3,
                                            r.b_terms.b4);
              d["trials"] = r.trials;
              d["seed"] = r.seed;
              d["cap_violations"] = r.cap_violations;
              d["all_satisfied"] = r.all_satisfied;
              return d;
          },
          py::arg("f"), py::arg("spec"), py::arg("deltas"), py::arg("trials"), py::arg("seed"));

    m.def("run_suite",
          [](const std::string& name, int count, uint64_t seed) {
              const auto rep = doi::run_suite(name, count, seed);
              py::dict d;
              d["suite"] = rep.suite;
              d["count"] = rep.count;
              d["seed"] = rep.seed;
              d["tolerance"] = rep.tolerance;
              d["max_residual"] = rep.max_residual;
              d["pass"] = rep.pass;
              py::dict metrics;
              for (const auto& [k, v] : rep.metrics) metrics[py::str(k)] = v;
              d["metrics"] = metrics;
              return d;
          },
          py::arg("name"), py::arg("count"), py::arg("seed"));
}
