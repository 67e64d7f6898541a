#include "doi/serialization.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace doi {

namespace {

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw InvalidInput(what + ": expected [re, im]");
    return Complex(j[0].get<double>(), j[1].get<double>());
}

std::string format_csv_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

Json matrix_to_json(const CMat& a) {
    Json entries = Json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(complex_to_json(a(i, j)));
        entries.push_back(std::move(row));
    }
    return Json{{"n", a.rows()}, {"entries", std::move(entries)}};
}

CMat matrix_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("entries"))
        throw InvalidInput("matrix: expected {\"n\": .., \"entries\": ..}");
    const int n = j["n"].get<int>();
    if (n <= 0) throw InvalidInput("matrix: n must be positive");
    const auto& entries = j["entries"];
    if (!entries.is_array() || static_cast<int>(entries.size()) != n)
        throw InvalidInput("matrix: entries must hold n rows");
    CMat a(n, n);
    for (int r = 0; r < n; ++r) {
        const auto& row = entries[r];
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw InvalidInput("matrix: row " + std::to_string(r) + " must hold n entries");
        for (int c = 0; c < n; ++c) a(r, c) = complex_from_json(row[c], "matrix entry");
    }
    check_matrix(a, "matrix_from_json");
    return a;
}

Json spec_to_json(const JordanStructureSpec& spec) {
    Json blocks = Json::array();
    for (const auto& b : spec.blocks)
        blocks.push_back(Json{{"re", b.eigenvalue.real()},
                              {"im", b.eigenvalue.imag()},
                              {"size", b.size}});
    return Json{{"blocks", std::move(blocks)}};
}

JordanStructureSpec spec_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("blocks") || !j["blocks"].is_array())
        throw InvalidInput("spec: expected {\"blocks\": [..]}");
    JordanStructureSpec spec;
    for (const auto& b : j["blocks"]) {
        if (!b.is_object() || !b.contains("re") || !b.contains("im") || !b.contains("size"))
            throw InvalidInput("spec: block needs re, im and size");
        spec.blocks.push_back(
            {Complex(b["re"].get<double>(), b["im"].get<double>()), b["size"].get<int>()});
    }
    spec.check();
    return spec;
}

Json decomposition_to_json(const SpectralDecomposition& dec) {
    Json components = Json::array();
    for (const auto& c : dec.components)
        components.push_back(Json{{"eigenvalue", complex_to_json(c.eigenvalue)},
                                  {"index", c.index},
                                  {"projector", matrix_to_json(c.projector)},
                                  {"nilpotent", matrix_to_json(c.nilpotent)}});
    return Json{{"n", dec.n},
                {"cond_estimate", dec.cond_estimate},
                {"components", std::move(components)}};
}

SpectralDecomposition decomposition_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("components"))
        throw InvalidInput("decomposition: expected n and components");
    SpectralDecomposition dec;
    dec.n = j["n"].get<int>();
    dec.cond_estimate = j.value("cond_estimate", 0.0);
    for (const auto& c : j["components"]) {
        SpectralComponent comp;
        comp.eigenvalue = complex_from_json(c.at("eigenvalue"), "component eigenvalue");
        comp.index = c.at("index").get<int>();
        comp.projector = matrix_from_json(c.at("projector"));
        comp.nilpotent = matrix_from_json(c.at("nilpotent"));
        dec.components.push_back(std::move(comp));
    }
    return dec;
}

Json validation_to_json(const ValidationReport& rep) {
    Json checks = Json::array();
    for (const auto& c : rep.checks)
        checks.push_back(Json{{"name", c.name}, {"residual", c.residual}, {"pass", c.pass}});
    return Json{{"all_pass", rep.all_pass},
                {"max_residual", rep.max_residual},
                {"checks", std::move(checks)}};
}

Json bound_report_to_json(const BoundReport& rep) {
    Json terms = Json::array();
    for (const auto& t : rep.terms)
        terms.push_back(Json{{"name", t.name}, {"value", t.value}});
    Json j{{"kind", rep.kind},
           {"direction", rep.is_upper ? "upper" : "lower"},
           {"bound", rep.bound_value},
           {"actual", rep.actual_value},
           {"slack", rep.slack},
           {"satisfied", rep.satisfied},
           {"terms", std::move(terms)}};
    if (rep.min_variant) j["min_variant"] = *rep.min_variant;
    return j;
}

Json suite_report_to_json(const SuiteReport& rep) {
    Json instances = Json::array();
    for (const auto& inst : rep.instances)
        instances.push_back(
            Json{{"index", inst.index}, {"residual", inst.residual}, {"pass", inst.pass}});
    Json metrics = Json::object();
    for (const auto& [name, value] : rep.metrics) metrics[name] = value;
    return Json{{"suite", rep.suite},
                {"count", rep.count},
                {"seed", rep.seed},
                {"tolerance", rep.tolerance},
                {"max_residual", rep.max_residual},
                {"pass", rep.pass},
                {"metrics", std::move(metrics)},
                {"instances", std::move(instances)}};
}

Json ensemble_to_json(const EnsembleSpec& spec) {
    return Json{
        {"block_sizes", spec.block_sizes},
        {"eigenvalues",
         Json{{"kind",
               spec.eigenvalues.kind == EigenvalueSampler::Kind::uniform_disk ? "uniform_disk"
                                                                              : "annulus"},
              {"center", complex_to_json(spec.eigenvalues.center)},
              {"r_inner", spec.eigenvalues.r_inner},
              {"r_outer", spec.eigenvalues.r_outer}}},
        {"basis",
         Json{{"kind", spec.basis.kind == BasisSampler::Kind::identity ? "identity" : "random"},
              {"cond_cap", spec.basis.cond_cap}}},
        {"pair_separation", spec.pair_separation},
        {"max_retries", spec.max_retries}};
}

EnsembleSpec ensemble_from_json(const Json& j) {
    EnsembleSpec spec;
    if (!j.is_object() || !j.contains("block_sizes"))
        throw InvalidInput("ensemble: expected block_sizes");
    spec.block_sizes = j["block_sizes"].get<std::vector<int>>();
    if (j.contains("eigenvalues")) {
        const auto& e = j["eigenvalues"];
        const std::string kind = e.value("kind", "uniform_disk");
        if (kind == "uniform_disk")
            spec.eigenvalues.kind = EigenvalueSampler::Kind::uniform_disk;
        else if (kind == "annulus")
            spec.eigenvalues.kind = EigenvalueSampler::Kind::annulus;
        else
            throw InvalidInput("ensemble: unknown eigenvalue sampler '" + kind + "'");
        if (e.contains("center")) spec.eigenvalues.center = complex_from_json(e["center"], "center");
        spec.eigenvalues.r_inner = e.value("r_inner", 0.0);
        spec.eigenvalues.r_outer = e.value("r_outer", 1.0);
    }
    if (j.contains("basis")) {
        const auto& b = j["basis"];
        const std::string kind = b.value("kind", "random");
        if (kind == "identity")
            spec.basis.kind = BasisSampler::Kind::identity;
        else if (kind == "random")
            spec.basis.kind = BasisSampler::Kind::random;
        else
            throw InvalidInput("ensemble: unknown basis sampler '" + kind + "'");
        spec.basis.cond_cap = b.value("cond_cap", 100.0);
    }
    spec.pair_separation = j.value("pair_separation", 0.1);
    spec.max_retries = j.value("max_retries", 1000);
    spec.check();
    return spec;
}

Json tail_result_to_json(const TailExperimentResult& res) {
    return Json{{"trials", res.trials},
                {"seed", res.seed},
                {"e_estimate", res.e_estimate},
                {"b_terms",
                 Json{{"b1", res.b_terms.b1},
                      {"b2", res.b_terms.b2},
                      {"b3", res.b_terms.b3},
                      {"b4", res.b_terms.b4},
                      {"sum", res.b_terms.sum()}}},
                {"cap_violations", res.cap_violations},
                {"all_satisfied", res.all_satisfied},
                {"delta", res.delta_grid},
                {"empirical_freq", res.empirical_freq},
                {"markov_bound", res.markov_bound},
                {"margin", res.margin}};
}

std::string tail_result_to_csv(const TailExperimentResult& res) {
    std::ostringstream out;
    out << "delta,empirical_freq,markov_bound,margin\n";
    for (size_t i = 0; i < res.delta_grid.size(); ++i)
        out << format_csv_double(res.delta_grid[i]) << ','
            << format_csv_double(res.empirical_freq[i]) << ','
            << format_csv_double(res.markov_bound[i]) << ','
            << format_csv_double(res.margin[i]) << '\n';
    return out.str();
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open '" + path + "'");
    try {
        Json j;
        in >> j;
        return j;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput("cannot parse '" + path + "': " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write '" + path + "'");
    out << content;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace doi
