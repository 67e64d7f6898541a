// Command line front end: synthesizes instances, evaluates operator
// integrals, runs the identity/bound verification suites and Monte-Carlo tail
// experiments. Every command is deterministic given its inputs and seed, and
// reports embed the resolved configuration so a run is self-describing.
//
// Exit codes: 0 success, 1 verification failure, 2 input error, 3 numerical
// precondition failure.

#include <filesystem>
#include <iostream>

#include "CLI11.hpp"

#include "doi/bounds.hpp"
#include "doi/perturbation.hpp"
#include "doi/random_ensemble.hpp"
#include "doi/serialization.hpp"
#include "doi/verification.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInputError = 2;
constexpr int kExitNumericalError = 3;

doi::Json config_echo(std::initializer_list<std::pair<std::string, doi::Json>> fields) {
    doi::Json cfg = doi::Json::object();
    for (const auto& [k, v] : fields) cfg[k] = v;
    return cfg;
}

void emit(const doi::Json& report, const std::string& out_path) {
    const std::string text = doi::dump_json(report);
    if (out_path.empty())
        std::cout << text;
    else
        doi::write_text_file(out_path, text);
}

doi::CMat make_basis(const std::string& mode, int n, double cond_cap, uint64_t seed) {
    if (mode == "identity") return doi::CMat::Identity(n, n);
    if (mode == "random") {
        doi::Rng rng(seed);
        const double cond = std::exp(rng.uniform01() * std::log(std::max(1.0, cond_cap)));
        return doi::random_basis(rng, n, cond);
    }
    throw doi::InvalidInput("--basis must be 'identity' or 'random'");
}

int cmd_synth(const std::string& spec_path, const std::string& basis_mode, double cond_cap,
              uint64_t seed, const std::string& out_dir) {
    const auto spec = doi::spec_from_json(doi::load_json_file(spec_path));
    const auto basis = make_basis(basis_mode, spec.total_size(), cond_cap, seed);
    const auto result = doi::synthesize(spec, basis, cond_cap);
    const auto validation = doi::validate(result.decomposition);

    std::filesystem::create_directories(out_dir);
    doi::write_text_file(out_dir + "/matrix.json",
                         doi::dump_json(doi::matrix_to_json(result.matrix)));
    doi::write_text_file(out_dir + "/decomposition.json",
                         doi::dump_json(doi::decomposition_to_json(result.decomposition)));

    doi::Json report{{"config", config_echo({{"command", "synth"},
                                             {"spec", spec_path},
                                             {"basis", basis_mode},
                                             {"cond_cap", cond_cap},
                                             {"seed", seed},
                                             {"out", out_dir}})},
                     {"cond_estimate", result.decomposition.cond_estimate},
                     {"validation", doi::validation_to_json(validation)}};
    std::cout << doi::dump_json(report);
    return kExitOk;
}

int cmd_eval(const std::string& func, const std::string& beta, const std::string& matrix_path,
             const std::string& matrix2_path, const std::string& y_path, double group_tol,
             const std::string& out_path) {
    if (!beta.empty()) {
        if (matrix_path.empty() || matrix2_path.empty() || y_path.empty())
            throw doi::InvalidInput("eval with --beta needs --matrix, --matrix2 and --y");
        const auto x1 = doi::matrix_from_json(doi::load_json_file(matrix_path));
        const auto x2 = doi::matrix_from_json(doi::load_json_file(matrix2_path));
        const auto y = doi::matrix_from_json(doi::load_json_file(y_path));
        const auto dec1 = doi::decompose(x1, group_tol);
        const auto dec2 = doi::decompose(x2, group_tol);
        const auto value = doi::gdoi(doi::make_function2(beta), dec1, dec2, y);
        doi::Json report{{"config", config_echo({{"command", "eval"},
                                                 {"beta", beta},
                                                 {"matrix", matrix_path},
                                                 {"matrix2", matrix2_path},
                                                 {"y", y_path},
                                                 {"group_tol", group_tol}})},
                         {"result", doi::matrix_to_json(value)}};
        emit(report, out_path);
        return kExitOk;
    }
    if (func.empty() || matrix_path.empty())
        throw doi::InvalidInput("eval needs --func with --matrix (or --beta with operands)");
    const auto x = doi::matrix_from_json(doi::load_json_file(matrix_path));
    const auto dec = doi::decompose(x, group_tol);
    const auto value = doi::eval_matrix_fn1(doi::make_function(func), dec);
    doi::Json report{{"config", config_echo({{"command", "eval"},
                                             {"func", func},
                                             {"matrix", matrix_path},
                                             {"group_tol", group_tol}})},
                     {"result", doi::matrix_to_json(value)}};
    emit(report, out_path);
    return kExitOk;
}

int cmd_verify(const std::string& suite, int count, uint64_t seed, double tol,
               const std::string& out_path) {
    static const std::vector<std::string> known = {"perturbation", "homomorphism", "split",
                                                   "telescope",    "continuity",   "norms"};
    if (std::find(known.begin(), known.end(), suite) == known.end()) {
        std::cerr << "unknown suite '" << suite << "'\n";
        return kExitInputError;
    }
    const auto report = doi::run_suite(suite, count, seed,
                                       tol > 0 ? std::optional<double>(tol) : std::nullopt);
    doi::Json j{{"config", config_echo({{"command", "verify"},
                                        {"suite", suite},
                                        {"count", count},
                                        {"seed", seed},
                                        {"tol", report.tolerance}})}};
    j.update(doi::suite_report_to_json(report));
    emit(j, out_path);
    return report.pass ? kExitOk : kExitVerifyFailed;
}

int cmd_bounds(const std::string& func, const std::string& spec1_path,
               const std::string& spec2_path, const std::string& basis_mode, double cond_cap,
               uint64_t seed, double omega, double nu, double nu_prime, double cap_m,
               const std::string& out_path) {
    const auto spec1 = doi::spec_from_json(doi::load_json_file(spec1_path));
    const auto spec2 = doi::spec_from_json(doi::load_json_file(spec2_path));
    const auto f = doi::make_function(func);
    const auto s1 = doi::synthesize(spec1, make_basis(basis_mode, spec1.total_size(), cond_cap, seed),
                                    cond_cap);
    const auto s2 = doi::synthesize(
        spec2, make_basis(basis_mode, spec2.total_size(), cond_cap, seed ^ 0x5bf03635ULL),
        cond_cap);

    const auto lip = doi::lipschitz_bounds(f, s1.decomposition, s2.decomposition);
    doi::Json j{{"config", config_echo({{"command", "bounds"},
                                        {"func", func},
                                        {"spec1", spec1_path},
                                        {"spec2", spec2_path},
                                        {"basis", basis_mode},
                                        {"cond_cap", cond_cap},
                                        {"seed", seed}})},
                {"lipschitz_upper", doi::bound_report_to_json(lip.upper)},
                {"lipschitz_lower", doi::bound_report_to_json(lip.lower)}};
    if (omega > 0) {
        doi::HolderParams hp;
        hp.omega = omega;
        hp.nu = nu;
        hp.nu_prime = nu_prime;
        hp.cap_m = cap_m;
        const auto holder = doi::holder_upper_bound(f, s1.decomposition, s2.decomposition, hp);
        j["holder_upper"] = doi::bound_report_to_json(holder.report);
        j["holder_constants"] = doi::Json{{"omega", holder.constants.omega},
                                          {"nu", holder.constants.nu},
                                          {"cap_m", holder.constants.cap_m},
                                          {"c", holder.constants.c},
                                          {"c_prime", holder.constants.c_prime},
                                          {"d_omega", holder.constants.d_omega}};
    }
    emit(j, out_path);
    return kExitOk;
}

int cmd_tail(const std::string& ensemble_path, const std::string& func,
             const std::string& delta_csv, int trials, uint64_t seed,
             const std::string& out_path, const std::string& format) {
    const auto spec = doi::ensemble_from_json(doi::load_json_file(ensemble_path));
    const auto f = doi::make_function(func);
    std::vector<double> deltas;
    if (!delta_csv.empty()) {
        std::stringstream ss(delta_csv);
        std::string item;
        while (std::getline(ss, item, ',')) deltas.push_back(std::stod(item));
    }
    const auto result = doi::monte_carlo_tail(f, spec, deltas, trials, seed);

    if (format == "csv") {
        const std::string text = doi::tail_result_to_csv(result);
        if (out_path.empty())
            std::cout << text;
        else
            doi::write_text_file(out_path, text);
    } else if (format == "json") {
        doi::Json j{{"config", config_echo({{"command", "tail"},
                                            {"ensemble", ensemble_path},
                                            {"func", func},
                                            {"trials", trials},
                                            {"seed", seed}})}};
        j.update(doi::tail_result_to_json(result));
        emit(j, out_path);
    } else {
        throw doi::InvalidInput("--format must be 'json' or 'csv'");
    }
    return result.all_satisfied ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized double/triple operator integrals for arbitrary complex matrices"};
    app.require_subcommand(1);

    std::string spec_path, spec2_path, basis_mode = "identity", out_path, func, beta;
    std::string matrix_path, matrix2_path, y_path, ensemble_path, suite, format = "json";
    std::string delta_csv;
    double cond_cap = 1e3, tol = 0.0, group_tol = 1e-6;
    double omega = 0.0, nu = 0.0, nu_prime = 0.0, cap_m = 0.0;
    int count = 100, trials = 5000;
    uint64_t seed = 0;

    auto* synth = app.add_subcommand("synth", "Synthesize a matrix and its spectral data");
    synth->add_option("--spec", spec_path, "Jordan structure JSON file")->required();
    synth->add_option("--basis", basis_mode, "identity|random");
    synth->add_option("--cond-cap", cond_cap, "conditioning cap for the basis");
    synth->add_option("--seed", seed, "random seed");
    synth->add_option("--out", out_path, "output directory")->required();

    auto* eval = app.add_subcommand("eval", "Evaluate f(X) or a double operator integral");
    eval->add_option("--func", func, "one-variable function descriptor");
    eval->add_option("--beta", beta, "two-variable symbol descriptor");
    eval->add_option("--matrix", matrix_path, "matrix JSON file");
    eval->add_option("--matrix2", matrix2_path, "second parameter matrix JSON file");
    eval->add_option("--y", y_path, "operand matrix JSON file");
    eval->add_option("--group-tol", group_tol, "eigenvalue grouping tolerance");
    eval->add_option("--out", out_path, "output JSON file (stdout if omitted)");

    auto* verify = app.add_subcommand("verify", "Run a property suite");
    verify->add_option("--suite", suite,
                       "perturbation|homomorphism|split|telescope|continuity|norms")
        ->required();
    verify->add_option("--count", count, "number of random instances");
    verify->add_option("--seed", seed, "random seed");
    verify->add_option("--tol", tol, "tolerance override");
    verify->add_option("--out", out_path, "output JSON file (stdout if omitted)");

    auto* bounds = app.add_subcommand("bounds", "Evaluate norm bounds for f(X1)-f(X2)");
    bounds->add_option("--func", func, "one-variable function descriptor")->required();
    bounds->add_option("--spec1", spec_path, "structure JSON for X1")->required();
    bounds->add_option("--spec2", spec2_path, "structure JSON for X2")->required();
    bounds->add_option("--basis", basis_mode, "identity|random");
    bounds->add_option("--cond-cap", cond_cap, "conditioning cap for the basis");
    bounds->add_option("--seed", seed, "random seed");
    bounds->add_option("--omega", omega, "Holder exponent (enables the Holder bound)");
    bounds->add_option("--nu", nu, "lower bound on ||X1-X2||");
    bounds->add_option("--nu-prime", nu_prime, "lower bound on eigenvalue gaps");
    bounds->add_option("--cap-m", cap_m, "upper bound on ||X1-X2|| (omega < 1)");
    bounds->add_option("--out", out_path, "output JSON file (stdout if omitted)");

    auto* tail = app.add_subcommand("tail", "Monte-Carlo tail bound experiment");
    tail->add_option("--ensemble", ensemble_path, "ensemble JSON file")->required();
    tail->add_option("--func", func, "one-variable function descriptor")->required();
    tail->add_option("--delta", delta_csv, "comma separated delta grid (default: quantiles)");
    tail->add_option("--trials", trials, "number of Monte-Carlo trials");
    tail->add_option("--seed", seed, "random seed");
    tail->add_option("--out", out_path, "output file (stdout if omitted)");
    tail->add_option("--format", format, "json|csv");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) return cmd_synth(spec_path, basis_mode, cond_cap, seed, out_path);
        if (eval->parsed())
            return cmd_eval(func, beta, matrix_path, matrix2_path, y_path, group_tol, out_path);
        if (verify->parsed()) return cmd_verify(suite, count, seed, tol, out_path);
        if (bounds->parsed())
            return cmd_bounds(func, spec_path, spec2_path, basis_mode, cond_cap, seed, omega, nu,
                              nu_prime, cap_m, out_path);
        if (tail->parsed())
            return cmd_tail(ensemble_path, func, delta_csv, trials, seed, out_path, format);
    } catch (const doi::SingularBasis& e) {
        std::cerr << e.what() << "\n";
        return kExitNumericalError;
    } catch (const doi::ConditioningExceeded& e) {
        std::cerr << e.what() << "\n";
        return kExitNumericalError;
    } catch (const doi::ClusterAmbiguity& e) {
        std::cerr << e.what() << "\n";
        return kExitNumericalError;
    } catch (const doi::NonConvergence& e) {
        std::cerr << e.what() << "\n";
        return kExitNumericalError;
    } catch (const doi::SpectraOverlap& e) {
        std::cerr << e.what() << "\n";
        return kExitNumericalError;
    } catch (const doi::Error& e) {
        std::cerr << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
