#include "doi/verification.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>

#include "doi/bounds.hpp"
#include "doi/perturbation.hpp"
#include "doi/random_ensemble.hpp"

namespace doi {

namespace {

namespace tol = suite_tolerances;

AnalyticFn1 random_poly1(Rng& rng, int min_deg, int max_deg) {
    const int deg = rng.uniform_int(min_deg, max_deg);
    std::vector<Complex> coeffs(deg + 1);
    for (auto& c : coeffs) c = rng.complex_normal();
    return polynomial(std::move(coeffs));
}

AnalyticFn2 random_poly2(Rng& rng, int max_deg) {
    std::vector<std::vector<Complex>> coeffs(max_deg + 1,
                                             std::vector<Complex>(max_deg + 1));
    for (auto& row : coeffs)
        for (auto& c : row) c = rng.complex_normal();
    return polynomial2(std::move(coeffs));
}

double identity_residual(const CMat& a, const CMat& b) {
    return (a - b).norm() / std::max({1.0, a.norm(), b.norm()});
}

// Identity suites exercise oblique bases up to the conditioning cap; the
// norm-bound suites draw unitary bases, for which the orthogonal-family
// hypothesis behind the spectrum-maxima bounds holds.
InstanceConstraints identity_constraints() {
    InstanceConstraints c;
    c.n_min = 2;
    c.n_max = 8;
    c.max_block = 3;
    c.cond_min = 1.0;
    c.cond_max = 100.0;
    c.separation = 0.1;
    c.eigen_radius = 1.5;
    return c;
}

InstanceConstraints unitary_constraints() {
    InstanceConstraints c = identity_constraints();
    c.cond_min = c.cond_max = 1.0;
    return c;
}

double bound_violation(const BoundReport& r) {
    double terms_sum = 0.0;
    for (const auto& t : r.terms) terms_sum += std::abs(t.value);
    const double scale = std::max({1.0, r.bound_value, terms_sum});
    if (r.is_upper) return std::max(0.0, -r.slack) / scale;
    double v = std::max(0.0, r.slack) / scale;
    if (r.min_variant) v = std::max(v, std::max(0.0, *r.min_variant - r.actual_value) / scale);
    return v;
}

void push_metric(SuiteReport& rep, const std::string& name, double value) {
    rep.metrics.emplace_back(name, value);
}

SuiteReport make_report(const std::string& name, int count, uint64_t seed, double tolerance) {
    SuiteReport rep;
    rep.suite = name;
    rep.count = count;
    rep.seed = seed;
    rep.tolerance = tolerance;
    return rep;
}

void record(SuiteReport& rep, int index, double residual, bool pass) {
    rep.instances.push_back({index, residual, pass});
    rep.max_residual = std::max(rep.max_residual, residual);
    rep.pass = rep.pass && pass;
}

SuiteReport roundtrip_suite(int count, uint64_t seed, double tolerance) {
    SuiteReport rep = make_report("roundtrip", count, seed, tolerance);
    InstanceConstraints c = identity_constraints();
    c.max_block = 4;
    Rng base(seed);
    for (int i = 0; i < count; ++i) {
        Rng rng = base.fork(static_cast<uint64_t>(i));
        const auto inst = random_instance(rng, c);
        const double recon = (inst.decomposition.reconstruct() - inst.matrix).norm() /
                             std::max(1e-300, inst.matrix.norm());
        const auto val = validate(inst.decomposition, tolerance);
        const double residual = std::max(recon, val.max_residual);
        record(rep, i, residual, recon <= tolerance && val.all_pass);
    }
    return rep;
}

SuiteReport perturbation_suite(int count, uint64_t seed, double tolerance) {
    SuiteReport rep = make_report("perturbation", count, seed, tolerance);
    const InstanceConstraints c = identity_constraints();
    Rng base(seed);
    for (int i = 0; i < count; ++i) {
        Rng rng = base.fork(static_cast<uint64_t>(i));
        const auto [a, b] = random_separated_pair(rng, c);
        const AnalyticFn1 f = random_poly1(rng, 1, 5);
        const CMat y = random_dense(rng, a.decomposition.n);
        const auto check = perturbation_commutator(f, a.decomposition, b.decomposition, y);
        record(rep, i, check.residual, check.residual <= tolerance);
    }
    return rep;
}

SuiteReport homomorphism_suite(int count, uint64_t seed, double tol_add) {
    SuiteReport rep = make_report("homomorphism", count, seed, tol_add);
    const double tol_mult = tol_add * (tol::homomorphism_multiplicativity /
                                       tol::homomorphism_additivity);
    const InstanceConstraints c = identity_constraints();
    Rng base(seed);
    double max_add = 0.0, max_mult = 0.0;
    for (int i = 0; i < count; ++i) {
        Rng rng = base.fork(static_cast<uint64_t>(i));
        const auto [a, b] = random_separated_pair(rng, c);
        const auto& d1 = a.decomposition;
        const auto& d2 = b.decomposition;
        const CMat y = random_dense(rng, d1.n);
        const AnalyticFn2 beta = random_poly2(rng, 3);
        const AnalyticFn2 gamma = random_poly2(rng, 3);
        const Complex c1 = rng.complex_normal(), c2 = rng.complex_normal();

        const CMat add_lhs =
            gdoi(fn2_sum(fn2_scale(c1, beta), fn2_scale(c2, gamma)), d1, d2, y);
        const CMat add_rhs = c1 * gdoi(beta, d1, d2, y) + c2 * gdoi(gamma, d1, d2, y);
        const double r_add = identity_residual(add_lhs, add_rhs);

        const CMat mult_lhs = gdoi(fn2_product(beta, gamma), d1, d2, y);
        const CMat mult_rhs = compose(beta, gamma, d1, d2, y);
        const double r_mult = identity_residual(mult_lhs, mult_rhs);

        max_add = std::max(max_add, r_add);
        max_mult = std::max(max_mult, r_mult);
        record(rep, i, std::max(r_add, r_mult), r_add <= tol_add && r_mult <= tol_mult);
    }
    push_metric(rep, "max_additivity_residual", max_add);
    push_metric(rep, "max_multiplicativity_residual", max_mult);
    push_metric(rep, "multiplicativity_tolerance", tol_mult);
    return rep;
}

SuiteReport split_suite(int count, uint64_t seed, double tolerance) {
    SuiteReport rep = make_report("split", count, seed, tolerance);
    const InstanceConstraints c = identity_constraints();
    Rng base(seed);
    int commuting_fired = 0, commuting_ok = 0;
    for (int i = 0; i < count; ++i) {
        Rng rng = base.fork(static_cast<uint64_t>(i));
        SynthesisResult a, b;
        // Rotate instance structure so the commuting-nilpotent branch fires on
        // a fixed share of instances: shared-basis pairs commute exactly and a
        // diagonalizable side commutes with anything.
        switch (i % 3) {
            case 0: {
                auto pair = random_separated_pair(rng, c);
                a = std::move(pair.first);
                b = std::move(pair.second);
                break;
            }
            case 1: {
                InstanceConstraints diag = c;
                diag.allow_nilpotent = false;
                auto family = random_separated_family(rng, {c, diag});
                a = std::move(family[0]);
                b = std::move(family[1]);
                break;
            }
            default: {
                auto pair = random_commuting_pair(rng, c);
                a = std::move(pair.first);
                b = std::move(pair.second);
                break;
            }
        }
        const auto& d1 = a.decomposition;
        const auto& d2 = b.decomposition;
        const AnalyticFn1 f = random_poly1(rng, 1, 5);

        const AnalyticFn2 dd = divided_diff_1(f, {default_sep_tol(d1, d2), false});
        const CMat lhs = gdoi(dd, d1, d2, a.matrix - b.matrix);
        const auto [x1p, x1n] = split_pn(d1);
        const auto [x2p, x2n] = split_pn(d2);
        const CMat proj = gdoi(dd, d1.projector_part(), d2.projector_part(), x1p - x2p);
        const CMat mu = mu_extra_term(f, d1, d2);
        const double residual = (lhs - (proj + mu)).norm() / std::max(1.0, lhs.norm());
        bool pass = residual <= tolerance;

        const auto prediction = predict_nilpotency(d1, d2);
        if (prediction.branch == NilpotencyBranch::commuting) {
            ++commuting_fired;
            // Computed eigenvalues of a nilpotent matrix scatter like
            // eps^(1/m); the classification tolerance must sit above that.
            const int idx_bound = std::max(1, prediction.degree_bound);
            const double eps_eff = 1e-15 * std::max(1.0, d1.cond_estimate * d1.cond_estimate);
            const double class_tol = 3.0 * std::pow(eps_eff, 1.0 / idx_bound);
            const auto triple = divergence_triple(mu, std::min(0.2, class_tol));
            const bool ok = triple.ell1 == 0 && triple.ell2 <= prediction.degree_bound;
            commuting_ok += ok ? 1 : 0;
            pass = pass && ok;
        }
        record(rep, i, residual, pass);
    }
    push_metric(rep, "commuting_branch_fired", commuting_fired);
    push_metric(rep, "commuting_branch_confirmed", commuting_ok);
    return rep;
}

SuiteReport telescope_suite(int count, uint64_t seed, double tolerance) {
    SuiteReport rep = make_report("telescope", count, seed, tolerance);
    InstanceConstraints c = identity_constraints();
    c.n_max = 6;
    Rng base(seed);
    for (int i = 0; i < count; ++i) {
        Rng rng = base.fork(static_cast<uint64_t>(i));
        const auto family = random_separated_family(rng, {c, c, c});
        const AnalyticFn1 f = random_poly1(rng, 1, 3);
        const CMat y = random_dense(rng, family[0].decomposition.n);
        const double residual =
            telescope_residual(f, family[0].decomposition, family[1].decomposition,
                               family[2].decomposition, y);
        record(rep, i, residual, residual <= tolerance);
    }
    return rep;
}

SuiteReport continuity_suite(int count, uint64_t seed, double shrink) {
    SuiteReport rep = make_report("continuity", count, seed, shrink);
    InstanceConstraints c = identity_constraints();
    c.n_max = 6;
    const std::vector<double> scales{1e-2, 1e-3, 1e-4, 1e-5};
    Rng base(seed);
    int rejected_samples = 0;
    for (int i = 0; i < count; ++i) {
        bool done = false;
        for (int attempt = 0; attempt < 5 && !done; ++attempt) {
            Rng rng = base.fork(static_cast<uint64_t>(i) * 16 + attempt);
            const auto [a, b] = random_separated_pair(rng, c);
            const AnalyticFn2 beta = random_poly2(rng, 2);
            const CMat y = random_dense(rng, a.decomposition.n);
            const auto probe = continuity_probe(beta, a.decomposition, b.decomposition, y,
                                                scales, rng.next_u64());
            bool all_accepted = true;
            for (bool ok : probe.accepted) all_accepted = all_accepted && ok;
            if (!all_accepted) {
                ++rejected_samples;
                continue;
            }
            bool monotone = true;
            for (size_t k = 0; k + 1 < probe.deviations.size(); ++k)
                monotone = monotone &&
                           probe.deviations[k + 1] <= probe.deviations[k] * (1.0 + 1e-9);
            const double first = probe.deviations.front();
            const double last = probe.deviations.back();
            const double ratio = first > 0.0 ? last / (shrink * first) : 0.0;
            record(rep, i, ratio, monotone && ratio <= 1.0);
            done = true;
        }
        if (!done) record(rep, i, std::numeric_limits<double>::infinity(), false);
    }
    push_metric(rep, "rejected_samples", rejected_samples);
    return rep;
}

SuiteReport norms_suite(int count, uint64_t seed, double tolerance) {
    SuiteReport rep = make_report("norms", count, seed, tolerance);
    const InstanceConstraints c = unitary_constraints();
    Rng base(seed);
    int holder_evaluated = 0, min_variant_fired = 0;
    for (int i = 0; i < count; ++i) {
        Rng rng = base.fork(static_cast<uint64_t>(i));
        const auto family = random_separated_family(rng, {c, c, c});
        const auto& d1 = family[0].decomposition;
        const auto& d2 = family[1].decomposition;
        const auto& dx = family[2].decomposition;
        const AnalyticFn1 f = random_poly1(rng, 1, 5);
        const CMat y = random_dense(rng, d1.n);

        const double sep = default_sep_tol(d1, d2);
        const AnalyticFn2 dd = divided_diff_1(f, {sep, false});

        double violation = 0.0;
        const auto up = gdoi_upper_bound(dd, d1, d2, y);
        violation = std::max(violation, bound_violation(up));
        const auto low = gdoi_lower_bound(dd, d1, d2, y);
        violation = std::max(violation, bound_violation(low));
        if (low.min_variant) ++min_variant_fired;

        const auto lip = lipschitz_bounds(f, d1, d2);
        violation = std::max(violation, bound_violation(lip.upper));
        violation = std::max(violation, bound_violation(lip.lower));

        const auto gup = gtoi_upper_bound(divided_diff_2(f, {sep, false}), d1, d2, dx,
                                          family[0].matrix - family[1].matrix, y);
        violation = std::max(violation, bound_violation(gup));

        const double diff_norm = (family[0].matrix - family[1].matrix).norm();
        const double gap = spectral_gap(d1, d2);
        HolderParams hp;
        hp.omega = (i % 3 == 0) ? 0.5 : (i % 3 == 1 ? 1.0 : 2.0);
        hp.nu = 0.9 * diff_norm;
        hp.nu_prime = 0.9 * gap;
        hp.cap_m = 1.1 * diff_norm;
        const auto holder = holder_upper_bound(f, d1, d2, hp);
        violation = std::max(violation, bound_violation(holder.report));
        ++holder_evaluated;

        record(rep, i, violation, violation <= tolerance);
    }

    // Tightness witnesses: a constant symbol saturates the gdoi upper bound
    // and the identity function saturates the Lipschitz upper bound.
    {
        Rng rng = base.fork(0xFFFF);
        InstanceConstraints wc = unitary_constraints();
        const auto [a, b] = random_separated_pair(rng, wc);
        const CMat y = random_dense(rng, a.decomposition.n);
        const auto up =
            gdoi_upper_bound(fn2_constant(Complex(2.5, -1.0)), a.decomposition,
                             b.decomposition, y);
        const double w1 = std::abs(up.slack) / std::max(1.0, up.bound_value);
        push_metric(rep, "witness_const_slack", w1);
        const auto lip = lipschitz_bounds(identity_fn(), a.decomposition, b.decomposition);
        const double w2 = std::abs(lip.upper.slack) / std::max(1.0, lip.upper.bound_value);
        push_metric(rep, "witness_identity_slack", w2);
        rep.pass = rep.pass && w1 <= tolerance && w2 <= tolerance;
        rep.max_residual = std::max({rep.max_residual, w1, w2});
    }
    push_metric(rep, "holder_evaluated", holder_evaluated);
    push_metric(rep, "min_variant_fired", min_variant_fired);
    return rep;
}

}  // namespace

SuiteReport run_suite(const std::string& name, int count, uint64_t seed,
                      std::optional<double> tol_override) {
    if (count < 1) throw InvalidInput("run_suite: count must be >= 1");
    using Runner = std::function<SuiteReport(int, uint64_t, double)>;
    static const std::map<std::string, std::pair<double, Runner>> suites = {
        {"roundtrip", {tol::roundtrip, roundtrip_suite}},
        {"perturbation", {tol::perturbation, perturbation_suite}},
        {"homomorphism", {tol::homomorphism_additivity, homomorphism_suite}},
        {"split", {tol::split, split_suite}},
        {"telescope", {tol::telescope, telescope_suite}},
        {"continuity", {tol::continuity_shrink, continuity_suite}},
        {"norms", {tol::norms, norms_suite}},
    };
    const auto it = suites.find(name);
    if (it == suites.end()) throw InvalidInput("run_suite: unknown suite '" + name + "'");

    const auto start = std::chrono::steady_clock::now();
    SuiteReport rep =
        it->second.second(count, seed, tol_override.value_or(it->second.first));
    rep.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

}  // namespace doi
