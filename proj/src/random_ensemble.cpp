#include "doi/random_ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/QR>

#include "doi/operator_integrals.hpp"

namespace doi {

CMat random_dense(Rng& rng, int n) {
    CMat a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = rng.complex_normal();
    return a;
}

CMat random_unitary(Rng& rng, int n) {
    Eigen::HouseholderQR<CMat> qr(random_dense(rng, n));
    return qr.householderQ() * CMat::Identity(n, n);
}

CMat random_basis(Rng& rng, int n, double cond) {
    if (cond < 1.0) throw InvalidInput("random_basis: condition number must be >= 1");
    const CMat q1 = random_unitary(rng, n);
    const CMat q2 = random_unitary(rng, n);
    CVec s(n);
    const double hi = std::sqrt(cond), lo = 1.0 / std::sqrt(cond);
    for (int i = 0; i < n; ++i) {
        const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
        s(i) = hi * std::pow(lo / hi, t);
    }
    return q1 * s.asDiagonal() * q2.adjoint();
}

Complex EigenvalueSampler::sample(Rng& rng) const {
    switch (kind) {
        case Kind::uniform_disk:
            return rng.uniform_disk(center, r_outer);
        case Kind::annulus:
            return rng.uniform_annulus(center, r_inner, r_outer);
    }
    throw InvalidInput("EigenvalueSampler: unknown kind");
}

bool EigenvalueSampler::contains(Complex z) const {
    const double r = std::abs(z - center);
    if (kind == Kind::uniform_disk) return r <= r_outer;
    return r >= r_inner && r <= r_outer;
}

int EnsembleSpec::n() const {
    return std::accumulate(block_sizes.begin(), block_sizes.end(), 0);
}

void EnsembleSpec::check() const {
    if (block_sizes.empty()) throw InvalidInput("EnsembleSpec: no blocks");
    for (int s : block_sizes)
        if (s <= 0) throw InvalidInput("EnsembleSpec: block sizes must be positive");
    if (eigenvalues.r_outer <= 0 || eigenvalues.r_inner < 0 ||
        eigenvalues.r_inner > eigenvalues.r_outer)
        throw InvalidInput("EnsembleSpec: bad sampler radii");
    if (pair_separation < 0) throw InvalidInput("EnsembleSpec: negative pair separation");
    if (max_retries <= 0) throw InvalidInput("EnsembleSpec: retry budget must be positive");
}

namespace {

// Draws `count` eigenvalues keeping every gap against `taken` and among
// themselves at least `gap`; appends to `taken`.
std::vector<Complex> draw_separated(Rng& rng, const EigenvalueSampler& sampler, int count,
                                    double gap, std::vector<Complex>& taken, int& budget) {
    std::vector<Complex> out;
    out.reserve(count);
    while (static_cast<int>(out.size()) < count) {
        if (budget-- <= 0)
            throw SeparationUnattainable(
                "sample_pair: could not place separated eigenvalues within the retry budget");
        const Complex z = sampler.sample(rng);
        bool ok = true;
        for (const Complex& w : taken)
            if (std::abs(z - w) < gap) {
                ok = false;
                break;
            }
        if (!ok) continue;
        out.push_back(z);
        taken.push_back(z);
    }
    return out;
}

SynthesisResult synthesize_from_template(Rng& rng, const std::vector<int>& sizes,
                                         const std::vector<Complex>& lambdas,
                                         const BasisSampler& basis) {
    JordanStructureSpec jspec;
    for (size_t b = 0; b < sizes.size(); ++b) jspec.blocks.push_back({lambdas[b], sizes[b]});
    const int n = jspec.total_size();
    CMat u;
    if (basis.kind == BasisSampler::Kind::identity) {
        u = CMat::Identity(n, n);
    } else {
        const double cond = std::exp(rng.uniform01() * std::log(std::max(1.0, basis.cond_cap)));
        u = random_basis(rng, n, cond);
    }
    return synthesize(jspec, u, std::max(1.01, basis.cond_cap * 1.01));
}

}  // namespace

SampledPair sample_pair(const EnsembleSpec& spec, uint64_t seed) {
    spec.check();
    Rng rng(seed);
    int budget = spec.max_retries;
    const int k = static_cast<int>(spec.block_sizes.size());

    std::vector<Complex> taken;
    const auto lam1 = draw_separated(rng, spec.eigenvalues, k, spec.pair_separation, taken, budget);
    const auto lam2 = draw_separated(rng, spec.eigenvalues, k, spec.pair_separation, taken, budget);

    SampledPair out;
    out.first = synthesize_from_template(rng, spec.block_sizes, lam1, spec.basis);
    out.second = synthesize_from_template(rng, spec.block_sizes, lam2, spec.basis);
    return out;
}

NilpotentCaps estimate_nilpotent_caps(const EnsembleSpec& spec, int pilot_trials,
                                      double inflation, uint64_t seed) {
    spec.check();
    NilpotentCaps caps;
    auto init = [&](std::vector<std::vector<double>>& c) {
        c.assign(spec.block_sizes.size(), {});
        for (size_t k = 0; k < spec.block_sizes.size(); ++k)
            c[k].assign(std::max(0, spec.block_sizes[k] - 1), 0.0);
    };
    init(caps.caps1);
    init(caps.caps2);

    Rng base(seed);
    for (int t = 0; t < pilot_trials; ++t) {
        const auto pair = sample_pair(spec, base.fork(static_cast<uint64_t>(t)).next_u64());
        auto fold = [](std::vector<std::vector<double>>& c, const SpectralDecomposition& dec) {
            const auto npow = nilpotent_powers(dec);
            for (size_t k = 0; k < npow.size(); ++k)
                for (size_t q = 1; q <= npow[k].size(); ++q)
                    c[k][q - 1] = std::max(c[k][q - 1], npow[k][q - 1].norm());
        };
        fold(caps.caps1, pair.first.decomposition);
        fold(caps.caps2, pair.second.decomposition);
    }
    for (auto* side : {&caps.caps1, &caps.caps2})
        for (auto& comp : *side)
            for (double& v : comp) v *= inflation;
    return caps;
}

namespace {

std::vector<Complex> support_grid(const EigenvalueSampler& sampler, int resolution) {
    std::vector<Complex> pts;
    const double r = sampler.r_outer;
    for (int i = 0; i < resolution; ++i)
        for (int j = 0; j < resolution; ++j) {
            const double x = -r + 2.0 * r * (i + 0.5) / resolution;
            const double y = -r + 2.0 * r * (j + 0.5) / resolution;
            const Complex z = sampler.center + Complex(x, y);
            if (sampler.contains(z)) pts.push_back(z);
        }
    return pts;
}

// Full confluent table for f over {a^(q1max+1), b^(q2max+1)}; dd[q1][q2] is the
// divided difference over {a^(q1+1), b^(q2+1)}, i.e. the (q1,q2) partial of
// f^[1] divided by q1! q2!.
void dd1_table(const AnalyticFn1& f, Complex a, Complex b, int q1max, int q2max,
               std::vector<std::vector<Complex>>& dd) {
    const int na = q1max + 1, m = q1max + q2max + 2;
    std::vector<Complex> t(m);
    for (int i = 0; i < m; ++i) t[i] = i < na ? a : b;

    std::vector<std::vector<Complex>> tri(m);
    tri[0].resize(m);
    for (int i = 0; i < m; ++i) tri[0][i] = f.value(t[i]);
    for (int j = 1; j < m; ++j) {
        tri[j].resize(m - j);
        for (int i = 0; i + j < m; ++i) {
            const bool same = (i + j < na) || (i >= na);
            tri[j][i] = same ? f.derivative(j, t[i]) / detail::factorial(j)
                             : (tri[j - 1][i + 1] - tri[j - 1][i]) / (t[i + j] - t[i]);
        }
    }
    dd.assign(q1max + 1, std::vector<Complex>(q2max + 1));
    for (int q1 = 0; q1 <= q1max; ++q1)
        for (int q2 = 0; q2 <= q2max; ++q2) dd[q1][q2] = tri[q1 + q2 + 1][q1max - q1];
}

}  // namespace

TailBoundTerms tail_bound_terms(const AnalyticFn1& f, const EnsembleSpec& spec,
                                const NilpotentCaps& caps, int grid_resolution) {
    spec.check();
    const int mmax = *std::max_element(spec.block_sizes.begin(), spec.block_sizes.end());
    const int qmax = mmax - 1;
    const auto grid = support_grid(spec.eigenvalues, grid_resolution);

    // maxdd[q1][q2] = max over admissible pairs of |f[a^(q1+1), b^(q2+1)]|.
    std::vector<std::vector<double>> maxdd(qmax + 1, std::vector<double>(qmax + 1, 0.0));
    std::vector<std::vector<Complex>> dd;
    for (size_t i = 0; i < grid.size(); ++i)
        for (size_t j = 0; j < grid.size(); ++j) {
            if (i == j) continue;
            if (std::abs(grid[i] - grid[j]) < spec.pair_separation) continue;
            dd1_table(f, grid[i], grid[j], qmax, qmax, dd);
            for (int q1 = 0; q1 <= qmax; ++q1)
                for (int q2 = 0; q2 <= qmax; ++q2)
                    maxdd[q1][q2] = std::max(maxdd[q1][q2], std::abs(dd[q1][q2]));
        }

    TailBoundTerms terms;
    terms.b1 = maxdd[0][0];
    for (size_t k2 = 0; k2 < caps.caps2.size(); ++k2)
        for (size_t q2 = 1; q2 <= caps.caps2[k2].size(); ++q2)
            terms.b2 += maxdd[0][q2] * caps.caps2[k2][q2 - 1];
    for (size_t k1 = 0; k1 < caps.caps1.size(); ++k1)
        for (size_t q1 = 1; q1 <= caps.caps1[k1].size(); ++q1)
            terms.b3 += maxdd[q1][0] * caps.caps1[k1][q1 - 1];
    for (size_t k1 = 0; k1 < caps.caps1.size(); ++k1)
        for (size_t k2 = 0; k2 < caps.caps2.size(); ++k2)
            for (size_t q1 = 1; q1 <= caps.caps1[k1].size(); ++q1)
                for (size_t q2 = 1; q2 <= caps.caps2[k2].size(); ++q2)
                    terms.b4 += maxdd[q1][q2] * caps.caps1[k1][q1 - 1] * caps.caps2[k2][q2 - 1];
    return terms;
}

TailBoundRhs tail_bound_rhs(const AnalyticFn1& f, const EnsembleSpec& spec,
                            const NilpotentCaps& caps, double delta, double e_estimate,
                            int grid_resolution) {
    if (delta <= 0) throw InvalidInput("tail_bound_rhs: delta must be positive");
    TailBoundRhs out;
    out.terms = tail_bound_terms(f, spec, caps, grid_resolution);
    out.bound = out.terms.sum() * e_estimate / delta;
    return out;
}

TailExperimentResult monte_carlo_tail(const AnalyticFn1& f, const EnsembleSpec& spec,
                                      std::vector<double> delta_grid, int trials, uint64_t seed,
                                      int pilot_trials, double inflation, int grid_resolution) {
    spec.check();
    if (trials < 1) throw InvalidInput("monte_carlo_tail: trials must be >= 1");

    TailExperimentResult res;
    res.trials = trials;
    res.seed = seed;
    res.caps = estimate_nilpotent_caps(spec, pilot_trials, inflation,
                                       seed ^ 0x9E3779B97F4A7C15ULL);
    res.b_terms = tail_bound_terms(f, spec, res.caps, grid_resolution);

    Rng base(seed);
    std::vector<double> values(trials);
    double diff_sum = 0.0;
    for (int t = 0; t < trials; ++t) {
        const auto pair = sample_pair(spec, base.fork(static_cast<uint64_t>(t)).next_u64());
        values[t] = (eval_matrix_fn1(f, pair.first.decomposition) -
                     eval_matrix_fn1(f, pair.second.decomposition))
                        .norm();
        diff_sum += (pair.first.matrix - pair.second.matrix).norm();

        auto violates = [](const std::vector<std::vector<double>>& caps,
                           const SpectralDecomposition& dec) {
            const auto npow = nilpotent_powers(dec);
            for (size_t k = 0; k < npow.size(); ++k)
                for (size_t q = 1; q <= npow[k].size(); ++q)
                    if (npow[k][q - 1].norm() > caps[k][q - 1]) return true;
            return false;
        };
        if (violates(res.caps.caps1, pair.first.decomposition) ||
            violates(res.caps.caps2, pair.second.decomposition))
            ++res.cap_violations;
    }
    res.e_estimate = diff_sum / trials;

    if (delta_grid.empty()) {
        std::vector<double> sorted = values;
        std::sort(sorted.begin(), sorted.end());
        for (int i = 0; i < 8; ++i) {
            const size_t idx = static_cast<size_t>((i + 0.5) / 8.0 * trials);
            delta_grid.push_back(sorted[std::min(idx, sorted.size() - 1)]);
        }
    }
    res.delta_grid = delta_grid;

    res.all_satisfied = true;
    for (double delta : delta_grid) {
        if (delta <= 0) throw InvalidInput("monte_carlo_tail: delta grid must be positive");
        int exceed = 0;
        for (double v : values)
            if (v >= delta) ++exceed;
        const double freq = static_cast<double>(exceed) / trials;
        const double bound = res.b_terms.sum() * res.e_estimate / delta;
        const double margin = 3.0 * std::sqrt(freq * (1.0 - freq) / trials);
        res.empirical_freq.push_back(freq);
        res.markov_bound.push_back(bound);
        res.margin.push_back(margin);
        res.all_satisfied = res.all_satisfied && freq <= bound + margin;
    }
    return res;
}

SynthesisResult random_instance(Rng& rng, const InstanceConstraints& c) {
    const int n = rng.uniform_int(c.n_min, c.n_max);
    std::vector<int> sizes;
    int remaining = n;
    while (remaining > 0) {
        const int s = c.allow_nilpotent ? rng.uniform_int(1, std::min(c.max_block, remaining)) : 1;
        sizes.push_back(s);
        remaining -= s;
    }

    std::vector<Complex> taken;
    int budget = 1000;
    EigenvalueSampler sampler;
    sampler.r_outer = c.eigen_radius;
    const auto lam = draw_separated(rng, sampler, static_cast<int>(sizes.size()), c.separation,
                                    taken, budget);
    const double cond =
        c.cond_min * std::exp(rng.uniform01() * std::log(c.cond_max / c.cond_min));
    JordanStructureSpec spec;
    for (size_t b = 0; b < sizes.size(); ++b) spec.blocks.push_back({lam[b], sizes[b]});
    return synthesize(spec, random_basis(rng, n, cond), c.cond_max * 1.01);
}

std::vector<SynthesisResult> random_separated_family(Rng& rng,
                                                     const std::vector<InstanceConstraints>& cs) {
    if (cs.empty()) throw InvalidInput("random_separated_family: no constraints");
    const int n = rng.uniform_int(cs[0].n_min, cs[0].n_max);

    std::vector<SynthesisResult> out;
    std::vector<Complex> taken;
    int budget = 2000 * static_cast<int>(cs.size());
    for (const auto& c : cs) {
        std::vector<int> sizes;
        int remaining = n;
        while (remaining > 0) {
            const int s =
                c.allow_nilpotent ? rng.uniform_int(1, std::min(c.max_block, remaining)) : 1;
            sizes.push_back(s);
            remaining -= s;
        }
        EigenvalueSampler sampler;
        sampler.r_outer = c.eigen_radius;
        const auto lam = draw_separated(rng, sampler, static_cast<int>(sizes.size()),
                                        c.separation, taken, budget);
        const double cond =
            c.cond_min * std::exp(rng.uniform01() * std::log(c.cond_max / c.cond_min));
        JordanStructureSpec spec;
        for (size_t b = 0; b < sizes.size(); ++b) spec.blocks.push_back({lam[b], sizes[b]});
        out.push_back(synthesize(spec, random_basis(rng, n, cond), c.cond_max * 1.01));
    }
    return out;
}

std::pair<SynthesisResult, SynthesisResult> random_separated_pair(Rng& rng,
                                                                  const InstanceConstraints& c) {
    auto family = random_separated_family(rng, {c, c});
    return {std::move(family[0]), std::move(family[1])};
}

std::pair<SynthesisResult, SynthesisResult> random_commuting_pair(Rng& rng,
                                                                  const InstanceConstraints& c) {
    const int n = std::max(2, rng.uniform_int(c.n_min, c.n_max));
    std::vector<int> sizes;
    int remaining = n;
    while (remaining > 0) {
        const int s = rng.uniform_int(1, std::min(c.max_block, remaining));
        sizes.push_back(s);
        remaining -= s;
    }

    EigenvalueSampler sampler;
    sampler.r_outer = c.eigen_radius;
    std::vector<Complex> taken;
    int budget = 2000;
    const auto lam1 =
        draw_separated(rng, sampler, static_cast<int>(sizes.size()), c.separation, taken, budget);
    const auto lam2 =
        draw_separated(rng, sampler, static_cast<int>(sizes.size()), c.separation, taken, budget);

    const double cond =
        c.cond_min * std::exp(rng.uniform01() * std::log(c.cond_max / c.cond_min));
    const CMat u = random_basis(rng, n, cond);
    auto build = [&](const std::vector<Complex>& lam) {
        JordanStructureSpec spec;
        for (size_t b = 0; b < sizes.size(); ++b) spec.blocks.push_back({lam[b], sizes[b]});
        return synthesize(spec, u, c.cond_max * 1.01);
    };
    return {build(lam1), build(lam2)};
}

}  // namespace doi
