#pragma once

#include <cstdint>

#include "doi/functions.hpp"
#include "doi/rng.hpp"
#include "doi/spectral.hpp"

namespace doi {

CMat random_dense(Rng& rng, int n);    // iid standard complex normal entries
CMat random_unitary(Rng& rng, int n);  // QR of a complex normal matrix

// U = Q1 diag(s) Q2^H with log-spaced singular values; cond(U) equals `cond`
// up to rounding and ||U||_2 = sqrt(cond).
CMat random_basis(Rng& rng, int n, double cond);

struct EigenvalueSampler {
    enum class Kind { uniform_disk, annulus };
    Kind kind = Kind::uniform_disk;
    Complex center = 0.0;
    double r_inner = 0.0;  // annulus only
    double r_outer = 1.0;

    Complex sample(Rng& rng) const;
    bool contains(Complex z) const;
};

struct BasisSampler {
    enum class Kind { identity, random };
    Kind kind = Kind::random;
    double cond_cap = 100.0;
};

// Structural template shared by both matrices of a sampled pair: fixed block
// sizes, one random eigenvalue per block, random invertible basis.
struct EnsembleSpec {
    std::vector<int> block_sizes{2, 1, 1};
    EigenvalueSampler eigenvalues;
    BasisSampler basis;
    double pair_separation = 0.1;
    int max_retries = 1000;

    int n() const;
    void check() const;
};

struct SampledPair {
    SynthesisResult first;
    SynthesisResult second;
};

// Two independent synthesized matrices sharing the structural template, with
// all eigenvalue gaps (within each matrix and across the pair) at least
// pair_separation. Deterministic under seed; throws SeparationUnattainable
// when rejection sampling exhausts the retry budget.
SampledPair sample_pair(const EnsembleSpec& spec, uint64_t seed);

// Upper caps on the nilpotent power norms ||N_k^q||, indexed [component][q-1].
struct NilpotentCaps {
    std::vector<std::vector<double>> caps1, caps2;
};

// Empirical caps from a pilot run, inflated by the given factor.
NilpotentCaps estimate_nilpotent_caps(const EnsembleSpec& spec, int pilot_trials,
                                      double inflation, uint64_t seed);

struct TailBoundTerms {
    double b1 = 0.0, b2 = 0.0, b3 = 0.0, b4 = 0.0;
    double sum() const { return b1 + b2 + b3 + b4; }
};

// The four coefficient terms of the tail bound: spectrum maxima of f^[1] and
// its partials over a grid on the sampler support (pairs closer than
// pair_separation are outside the sampler's reach and excluded), times the
// nilpotent caps.
TailBoundTerms tail_bound_terms(const AnalyticFn1& f, const EnsembleSpec& spec,
                                const NilpotentCaps& caps, int grid_resolution = 64);

struct TailBoundRhs {
    double bound = 0.0;
    TailBoundTerms terms;
};

// (B1 + B2 + B3 + B4) * e_estimate / delta.
TailBoundRhs tail_bound_rhs(const AnalyticFn1& f, const EnsembleSpec& spec,
                            const NilpotentCaps& caps, double delta, double e_estimate,
                            int grid_resolution = 64);

struct TailExperimentResult {
    std::vector<double> delta_grid;
    std::vector<double> empirical_freq;
    std::vector<double> markov_bound;
    std::vector<double> margin;  // 3 sigma binomial margin per delta
    TailBoundTerms b_terms;
    NilpotentCaps caps;
    double e_estimate = 0.0;
    int trials = 0;
    uint64_t seed = 0;
    int cap_violations = 0;  // trials exceeding a pilot cap, which void the bound
    bool all_satisfied = false;
};

// Monte-Carlo check of the tail bound: samples pairs, measures the exceedance
// frequency of ||f(X1) - f(X2)|| per delta and compares against the Markov
// right-hand side with the plug-in expectation estimate. An empty delta grid
// selects 8 evenly spaced empirical quantiles. Bit-reproducible under seed.
TailExperimentResult monte_carlo_tail(const AnalyticFn1& f, const EnsembleSpec& spec,
                                      std::vector<double> delta_grid, int trials, uint64_t seed,
                                      int pilot_trials = 500, double inflation = 1.1,
                                      int grid_resolution = 64);

// Random Jordan instances for property suites and tests.
struct InstanceConstraints {
    int n_min = 2, n_max = 8;
    int max_block = 3;
    double cond_min = 1.0, cond_max = 100.0;
    double separation = 0.1;
    double eigen_radius = 1.5;
    bool allow_nilpotent = true;
};

SynthesisResult random_instance(Rng& rng, const InstanceConstraints& c);

// A family of instances of one dimension (taken from the first entry), with
// all eigenvalue gaps within and across members at least the separation of
// the member that owns them.
std::vector<SynthesisResult> random_separated_family(Rng& rng,
                                                     const std::vector<InstanceConstraints>& cs);

// Pair with spectra separated across the two matrices as well.
std::pair<SynthesisResult, SynthesisResult> random_separated_pair(Rng& rng,
                                                                  const InstanceConstraints& c);

// Pair sharing one basis and block template (different eigenvalues), so the
// nilpotent parts of the two matrices commute exactly.
std::pair<SynthesisResult, SynthesisResult> random_commuting_pair(Rng& rng,
                                                                  const InstanceConstraints& c);

}  // namespace doi
