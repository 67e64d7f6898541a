#include "doctest.h"

#include "doi/operator_integrals.hpp"
#include "doi/random_ensemble.hpp"

using namespace doi;

namespace {

EnsembleSpec small_ensemble() {
    EnsembleSpec spec;
    spec.block_sizes = {2, 1, 1};
    spec.eigenvalues.r_outer = 1.0;
    spec.basis.cond_cap = 1.0;  // unitary bases
    spec.pair_separation = 0.1;
    return spec;
}

}  // namespace

TEST_CASE("random basis has the requested conditioning") {
    Rng rng(191);
    for (double cond : {1.0, 5.0, 50.0}) {
        const CMat u = random_basis(rng, 5, cond);
        CHECK(condition_number(u) == doctest::Approx(cond).epsilon(1e-8));
    }
}

TEST_CASE("sample_pair is deterministic and separated") {
    const auto spec = small_ensemble();
    const auto p1 = sample_pair(spec, 77);
    const auto p2 = sample_pair(spec, 77);
    CHECK((p1.first.matrix - p2.first.matrix).norm() == 0.0);
    CHECK((p1.second.matrix - p2.second.matrix).norm() == 0.0);

    for (int seed = 0; seed < 200; ++seed) {
        const auto pair = sample_pair(spec, seed);
        std::vector<Complex> all = pair.first.decomposition.eigenvalues();
        const auto second = pair.second.decomposition.eigenvalues();
        all.insert(all.end(), second.begin(), second.end());
        for (size_t i = 0; i < all.size(); ++i)
            for (size_t j = i + 1; j < all.size(); ++j)
                CHECK(std::abs(all[i] - all[j]) >= spec.pair_separation);
    }
}

TEST_CASE("sample_pair reports unattainable separation") {
    EnsembleSpec spec = small_ensemble();
    spec.eigenvalues.r_outer = 0.01;  // the support cannot hold separated points
    spec.max_retries = 50;
    CHECK_THROWS_AS(sample_pair(spec, 1), SeparationUnattainable);
}

TEST_CASE("tail bound terms for the identity function") {
    const auto spec = small_ensemble();
    const auto caps = estimate_nilpotent_caps(spec, 50, 1.1, 3);
    const auto terms = tail_bound_terms(identity_fn(), spec, caps, 32);
    // Divided differences of the identity are 1 and 0 up to the rounding of
    // complex division.
    CHECK(terms.b1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(terms.b2 <= 1e-12);
    CHECK(terms.b3 <= 1e-12);
    CHECK(terms.b4 <= 1e-12);

    const auto rhs = tail_bound_rhs(identity_fn(), spec, caps, 2.0, 3.0, 32);
    CHECK(rhs.bound == doctest::Approx(1.5));
    // Markov limit: the bound vanishes as delta grows.
    CHECK(tail_bound_rhs(identity_fn(), spec, caps, 1e12, 3.0, 32).bound <= 1e-11);
}

TEST_CASE("tail bound terms for the square on the unit disk") {
    const auto spec = small_ensemble();
    const auto caps = estimate_nilpotent_caps(spec, 50, 1.1, 3);
    const auto terms = tail_bound_terms(monomial(2), spec, caps, 64);
    // B1 = max |x + y| over separated disk pairs, approaching 2 on the grid.
    CHECK(terms.b1 >= 1.85);
    CHECK(terms.b1 <= 2.0 + 1e-12);
    CHECK(terms.b2 > 0.0);   // (f^[1])^(0,1) = 1 times a positive cap
    CHECK(terms.b4 <= 1e-10);  // second mixed partial of x + y vanishes
}

TEST_CASE("monte carlo tail experiment is reproducible and sound") {
    const auto spec = small_ensemble();
    const auto res = monte_carlo_tail(monomial(2), spec, {}, 600, 42, 100);
    const auto res2 = monte_carlo_tail(monomial(2), spec, {}, 600, 42, 100);
    CHECK(res.delta_grid == res2.delta_grid);
    CHECK(res.empirical_freq == res2.empirical_freq);
    CHECK(res.markov_bound == res2.markov_bound);
    CHECK(res.e_estimate == res2.e_estimate);
    CHECK(res.all_satisfied);
    // Unitary bases make ||N^q|| draw-independent, so pilot caps always hold.
    CHECK(res.cap_violations == 0);

    // An impossible threshold: zero exceedances and a positive bound.
    const double huge = 100.0;
    const auto far = monte_carlo_tail(identity_fn(), spec, {huge}, 300, 7, 100);
    CHECK(far.empirical_freq[0] == 0.0);
    CHECK(far.markov_bound[0] > 0.0);
    CHECK(far.all_satisfied);
}

TEST_CASE("sampled pairs are uncorrelated across the pair") {
    const auto spec = small_ensemble();
    const int draws = 5000;
    std::vector<double> n1(draws), n2(draws);
    for (int i = 0; i < draws; ++i) {
        const auto pair = sample_pair(spec, 100000 + i);
        n1[i] = pair.first.matrix.norm();
        n2[i] = pair.second.matrix.norm();
    }
    double m1 = 0, m2 = 0;
    for (int i = 0; i < draws; ++i) {
        m1 += n1[i];
        m2 += n2[i];
    }
    m1 /= draws;
    m2 /= draws;
    double cov = 0, v1 = 0, v2 = 0;
    for (int i = 0; i < draws; ++i) {
        cov += (n1[i] - m1) * (n2[i] - m2);
        v1 += (n1[i] - m1) * (n1[i] - m1);
        v2 += (n2[i] - m2) * (n2[i] - m2);
    }
    CHECK(std::abs(cov / std::sqrt(v1 * v2)) <= 0.05);
}

TEST_CASE("annulus sampler stays inside its support") {
    EnsembleSpec spec = small_ensemble();
    spec.eigenvalues.kind = EigenvalueSampler::Kind::annulus;
    spec.eigenvalues.r_inner = 0.5;
    spec.eigenvalues.r_outer = 1.5;
    for (int seed = 0; seed < 50; ++seed) {
        const auto pair = sample_pair(spec, seed);
        for (const auto& lam : pair.first.decomposition.eigenvalues()) {
            CHECK(std::abs(lam) >= 0.5);
            CHECK(std::abs(lam) <= 1.5);
        }
    }
}
