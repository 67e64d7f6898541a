#pragma once

#include <vector>

#include "doi/operator_integrals.hpp"

namespace doi {

// Smallest distance between eigenvalues of dec1 and eigenvalues of dec2.
double spectral_gap(const SpectralDecomposition& dec1, const SpectralDecomposition& dec2);

// Default separation guard: 1e-6 * max(1, spectral radii).
double default_sep_tol(const SpectralDecomposition& dec1, const SpectralDecomposition& dec2);

struct IdentityCheck {
    CMat lhs;
    CMat rhs;
    double residual;  // ||lhs - rhs|| / max(1, ||lhs||)
};

// f(X1) Y - Y f(X2) against T_{f^[1]}(X1 Y - Y X2). Requires disjoint spectra;
// throws SpectraOverlap when the cross gap is below sep_tol (0 = default rule).
IdentityCheck perturbation_commutator(const AnalyticFn1& f, const SpectralDecomposition& dec1,
                                      const SpectralDecomposition& dec2, const CMat& y,
                                      double sep_tol = 0.0);

// Corollary with Y = I: f(X1) - f(X2) against T_{f^[1]}(X1 - X2).
IdentityCheck perturbation_difference(const AnalyticFn1& f, const SpectralDecomposition& dec1,
                                      const SpectralDecomposition& dec2, double sep_tol = 0.0);

// The deviation of the perturbation formula from its projector-only part:
//   mu = T_{f(x1)}^{X1_N, X2_P}(I) - T_{f(x2)}^{X1_P, X2_N}(I),
// realized as the NP part of T_{f o pi1}(I) minus the PN part of
// T_{f o pi2}(I). Satisfies
//   T_{f^[1]}^{X1,X2}(X1 - X2) = T_{f^[1]}^{X1_P,X2_P}(X1_P - X2_P) + mu.
CMat mu_extra_term(const AnalyticFn1& f, const SpectralDecomposition& dec1,
                   const SpectralDecomposition& dec2, double sep_tol = 0.0);

// Lexicographically ordered classification of mu:
//   ell1 = number of eigenvalues with |lambda| > tol * ||mu||,
//   ell2 = nilpotent degree when ell1 = 0 (0 by convention otherwise),
//   r    = ||mu||_F.
// (0, 0, 0) is returned exactly when ||mu|| <= tol.
struct DivergenceTriple {
    int ell1 = 0;
    int ell2 = 0;
    double r = 0.0;

    bool is_zero() const { return ell1 == 0 && ell2 == 0 && r == 0.0; }
};

bool operator<(const DivergenceTriple& a, const DivergenceTriple& b);
bool operator==(const DivergenceTriple& a, const DivergenceTriple& b);

DivergenceTriple divergence_triple(const CMat& mu, double tol = 1e-8);

enum class StructuralHint { automatic, triangular, commuting };
enum class NilpotencyBranch { none, triangular, commuting };

struct NilpotencyPrediction {
    NilpotencyBranch branch = NilpotencyBranch::none;
    int degree_bound = 0;  // meaningful when branch != none
};

// Sufficient conditions for mu to be nilpotent: all nilpotent parts strictly
// lower (or all strictly upper) triangular in the standard basis, with degree
// bound max m; or all cross pairs commuting, with index bound
// min[n, max m(X1) + max m(X2)].
NilpotencyPrediction predict_nilpotency(const SpectralDecomposition& dec1,
                                        const SpectralDecomposition& dec2,
                                        StructuralHint hint = StructuralHint::automatic,
                                        double tol = 1e-10);

// || [T_{f^[1]}^{A,X} - T_{f^[1]}^{B,X}](Y) - T_{f^[2]}^{A,B,X}(A - B, Y) ||
// over max(1, ||lhs||). Requires pairwise spectral separation among A, B, X.
double telescope_residual(const AnalyticFn1& f, const SpectralDecomposition& dec_a,
                          const SpectralDecomposition& dec_b, const SpectralDecomposition& dec_x,
                          const CMat& y, double sep_tol = 0.0);

// Fixed perturbation directions for the continuity probe: one complex unit
// vector over the distinct eigenvalues of each matrix and one unit-Frobenius
// basis direction each.
struct ContinuityDirections {
    std::vector<Complex> eigen_dir1, eigen_dir2;
    CMat basis_dir1, basis_dir2;
};

struct ContinuityProbeResult {
    std::vector<double> scales;
    std::vector<double> deviations;  // Frobenius deviation from the unperturbed value
    std::vector<bool> accepted;      // false when the perturbed spectra collided
};

// Perturbs the Jordan data (lambda_k -> lambda_k + eps * delta_k, U -> U + eps * E),
// re-synthesizes and reports || T_beta^{X1(eps),X2(eps)}(Y) - T_beta^{X1,X2}(Y) ||
// per scale. Both decompositions must carry their synthesis source.
ContinuityProbeResult continuity_probe(const AnalyticFn2& beta,
                                       const SpectralDecomposition& dec1,
                                       const SpectralDecomposition& dec2, const CMat& y,
                                       const std::vector<double>& scales,
                                       const ContinuityDirections& directions);

// Same with seeded random unit directions.
ContinuityProbeResult continuity_probe(const AnalyticFn2& beta,
                                       const SpectralDecomposition& dec1,
                                       const SpectralDecomposition& dec2, const CMat& y,
                                       const std::vector<double>& scales, uint64_t seed);

}  // namespace doi
