#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "doi/matrix.hpp"

namespace doi {

// One Jordan block: eigenvalue and size. Blocks with equal eigenvalues are
// merged into a single spectral component when synthesized.
struct JordanBlock {
    Complex eigenvalue;
    int size = 1;
};

struct JordanStructureSpec {
    std::vector<JordanBlock> blocks;

    int total_size() const;
    void check() const;  // throws InvalidInput on empty/nonpositive blocks
};

// Spectral data for one distinct eigenvalue: X restricted to the generalized
// eigenspace is lambda*P + N, with P idempotent, P N = N P = N, N^index = 0.
// Geometric components sharing an eigenvalue are aggregated: P and N are the
// sums over those components and index is the largest block size.
struct SpectralComponent {
    Complex eigenvalue;
    CMat projector;
    CMat nilpotent;
    int index = 1;
};

// Retained synthesis inputs so a decomposition can be re-synthesized after
// perturbing its Jordan data (used by the continuity probe).
struct JordanSource {
    JordanStructureSpec spec;
    CMat basis;
};

struct SpectralDecomposition {
    int n = 0;
    std::vector<SpectralComponent> components;
    double cond_estimate = 0.0;  // conditioning of the similarity basis; 0 = unknown
    std::optional<JordanSource> source;

    // Sum_k lambda_k P_k + Sum_k N_k.
    CMat reconstruct() const;

    // Same projectors and eigenvalues, all nilpotents dropped (decomposes X_P).
    SpectralDecomposition projector_part() const;

    bool is_diagonalizable(double tol = 1e-12) const;
    std::vector<Complex> eigenvalues() const;
    double spectral_radius() const;
    int max_index() const;
};

struct SynthesisResult {
    CMat matrix;
    SpectralDecomposition decomposition;
};

// Builds X = U J U^{ -1} for the Jordan matrix J described by spec, together
// with its exact spectral data P_k = U E_k U^{-1}, N_k = U S_k U^{-1} where
// E_k selects all blocks with eigenvalue lambda_k and S_k their superdiagonals.
// Throws SingularBasis / ConditioningExceeded / DimensionMismatch.
SynthesisResult synthesize(const JordanStructureSpec& spec, const CMat& basis,
                           double cond_cap = 1e3);

struct ValidationCheck {
    std::string name;
    double residual = 0.0;  // normalized; comparable against tol directly
    bool pass = true;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    double max_residual = 0.0;
    bool all_pass = true;
};

// Measures every algebraic invariant of the decomposition (idempotency,
// orthogonality, completeness, nilpotency with index minimality, commutation
// P_k N_k = N_k P_k = N_k). Never throws; failures are carried in the report.
ValidationReport validate(const SpectralDecomposition& dec, double tol = 1e-10);

// (X_P, X_N) with X_P = Sum lambda_k P_k and X_N = Sum N_k.
std::pair<CMat, CMat> split_pn(const SpectralDecomposition& dec);

// Per-component nilpotent powers N_k^1 .. N_k^{index-1}; an empty list marks a
// negligible nilpotent part (||N_k|| <= 1e-12 ||X||), whose derivative terms
// every operator-integral sum skips.
std::vector<std::vector<CMat>> nilpotent_powers(const SpectralDecomposition& dec);

// Best-effort inverse of synthesize for well-separated eigenvalue clusters
// (gap > 10 * group_tol required), intended for n <= 32. Eigenvalues are
// clustered within group_tol, projectors built from Hermite indicator
// polynomials on the clustered spectrum, N_k = (X - Sum lambda_j P_j) P_k.
SpectralDecomposition decompose(const CMat& x, double group_tol);

}  // namespace doi
