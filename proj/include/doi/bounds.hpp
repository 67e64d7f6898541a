#pragma once

#include <optional>

#include "doi/operator_integrals.hpp"

namespace doi {

struct BoundTerm {
    std::string name;
    double value = 0.0;
};

// Structured record of a norm estimate. For upper bounds, bound_value is the
// sum of the terms; for lower bounds the terms are the four (or eight) part
// norms and bound_value is the reverse-triangle combination. slack is always
// bound - actual, and satisfied tests it against 1e-10 * max(1, bound) in the
// direction the bound claims.
struct BoundReport {
    std::string kind;
    bool is_upper = true;
    double bound_value = 0.0;
    std::vector<BoundTerm> terms;
    std::optional<double> min_variant;  // min-beta lower variant when its hypothesis holds
    double actual_value = 0.0;
    double slack = 0.0;
    bool satisfied = false;
};

// max[0, ||A_1|| - sum of the rest] after sorting descending.
double reverse_triangle_lower(std::vector<double> norms);

// Upper bound on ||T_beta(Y)||: max-over-spectra factors per derivative order
// times the nilpotent power norms and ||Y||. Maxima run over the finite grid
// of eigenvalue pairs.
//
// The spectrum-maxima bounds here and below are guaranteed for orthogonal
// spectral families (unitary Jordan basis, e.g. normal matrices or unitary
// conjugations of Jordan forms). With oblique projectors the reported bound
// can be exceeded: the decomposition components P_k Y P_l may be larger than
// their sum by the basis conditioning, and a nonconstant beta recombines them
// without the cancellation. Callers with ill-conditioned bases should treat
// the reports as estimates.
BoundReport gdoi_upper_bound(const AnalyticFn2& beta, const SpectralDecomposition& dec1,
                             const SpectralDecomposition& dec2, const CMat& y);

// Lower bound via the reverse triangle inequality on the four split parts.
// When beta is real on the grid and [min beta] ||Y|| >= ||A2|| + ||A3|| + ||A4||,
// the min-beta variant is reported as well.
BoundReport gdoi_lower_bound(const AnalyticFn2& beta, const SpectralDecomposition& dec1,
                             const SpectralDecomposition& dec2, const CMat& y);

// Eight-term analogue for the triple operator integral.
BoundReport gtoi_upper_bound(const AnalyticFn3& beta, const SpectralDecomposition& dec1,
                             const SpectralDecomposition& dec2, const SpectralDecomposition& dec3,
                             const CMat& y1, const CMat& y2);

struct LipschitzBounds {
    BoundReport upper;
    BoundReport lower;
};

// Bounds on ||f(X1) - f(X2)|| by applying the gdoi bounds to beta = f^[1] and
// Y = X1 - X2; the actual value is computed independently through the
// one-variable functional calculus. Throws SpectraOverlap.
LipschitzBounds lipschitz_bounds(const AnalyticFn1& f, const SpectralDecomposition& dec1,
                                 const SpectralDecomposition& dec2, double sep_tol = 0.0);

struct HolderParams {
    double omega = 1.0;     // Holder exponent
    double nu = 0.0;        // asserted lower bound on ||X1 - X2||
    double nu_prime = 0.0;  // asserted lower bound on eigenvalue gaps
    double cap_m = 0.0;     // asserted upper bound on ||X1 - X2||; required when omega < 1
};

struct HolderConstants {
    double omega = 1.0;
    double nu = 0.0;
    double cap_m = 0.0;
    double c = 1.0;        // omega = 1: 1;  omega > 1: nu^(1-omega);  omega < 1: M^(1-omega)
    double c_prime = 1.0;  // omega < 1: nu'^(omega-1);  omega >= 1: |Lambda|^(omega-1)
    double d_omega = 0.0;  // Holder seminorm on the spectrum grid plus midpoints
};

struct HolderReport {
    BoundReport report;
    HolderConstants constants;
};

// Upper Holder estimate: C C' D_omega ||X1-X2||^omega plus the three nilpotent
// terms with exact ||N^q|| in place of the Gamma caps. Throws NuViolation when
// ||X1 - X2|| < nu or an eigenvalue gap is below nu_prime.
HolderReport holder_upper_bound(const AnalyticFn1& f, const SpectralDecomposition& dec1,
                                const SpectralDecomposition& dec2, const HolderParams& params);

}  // namespace doi
