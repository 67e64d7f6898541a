#pragma once

#include <array>

#include "doi/functions.hpp"
#include "doi/spectral.hpp"

namespace doi {

// f(X) = Sum_k f(lambda_k) P_k + Sum_k Sum_{q=1}^{m_k-1} f^(q)(lambda_k)/q! N_k^q.
// Exact for polynomials up to rounding. Throws RadiusExceeded if some
// eigenvalue lies outside the convergence radius of f.
CMat eval_matrix_fn1(const AnalyticFn1& f, const SpectralDecomposition& dec);

// Two-variable spectral mapping: the four-part expansion of f(X1, X2) with
// P1 P2, P1 N2^q2, N1^q1 P2 and N1^q1 N2^q2 terms.
CMat eval_matrix_fn2(const AnalyticFn2& f, const SpectralDecomposition& dec1,
                     const SpectralDecomposition& dec2);

// The four addends of the generalized double operator integral, split by the
// projector/nilpotent placement around Y. Their sum reproduces gdoi() exactly
// (bit for bit: gdoi is defined as this sum).
struct GdoiFourParts {
    CMat pp, pn, np, nn;
    CMat sum() const { return pp + pn + np + nn; }
};

// T_beta^{X1,X2}(Y): the four-part sum over spectral components
//   Sum beta(l1,l2) P1 Y P2
// + Sum beta^(-,q2)/q2! P1 Y N2^q2
// + Sum beta^(q1,-)/q1! N1^q1 Y P2
// + Sum beta^(q1,q2)/(q1!q2!) N1^q1 Y N2^q2
// with the component loops ordered k1 outer, k2 inner, then the q loops.
// Derivative orders are requested only up to (m_k1 - 1, m_k2 - 1) per pair.
GdoiFourParts gdoi_split(const AnalyticFn2& beta, const SpectralDecomposition& dec1,
                         const SpectralDecomposition& dec2, const CMat& y);

CMat gdoi(const AnalyticFn2& beta, const SpectralDecomposition& dec1,
          const SpectralDecomposition& dec2, const CMat& y);

// Projector-only double sum, valid when both parameter matrices are
// diagonalizable; coincides with gdoi() on such inputs. Throws
// NonDiagonalizableInput when a nilpotent part is present.
CMat doi_hermitian(const AnalyticFn2& beta, const SpectralDecomposition& dec1,
                   const SpectralDecomposition& dec2, const CMat& y,
                   double tol = 1e-12);

// Positional varieties with Y moved before / after both parameter slots,
// computed through the factorization Y * beta(X1, X2) and beta(X1, X2) * Y.
CMat doi_variant_pre(const AnalyticFn2& beta, const SpectralDecomposition& dec1,
                     const SpectralDecomposition& dec2, const CMat& y);
CMat doi_variant_post(const AnalyticFn2& beta, const SpectralDecomposition& dec1,
                      const SpectralDecomposition& dec2, const CMat& y);

// T_beta(T_gamma(Y)): two sequential gdoi applications.
CMat compose(const AnalyticFn2& beta, const AnalyticFn2& gamma,
             const SpectralDecomposition& dec1, const SpectralDecomposition& dec2,
             const CMat& y);

// The eight addends of the generalized triple operator integral, in the order
// PPP, PPN, PNP, NPP, PNN, NPN, NNP, NNN of the nilpotent placements.
struct GtoiEightParts {
    std::array<CMat, 8> parts;
    CMat sum() const;
};

GtoiEightParts gtoi_split(const AnalyticFn3& beta, const SpectralDecomposition& dec1,
                          const SpectralDecomposition& dec2, const SpectralDecomposition& dec3,
                          const CMat& y1, const CMat& y2);

CMat gtoi(const AnalyticFn3& beta, const SpectralDecomposition& dec1,
          const SpectralDecomposition& dec2, const SpectralDecomposition& dec3,
          const CMat& y1, const CMat& y2);

}  // namespace doi
