#include "doi/operator_integrals.hpp"

#include <cmath>

namespace doi {

namespace {

using detail::factorial;

void check_operand(const SpectralDecomposition& dec, const CMat& y, const std::string& what) {
    check_matrix(y, what);
    if (dec.n != y.rows())
        throw DimensionMismatch(what + ": decomposition is " + std::to_string(dec.n) +
                                "-dimensional but operand is " + std::to_string(y.rows()));
}

}  // namespace

CMat eval_matrix_fn1(const AnalyticFn1& f, const SpectralDecomposition& dec) {
    const int n = dec.n;
    const auto npow = nilpotent_powers(dec);
    CMat out = CMat::Zero(n, n);
    for (size_t k = 0; k < dec.components.size(); ++k) {
        const auto& c = dec.components[k];
        out += f.value(c.eigenvalue) * c.projector;
        for (size_t q = 1; q <= npow[k].size(); ++q)
            out += (f.derivative(static_cast<int>(q), c.eigenvalue) / factorial(static_cast<int>(q))) *
                   npow[k][q - 1];
    }
    return out;
}

CMat eval_matrix_fn2(const AnalyticFn2& f, const SpectralDecomposition& dec1,
                     const SpectralDecomposition& dec2) {
    if (dec1.n != dec2.n)
        throw DimensionMismatch("eval_matrix_fn2: parameter dimensions differ");
    const int n = dec1.n;
    const auto npow1 = nilpotent_powers(dec1);
    const auto npow2 = nilpotent_powers(dec2);

    CMat out = CMat::Zero(n, n);
    for (size_t k1 = 0; k1 < dec1.components.size(); ++k1) {
        const auto& c1 = dec1.components[k1];
        for (size_t k2 = 0; k2 < dec2.components.size(); ++k2) {
            const auto& c2 = dec2.components[k2];
            const Complex l1 = c1.eigenvalue, l2 = c2.eigenvalue;
            out += f.value(l1, l2) * (c1.projector * c2.projector);
            for (size_t q2 = 1; q2 <= npow2[k2].size(); ++q2)
                out += (f.partial(0, static_cast<int>(q2), l1, l2) /
                        factorial(static_cast<int>(q2))) *
                       (c1.projector * npow2[k2][q2 - 1]);
            for (size_t q1 = 1; q1 <= npow1[k1].size(); ++q1)
                out += (f.partial(static_cast<int>(q1), 0, l1, l2) /
                        factorial(static_cast<int>(q1))) *
                       (npow1[k1][q1 - 1] * c2.projector);
            for (size_t q1 = 1; q1 <= npow1[k1].size(); ++q1)
                for (size_t q2 = 1; q2 <= npow2[k2].size(); ++q2)
                    out += (f.partial(static_cast<int>(q1), static_cast<int>(q2), l1, l2) /
                            (factorial(static_cast<int>(q1)) * factorial(static_cast<int>(q2)))) *
                           (npow1[k1][q1 - 1] * npow2[k2][q2 - 1]);
        }
    }
    return out;
}

GdoiFourParts gdoi_split(const AnalyticFn2& beta, const SpectralDecomposition& dec1,
                         const SpectralDecomposition& dec2, const CMat& y) {
    if (dec1.n != dec2.n)
        throw DimensionMismatch("gdoi: parameter dimensions differ");
    check_operand(dec1, y, "gdoi");
    const int n = dec1.n;
    const auto npow1 = nilpotent_powers(dec1);
    const auto npow2 = nilpotent_powers(dec2);

    GdoiFourParts parts{CMat::Zero(n, n), CMat::Zero(n, n), CMat::Zero(n, n), CMat::Zero(n, n)};

    for (size_t k1 = 0; k1 < dec1.components.size(); ++k1) {
        const auto& c1 = dec1.components[k1];
        const CMat p1y = c1.projector * y;
        std::vector<CMat> n1y;
        n1y.reserve(npow1[k1].size());
        for (const auto& pw : npow1[k1]) n1y.push_back(pw * y);

        for (size_t k2 = 0; k2 < dec2.components.size(); ++k2) {
            const auto& c2 = dec2.components[k2];
            const Complex l1 = c1.eigenvalue, l2 = c2.eigenvalue;

            parts.pp += beta.value(l1, l2) * (p1y * c2.projector);
            for (size_t q2 = 1; q2 <= npow2[k2].size(); ++q2)
                parts.pn += (beta.partial(0, static_cast<int>(q2), l1, l2) /
                             factorial(static_cast<int>(q2))) *
                            (p1y * npow2[k2][q2 - 1]);
            for (size_t q1 = 1; q1 <= n1y.size(); ++q1)
                parts.np += (beta.partial(static_cast<int>(q1), 0, l1, l2) /
                             factorial(static_cast<int>(q1))) *
                            (n1y[q1 - 1] * c2.projector);
            for (size_t q1 = 1; q1 <= n1y.size(); ++q1)
                for (size_t q2 = 1; q2 <= npow2[k2].size(); ++q2)
                    parts.nn += (beta.partial(static_cast<int>(q1), static_cast<int>(q2), l1, l2) /
                                 (factorial(static_cast<int>(q1)) *
                                  factorial(static_cast<int>(q2)))) *
                                (n1y[q1 - 1] * npow2[k2][q2 - 1]);
        }
    }
    return parts;
}

CMat gdoi(const AnalyticFn2& beta, const SpectralDecomposition& dec1,
          const SpectralDecomposition& dec2, const CMat& y) {
    return gdoi_split(beta, dec1, dec2, y).sum();
}

CMat doi_hermitian(const AnalyticFn2& beta, const SpectralDecomposition& dec1,
                   const SpectralDecomposition& dec2, const CMat& y, double tol) {
    if (!dec1.is_diagonalizable(tol) || !dec2.is_diagonalizable(tol))
        throw NonDiagonalizableInput(
            "doi_hermitian: a parameter matrix has a nonvanishing nilpotent part");
    if (dec1.n != dec2.n)
        throw DimensionMismatch("doi_hermitian: parameter dimensions differ");
    check_operand(dec1, y, "doi_hermitian");

    CMat out = CMat::Zero(dec1.n, dec1.n);
    for (const auto& c1 : dec1.components) {
        const CMat p1y = c1.projector * y;
        for (const auto& c2 : dec2.components)
            out += beta.value(c1.eigenvalue, c2.eigenvalue) * (p1y * c2.projector);
    }
    return out;
}

CMat doi_variant_pre(const AnalyticFn2& beta, const SpectralDecomposition& dec1,
                     const SpectralDecomposition& dec2, const CMat& y) {
    check_operand(dec1, y, "doi_variant_pre");
    return y * eval_matrix_fn2(beta, dec1, dec2);
}

CMat doi_variant_post(const AnalyticFn2& beta, const SpectralDecomposition& dec1,
                      const SpectralDecomposition& dec2, const CMat& y) {
    check_operand(dec1, y, "doi_variant_post");
    return eval_matrix_fn2(beta, dec1, dec2) * y;
}

CMat compose(const AnalyticFn2& beta, const AnalyticFn2& gamma,
             const SpectralDecomposition& dec1, const SpectralDecomposition& dec2,
             const CMat& y) {
    return gdoi(beta, dec1, dec2, gdoi(gamma, dec1, dec2, y));
}

CMat GtoiEightParts::sum() const {
    CMat out = parts[0];
    for (size_t i = 1; i < parts.size(); ++i) out += parts[i];
    return out;
}

GtoiEightParts gtoi_split(const AnalyticFn3& beta, const SpectralDecomposition& dec1,
                          const SpectralDecomposition& dec2, const SpectralDecomposition& dec3,
                          const CMat& y1, const CMat& y2) {
    if (dec1.n != dec2.n || dec1.n != dec3.n)
        throw DimensionMismatch("gtoi: parameter dimensions differ");
    check_operand(dec1, y1, "gtoi");
    check_operand(dec1, y2, "gtoi");
    const int n = dec1.n;
    const auto npow1 = nilpotent_powers(dec1);
    const auto npow2 = nilpotent_powers(dec2);
    const auto npow3 = nilpotent_powers(dec3);

    GtoiEightParts out;
    for (auto& p : out.parts) p = CMat::Zero(n, n);

    for (size_t k1 = 0; k1 < dec1.components.size(); ++k1) {
        const auto& c1 = dec1.components[k1];
        const CMat p1y1 = c1.projector * y1;
        std::vector<CMat> n1y1;
        for (const auto& pw : npow1[k1]) n1y1.push_back(pw * y1);

        for (size_t k2 = 0; k2 < dec2.components.size(); ++k2) {
            const auto& c2 = dec2.components[k2];
            // Middle-slot products, then each gets Y2 appended.
            const CMat mid_pp = p1y1 * c2.projector * y2;
            std::vector<CMat> mid_pn, mid_np;
            std::vector<std::vector<CMat>> mid_nn(n1y1.size());
            for (const auto& pw2 : npow2[k2]) mid_pn.push_back(p1y1 * pw2 * y2);
            for (size_t q1 = 0; q1 < n1y1.size(); ++q1) {
                mid_np.push_back(n1y1[q1] * c2.projector * y2);
                for (const auto& pw2 : npow2[k2]) mid_nn[q1].push_back(n1y1[q1] * pw2 * y2);
            }

            for (size_t k3 = 0; k3 < dec3.components.size(); ++k3) {
                const auto& c3 = dec3.components[k3];
                const Complex l1 = c1.eigenvalue, l2 = c2.eigenvalue, l3 = c3.eigenvalue;
                const size_t m1 = n1y1.size(), m2 = npow2[k2].size(), m3 = npow3[k3].size();

                auto d = [&](size_t q1, size_t q2, size_t q3) {
                    return beta.partial(static_cast<int>(q1), static_cast<int>(q2),
                                        static_cast<int>(q3), l1, l2, l3) /
                           (factorial(static_cast<int>(q1)) * factorial(static_cast<int>(q2)) *
                            factorial(static_cast<int>(q3)));
                };

                out.parts[0] += d(0, 0, 0) * (mid_pp * c3.projector);
                for (size_t q3 = 1; q3 <= m3; ++q3)
                    out.parts[1] += d(0, 0, q3) * (mid_pp * npow3[k3][q3 - 1]);
                for (size_t q2 = 1; q2 <= m2; ++q2)
                    out.parts[2] += d(0, q2, 0) * (mid_pn[q2 - 1] * c3.projector);
                for (size_t q1 = 1; q1 <= m1; ++q1)
                    out.parts[3] += d(q1, 0, 0) * (mid_np[q1 - 1] * c3.projector);
                for (size_t q2 = 1; q2 <= m2; ++q2)
                    for (size_t q3 = 1; q3 <= m3; ++q3)
                        out.parts[4] += d(0, q2, q3) * (mid_pn[q2 - 1] * npow3[k3][q3 - 1]);
                for (size_t q1 = 1; q1 <= m1; ++q1)
                    for (size_t q3 = 1; q3 <= m3; ++q3)
                        out.parts[5] += d(q1, 0, q3) * (mid_np[q1 - 1] * npow3[k3][q3 - 1]);
                for (size_t q1 = 1; q1 <= m1; ++q1)
                    for (size_t q2 = 1; q2 <= m2; ++q2)
                        out.parts[6] += d(q1, q2, 0) * (mid_nn[q1 - 1][q2 - 1] * c3.projector);
                for (size_t q1 = 1; q1 <= m1; ++q1)
                    for (size_t q2 = 1; q2 <= m2; ++q2)
                        for (size_t q3 = 1; q3 <= m3; ++q3)
                            out.parts[7] +=
                                d(q1, q2, q3) * (mid_nn[q1 - 1][q2 - 1] * npow3[k3][q3 - 1]);
            }
        }
    }
    return out;
}

CMat gtoi(const AnalyticFn3& beta, const SpectralDecomposition& dec1,
          const SpectralDecomposition& dec2, const SpectralDecomposition& dec3,
          const CMat& y1, const CMat& y2) {
    return gtoi_split(beta, dec1, dec2, dec3, y1, y2).sum();
}

}  // namespace doi
