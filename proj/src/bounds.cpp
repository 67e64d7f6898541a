#include "doi/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "doi/perturbation.hpp"

namespace doi {

namespace {

using detail::factorial;

constexpr double kSlackRel = 1e-10;

// The comparison scale of a report: the magnitude of the additive terms that
// produced the bound, so slack tolerances track the cancellation level.
double report_scale(const BoundReport& r) {
    double terms_sum = 0.0;
    for (const auto& t : r.terms) terms_sum += std::abs(t.value);
    return std::max({1.0, r.bound_value, terms_sum});
}

double slack_tolerance(const BoundReport& r) { return kSlackRel * report_scale(r); }

void finalize(BoundReport& r, double actual) {
    r.actual_value = actual;
    r.slack = r.bound_value - actual;
    if (r.is_upper) {
        r.satisfied = r.slack >= -slack_tolerance(r);
    } else {
        r.satisfied = r.slack <= slack_tolerance(r);
        if (r.min_variant)
            r.satisfied = r.satisfied && (*r.min_variant - actual <= slack_tolerance(r));
    }
}

double max_abs_partial2(const AnalyticFn2& f, const std::vector<Complex>& grid1,
                        const std::vector<Complex>& grid2, int q1, int q2) {
    double m = 0.0;
    for (const Complex& a : grid1)
        for (const Complex& b : grid2) m = std::max(m, std::abs(f.partial(q1, q2, a, b)));
    return m;
}

double max_abs_partial3(const AnalyticFn3& f, const std::vector<Complex>& g1,
                        const std::vector<Complex>& g2, const std::vector<Complex>& g3, int q1,
                        int q2, int q3) {
    double m = 0.0;
    for (const Complex& a : g1)
        for (const Complex& b : g2)
            for (const Complex& c : g3)
                m = std::max(m, std::abs(f.partial(q1, q2, q3, a, b, c)));
    return m;
}

}  // namespace

double reverse_triangle_lower(std::vector<double> norms) {
    if (norms.empty()) throw EmptyList("reverse_triangle_lower: empty norm list");
    std::sort(norms.begin(), norms.end(), std::greater<double>());
    double rest = 0.0;
    for (size_t i = 1; i < norms.size(); ++i) rest += norms[i];
    return std::max(0.0, norms[0] - rest);
}

BoundReport gdoi_upper_bound(const AnalyticFn2& beta, const SpectralDecomposition& dec1,
                             const SpectralDecomposition& dec2, const CMat& y) {
    const auto grid1 = dec1.eigenvalues();
    const auto grid2 = dec2.eigenvalues();
    const auto npow1 = nilpotent_powers(dec1);
    const auto npow2 = nilpotent_powers(dec2);
    const double ynorm = y.norm();

    BoundReport r;
    r.kind = "gdoi_upper";
    r.is_upper = true;

    r.terms.push_back({"PP", max_abs_partial2(beta, grid1, grid2, 0, 0) * ynorm});
    for (size_t k2 = 0; k2 < npow2.size(); ++k2)
        for (size_t q2 = 1; q2 <= npow2[k2].size(); ++q2) {
            const int q = static_cast<int>(q2);
            r.terms.push_back(
                {"PN[k2=" + std::to_string(k2) + ",q2=" + std::to_string(q) + "]",
                 max_abs_partial2(beta, grid1, grid2, 0, q) / factorial(q) *
                     npow2[k2][q2 - 1].norm() * ynorm});
        }
    for (size_t k1 = 0; k1 < npow1.size(); ++k1)
        for (size_t q1 = 1; q1 <= npow1[k1].size(); ++q1) {
            const int q = static_cast<int>(q1);
            r.terms.push_back(
                {"NP[k1=" + std::to_string(k1) + ",q1=" + std::to_string(q) + "]",
                 max_abs_partial2(beta, grid1, grid2, q, 0) / factorial(q) *
                     npow1[k1][q1 - 1].norm() * ynorm});
        }
    for (size_t k1 = 0; k1 < npow1.size(); ++k1)
        for (size_t k2 = 0; k2 < npow2.size(); ++k2)
            for (size_t q1 = 1; q1 <= npow1[k1].size(); ++q1)
                for (size_t q2 = 1; q2 <= npow2[k2].size(); ++q2) {
                    const int a = static_cast<int>(q1), b = static_cast<int>(q2);
                    r.terms.push_back(
                        {"NN[k1=" + std::to_string(k1) + ",k2=" + std::to_string(k2) +
                             ",q1=" + std::to_string(a) + ",q2=" + std::to_string(b) + "]",
                         max_abs_partial2(beta, grid1, grid2, a, b) /
                             (factorial(a) * factorial(b)) * npow1[k1][q1 - 1].norm() *
                             npow2[k2][q2 - 1].norm() * ynorm});
                }

    for (const auto& t : r.terms) r.bound_value += t.value;
    finalize(r, gdoi(beta, dec1, dec2, y).norm());
    return r;
}

BoundReport gdoi_lower_bound(const AnalyticFn2& beta, const SpectralDecomposition& dec1,
                             const SpectralDecomposition& dec2, const CMat& y) {
    const auto parts = gdoi_split(beta, dec1, dec2, y);
    const std::vector<std::pair<std::string, double>> named = {
        {"PP", parts.pp.norm()}, {"PN", parts.pn.norm()},
        {"NP", parts.np.norm()}, {"NN", parts.nn.norm()}};

    BoundReport r;
    r.kind = "gdoi_lower";
    r.is_upper = false;
    std::vector<double> norms;
    for (const auto& [name, value] : named) {
        r.terms.push_back({name, value});
        norms.push_back(value);
    }
    r.bound_value = reverse_triangle_lower(norms);

    // Min-beta variant: only defined when beta is real-valued on the grid.
    const auto grid1 = dec1.eigenvalues();
    const auto grid2 = dec2.eigenvalues();
    double min_real = std::numeric_limits<double>::infinity();
    double max_abs = 0.0, max_imag = 0.0;
    for (const Complex& a : grid1)
        for (const Complex& b : grid2) {
            const Complex v = beta.value(a, b);
            min_real = std::min(min_real, v.real());
            max_abs = std::max(max_abs, std::abs(v));
            max_imag = std::max(max_imag, std::abs(v.imag()));
        }
    const bool real_on_grid = max_imag <= 1e-12 * std::max(1.0, max_abs);
    const double rest = named[1].second + named[2].second + named[3].second;
    if (real_on_grid && min_real * y.norm() >= rest)
        r.min_variant = min_real * y.norm() - rest;

    finalize(r, parts.sum().norm());
    return r;
}

BoundReport gtoi_upper_bound(const AnalyticFn3& beta, const SpectralDecomposition& dec1,
                             const SpectralDecomposition& dec2, const SpectralDecomposition& dec3,
                             const CMat& y1, const CMat& y2) {
    const auto g1 = dec1.eigenvalues();
    const auto g2 = dec2.eigenvalues();
    const auto g3 = dec3.eigenvalues();
    const auto np1 = nilpotent_powers(dec1);
    const auto np2 = nilpotent_powers(dec2);
    const auto np3 = nilpotent_powers(dec3);
    const double yy = y1.norm() * y2.norm();

    BoundReport r;
    r.kind = "gtoi_upper";
    r.is_upper = true;

    auto coeff = [&](int q1, int q2, int q3) {
        return max_abs_partial3(beta, g1, g2, g3, q1, q2, q3) /
               (factorial(q1) * factorial(q2) * factorial(q3));
    };
    auto norm_of = [](const std::vector<std::vector<CMat>>& np, size_t k, size_t q) {
        return np[k][q - 1].norm();
    };

    r.terms.push_back({"PPP", coeff(0, 0, 0) * yy});
    for (size_t k3 = 0; k3 < np3.size(); ++k3)
        for (size_t q3 = 1; q3 <= np3[k3].size(); ++q3)
            r.terms.push_back({"PPN", coeff(0, 0, static_cast<int>(q3)) * yy * norm_of(np3, k3, q3)});
    for (size_t k2 = 0; k2 < np2.size(); ++k2)
        for (size_t q2 = 1; q2 <= np2[k2].size(); ++q2)
            r.terms.push_back({"PNP", coeff(0, static_cast<int>(q2), 0) * yy * norm_of(np2, k2, q2)});
    for (size_t k1 = 0; k1 < np1.size(); ++k1)
        for (size_t q1 = 1; q1 <= np1[k1].size(); ++q1)
            r.terms.push_back({"NPP", coeff(static_cast<int>(q1), 0, 0) * yy * norm_of(np1, k1, q1)});
    for (size_t k2 = 0; k2 < np2.size(); ++k2)
        for (size_t k3 = 0; k3 < np3.size(); ++k3)
            for (size_t q2 = 1; q2 <= np2[k2].size(); ++q2)
                for (size_t q3 = 1; q3 <= np3[k3].size(); ++q3)
                    r.terms.push_back({"PNN", coeff(0, static_cast<int>(q2), static_cast<int>(q3)) *
                                                  yy * norm_of(np2, k2, q2) * norm_of(np3, k3, q3)});
    for (size_t k1 = 0; k1 < np1.size(); ++k1)
        for (size_t k3 = 0; k3 < np3.size(); ++k3)
            for (size_t q1 = 1; q1 <= np1[k1].size(); ++q1)
                for (size_t q3 = 1; q3 <= np3[k3].size(); ++q3)
                    r.terms.push_back({"NPN", coeff(static_cast<int>(q1), 0, static_cast<int>(q3)) *
                                                  yy * norm_of(np1, k1, q1) * norm_of(np3, k3, q3)});
    for (size_t k1 = 0; k1 < np1.size(); ++k1)
        for (size_t k2 = 0; k2 < np2.size(); ++k2)
            for (size_t q1 = 1; q1 <= np1[k1].size(); ++q1)
                for (size_t q2 = 1; q2 <= np2[k2].size(); ++q2)
                    r.terms.push_back({"NNP", coeff(static_cast<int>(q1), static_cast<int>(q2), 0) *
                                                  yy * norm_of(np1, k1, q1) * norm_of(np2, k2, q2)});
    for (size_t k1 = 0; k1 < np1.size(); ++k1)
        for (size_t k2 = 0; k2 < np2.size(); ++k2)
            for (size_t k3 = 0; k3 < np3.size(); ++k3)
                for (size_t q1 = 1; q1 <= np1[k1].size(); ++q1)
                    for (size_t q2 = 1; q2 <= np2[k2].size(); ++q2)
                        for (size_t q3 = 1; q3 <= np3[k3].size(); ++q3)
                            r.terms.push_back(
                                {"NNN", coeff(static_cast<int>(q1), static_cast<int>(q2),
                                              static_cast<int>(q3)) *
                                            yy * norm_of(np1, k1, q1) * norm_of(np2, k2, q2) *
                                            norm_of(np3, k3, q3)});

    for (const auto& t : r.terms) r.bound_value += t.value;
    finalize(r, gtoi(beta, dec1, dec2, dec3, y1, y2).norm());
    return r;
}

LipschitzBounds lipschitz_bounds(const AnalyticFn1& f, const SpectralDecomposition& dec1,
                                 const SpectralDecomposition& dec2, double sep_tol) {
    const double tol = sep_tol > 0.0 ? sep_tol : default_sep_tol(dec1, dec2);
    if (spectral_gap(dec1, dec2) < tol)
        throw SpectraOverlap("lipschitz_bounds: spectra are closer than the separation guard");

    const AnalyticFn2 dd = divided_diff_1(f, {tol, false});
    const CMat diff = dec1.reconstruct() - dec2.reconstruct();
    const double actual = (eval_matrix_fn1(f, dec1) - eval_matrix_fn1(f, dec2)).norm();

    LipschitzBounds out;
    out.upper = gdoi_upper_bound(dd, dec1, dec2, diff);
    out.upper.kind = "lipschitz_upper";
    finalize(out.upper, actual);
    out.lower = gdoi_lower_bound(dd, dec1, dec2, diff);
    out.lower.kind = "lipschitz_lower";
    finalize(out.lower, actual);
    return out;
}

HolderReport holder_upper_bound(const AnalyticFn1& f, const SpectralDecomposition& dec1,
                                const SpectralDecomposition& dec2, const HolderParams& params) {
    if (params.omega <= 0.0) throw InvalidInput("holder_upper_bound: omega must be positive");
    if (params.nu <= 0.0) throw InvalidInput("holder_upper_bound: nu must be positive");

    const CMat diff = dec1.reconstruct() - dec2.reconstruct();
    const double t = diff.norm();
    if (t < params.nu)
        throw NuViolation("holder_upper_bound: ||X1 - X2|| = " + std::to_string(t) +
                          " below nu = " + std::to_string(params.nu));
    if (spectral_gap(dec1, dec2) < params.nu_prime)
        throw NuViolation("holder_upper_bound: eigenvalue gap below nu'");
    if (params.omega < 1.0) {
        if (params.cap_m <= 0.0)
            throw InvalidInput("holder_upper_bound: cap_m is required when omega < 1");
        if (t > params.cap_m)
            throw InvalidInput("holder_upper_bound: ||X1 - X2|| exceeds cap_m");
    }

    const auto grid1 = dec1.eigenvalues();
    const auto grid2 = dec2.eigenvalues();

    // Bounded spectral domain: union of both spectra, diameter as range norm.
    std::vector<Complex> domain = grid1;
    domain.insert(domain.end(), grid2.begin(), grid2.end());
    double diameter = 0.0;
    for (size_t i = 0; i < domain.size(); ++i)
        for (size_t j = i + 1; j < domain.size(); ++j)
            diameter = std::max(diameter, std::abs(domain[i] - domain[j]));

    HolderConstants k;
    k.omega = params.omega;
    k.nu = params.nu;
    k.cap_m = params.cap_m;
    if (params.omega == 1.0)
        k.c = 1.0;
    else if (params.omega > 1.0)
        k.c = std::pow(params.nu, 1.0 - params.omega);
    else
        k.c = std::pow(params.cap_m, 1.0 - params.omega);
    k.c_prime = params.omega < 1.0 ? std::pow(params.nu_prime, params.omega - 1.0)
                                   : std::pow(diameter, params.omega - 1.0);

    // Holder seminorm on the cross-spectrum grid plus midpoints; pairs closer
    // than nu' are outside the asserted gap and are skipped.
    std::vector<Complex> dgrid = domain;
    for (const Complex& a : grid1)
        for (const Complex& b : grid2) dgrid.push_back((a + b) / 2.0);
    for (size_t i = 0; i < dgrid.size(); ++i)
        for (size_t j = i + 1; j < dgrid.size(); ++j) {
            const double gap = std::abs(dgrid[i] - dgrid[j]);
            if (gap < params.nu_prime || gap == 0.0) continue;
            k.d_omega = std::max(k.d_omega, std::abs(f.value(dgrid[i]) - f.value(dgrid[j])) /
                                                std::pow(gap, params.omega));
        }

    const double sep = default_sep_tol(dec1, dec2);
    const AnalyticFn2 dd = divided_diff_1(f, {sep, false});
    const auto npow1 = nilpotent_powers(dec1);
    const auto npow2 = nilpotent_powers(dec2);
    const double t_omega = std::pow(t, params.omega);

    HolderReport out;
    out.constants = k;
    BoundReport& r = out.report;
    r.kind = "holder_upper";
    r.is_upper = true;

    r.terms.push_back({"seminorm", k.c * k.c_prime * k.d_omega * t_omega});
    for (size_t k2 = 0; k2 < npow2.size(); ++k2)
        for (size_t q2 = 1; q2 <= npow2[k2].size(); ++q2) {
            const int q = static_cast<int>(q2);
            r.terms.push_back({"PN[k2=" + std::to_string(k2) + ",q2=" + std::to_string(q) + "]",
                               k.c * max_abs_partial2(dd, grid1, grid2, 0, q) / factorial(q) *
                                   npow2[k2][q2 - 1].norm() * t_omega});
        }
    for (size_t k1 = 0; k1 < npow1.size(); ++k1)
        for (size_t q1 = 1; q1 <= npow1[k1].size(); ++q1) {
            const int q = static_cast<int>(q1);
            r.terms.push_back({"NP[k1=" + std::to_string(k1) + ",q1=" + std::to_string(q) + "]",
                               k.c * max_abs_partial2(dd, grid1, grid2, q, 0) / factorial(q) *
                                   npow1[k1][q1 - 1].norm() * t_omega});
        }
    for (size_t k1 = 0; k1 < npow1.size(); ++k1)
        for (size_t k2 = 0; k2 < npow2.size(); ++k2)
            for (size_t q1 = 1; q1 <= npow1[k1].size(); ++q1)
                for (size_t q2 = 1; q2 <= npow2[k2].size(); ++q2) {
                    const int a = static_cast<int>(q1), b = static_cast<int>(q2);
                    r.terms.push_back(
                        {"NN[k1=" + std::to_string(k1) + ",k2=" + std::to_string(k2) +
                             ",q1=" + std::to_string(a) + ",q2=" + std::to_string(b) + "]",
                         k.c * max_abs_partial2(dd, grid1, grid2, a, b) /
                             (factorial(a) * factorial(b)) * npow1[k1][q1 - 1].norm() *
                             npow2[k2][q2 - 1].norm() * t_omega});
                }

    for (const auto& term : r.terms) r.bound_value += term.value;
    finalize(r, (eval_matrix_fn1(f, dec1) - eval_matrix_fn1(f, dec2)).norm());
    return out;
}

}  // namespace doi
