#include "doi/perturbation.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "doi/rng.hpp"

namespace doi {

double spectral_gap(const SpectralDecomposition& dec1, const SpectralDecomposition& dec2) {
    double gap = std::numeric_limits<double>::infinity();
    for (const auto& c1 : dec1.components)
        for (const auto& c2 : dec2.components)
            gap = std::min(gap, std::abs(c1.eigenvalue - c2.eigenvalue));
    return gap;
}

double default_sep_tol(const SpectralDecomposition& dec1, const SpectralDecomposition& dec2) {
    return 1e-6 * std::max({1.0, dec1.spectral_radius(), dec2.spectral_radius()});
}

namespace {

double resolve_sep_tol(const SpectralDecomposition& dec1, const SpectralDecomposition& dec2,
                       double sep_tol, const std::string& what) {
    const double tol = sep_tol > 0.0 ? sep_tol : default_sep_tol(dec1, dec2);
    if (spectral_gap(dec1, dec2) < tol)
        throw SpectraOverlap(what + ": spectra of the parameter matrices are closer than " +
                             std::to_string(tol));
    return tol;
}

}  // namespace

IdentityCheck perturbation_commutator(const AnalyticFn1& f, const SpectralDecomposition& dec1,
                                      const SpectralDecomposition& dec2, const CMat& y,
                                      double sep_tol) {
    const double tol = resolve_sep_tol(dec1, dec2, sep_tol, "perturbation_commutator");
    const CMat x1 = dec1.reconstruct();
    const CMat x2 = dec2.reconstruct();

    IdentityCheck out;
    out.lhs = eval_matrix_fn1(f, dec1) * y - y * eval_matrix_fn1(f, dec2);
    out.rhs = gdoi(divided_diff_1(f, {tol, false}), dec1, dec2, x1 * y - y * x2);
    out.residual = (out.lhs - out.rhs).norm() / std::max(1.0, out.lhs.norm());
    return out;
}

IdentityCheck perturbation_difference(const AnalyticFn1& f, const SpectralDecomposition& dec1,
                                      const SpectralDecomposition& dec2, double sep_tol) {
    return perturbation_commutator(f, dec1, dec2, CMat::Identity(dec1.n, dec1.n), sep_tol);
}

CMat mu_extra_term(const AnalyticFn1& f, const SpectralDecomposition& dec1,
                   const SpectralDecomposition& dec2, double sep_tol) {
    resolve_sep_tol(dec1, dec2, sep_tol, "mu_extra_term");
    const CMat eye = CMat::Identity(dec1.n, dec1.n);
    // T_{f(x1)}^{X1_N, X2_P}(I) is the NP part of T_{f o pi1}(I); the second
    // term is the PN part of T_{f o pi2}(I).
    const CMat first = gdoi_split(lift_first(f), dec1, dec2, eye).np;
    const CMat second = gdoi_split(lift_second(f), dec1, dec2, eye).pn;
    return first - second;
}

bool operator<(const DivergenceTriple& a, const DivergenceTriple& b) {
    if (a.ell1 != b.ell1) return a.ell1 < b.ell1;
    if (a.ell2 != b.ell2) return a.ell2 < b.ell2;
    return a.r < b.r;
}

bool operator==(const DivergenceTriple& a, const DivergenceTriple& b) {
    return a.ell1 == b.ell1 && a.ell2 == b.ell2 && a.r == b.r;
}

DivergenceTriple divergence_triple(const CMat& mu, double tol) {
    check_matrix(mu, "divergence_triple");
    const double r = mu.norm();
    if (r <= tol) return {0, 0, 0.0};

    Eigen::ComplexEigenSolver<CMat> solver(mu, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw NonConvergence("divergence_triple: eigenvalue iteration did not converge");

    DivergenceTriple out;
    out.r = r;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
        if (std::abs(solver.eigenvalues()(i)) > tol * r) ++out.ell1;

    if (out.ell1 == 0) {
        const int n = static_cast<int>(mu.rows());
        CMat pw = mu;
        out.ell2 = n;  // nilpotent degree never exceeds the dimension
        for (int k = 2; k <= n; ++k) {
            pw = pw * mu;
            if (pw.norm() <= tol * r) {
                out.ell2 = k;
                break;
            }
        }
    }
    return out;
}

namespace {

bool strictly_triangular(const CMat& n, bool upper, double abs_tol) {
    for (Eigen::Index i = 0; i < n.rows(); ++i)
        for (Eigen::Index j = 0; j < n.cols(); ++j) {
            const bool keep = upper ? (j > i) : (j < i);
            if (!keep && std::abs(n(i, j)) > abs_tol) return false;
        }
    return true;
}

std::vector<const CMat*> live_nilpotents(const SpectralDecomposition& dec) {
    const double threshold = 1e-12 * dec.reconstruct().norm();
    std::vector<const CMat*> out;
    for (const auto& c : dec.components)
        if (c.nilpotent.norm() > threshold) out.push_back(&c.nilpotent);
    return out;
}

}  // namespace

NilpotencyPrediction predict_nilpotency(const SpectralDecomposition& dec1,
                                        const SpectralDecomposition& dec2, StructuralHint hint,
                                        double tol) {
    const auto n1 = live_nilpotents(dec1);
    const auto n2 = live_nilpotents(dec2);

    auto triangular_check = [&]() -> bool {
        for (bool upper : {true, false}) {
            bool all = true;
            for (const CMat* m : n1)
                all = all && strictly_triangular(*m, upper, 1e-13 * std::max(1.0, m->norm()));
            for (const CMat* m : n2)
                all = all && strictly_triangular(*m, upper, 1e-13 * std::max(1.0, m->norm()));
            if (all) return true;
        }
        return false;
    };

    auto commuting_check = [&]() -> bool {
        for (const CMat* a : n1)
            for (const CMat* b : n2)
                if (((*a) * (*b) - (*b) * (*a)).norm() > tol * a->norm() * b->norm())
                    return false;
        return true;
    };

    const int m1 = dec1.max_index();
    const int m2 = dec2.max_index();

    if ((hint == StructuralHint::automatic || hint == StructuralHint::triangular) &&
        triangular_check())
        return {NilpotencyBranch::triangular, std::max(m1, m2)};
    if ((hint == StructuralHint::automatic || hint == StructuralHint::commuting) &&
        commuting_check())
        return {NilpotencyBranch::commuting, std::min(dec1.n, m1 + m2)};
    return {NilpotencyBranch::none, 0};
}

double telescope_residual(const AnalyticFn1& f, const SpectralDecomposition& dec_a,
                          const SpectralDecomposition& dec_b, const SpectralDecomposition& dec_x,
                          const CMat& y, double sep_tol) {
    double tol = sep_tol;
    if (tol <= 0.0)
        tol = 1e-6 * std::max({1.0, dec_a.spectral_radius(), dec_b.spectral_radius(),
                               dec_x.spectral_radius()});
    if (spectral_gap(dec_a, dec_x) < tol || spectral_gap(dec_b, dec_x) < tol ||
        spectral_gap(dec_a, dec_b) < tol)
        throw SpectraOverlap("telescope_residual: parameter spectra are not pairwise separated");

    const AnalyticFn2 dd1 = divided_diff_1(f, {tol, false});
    const CMat lhs = gdoi(dd1, dec_a, dec_x, y) - gdoi(dd1, dec_b, dec_x, y);
    const CMat diff = dec_a.reconstruct() - dec_b.reconstruct();
    const CMat rhs = gtoi(divided_diff_2(f, {tol, false}), dec_a, dec_b, dec_x, diff, y);
    return (lhs - rhs).norm() / std::max(1.0, lhs.norm());
}

namespace {

// Distinct eigenvalues of a spec in first-appearance order, with the map from
// block position to distinct index (mirrors the grouping in synthesize).
std::pair<std::vector<Complex>, std::vector<int>> distinct_eigenvalues(
    const JordanStructureSpec& spec) {
    std::vector<Complex> distinct;
    std::vector<int> block_component(spec.blocks.size());
    for (size_t b = 0; b < spec.blocks.size(); ++b) {
        const Complex lam = spec.blocks[b].eigenvalue;
        auto it = std::find(distinct.begin(), distinct.end(), lam);
        if (it == distinct.end()) {
            block_component[b] = static_cast<int>(distinct.size());
            distinct.push_back(lam);
        } else {
            block_component[b] = static_cast<int>(it - distinct.begin());
        }
    }
    return {distinct, block_component};
}

bool spectra_collide(const std::vector<Complex>& lams, double tol) {
    for (size_t i = 0; i < lams.size(); ++i)
        for (size_t j = i + 1; j < lams.size(); ++j)
            if (std::abs(lams[i] - lams[j]) < tol) return true;
    return false;
}

}  // namespace

ContinuityProbeResult continuity_probe(const AnalyticFn2& beta,
                                       const SpectralDecomposition& dec1,
                                       const SpectralDecomposition& dec2, const CMat& y,
                                       const std::vector<double>& scales,
                                       const ContinuityDirections& directions) {
    if (!dec1.source || !dec2.source)
        throw InvalidInput(
            "continuity_probe: decompositions must carry their synthesis source");

    const auto [lam1, map1] = distinct_eigenvalues(dec1.source->spec);
    const auto [lam2, map2] = distinct_eigenvalues(dec2.source->spec);
    if (directions.eigen_dir1.size() != lam1.size() ||
        directions.eigen_dir2.size() != lam2.size())
        throw InvalidInput("continuity_probe: eigenvalue direction size mismatch");
    if (directions.basis_dir1.rows() != dec1.n || directions.basis_dir2.rows() != dec2.n)
        throw InvalidInput("continuity_probe: basis direction size mismatch");

    const CMat baseline = gdoi(beta, dec1, dec2, y);
    const double collision_tol =
        1e-9 * std::max({1.0, dec1.spectral_radius(), dec2.spectral_radius()});
    const double cond_cap =
        std::max(1e6, 100.0 * std::max(dec1.cond_estimate, dec2.cond_estimate));

    ContinuityProbeResult out;
    out.scales = scales;
    for (double eps : scales) {
        auto perturb = [&](const JordanSource& src, const std::vector<Complex>& dirs,
                           const std::vector<int>& block_map, const CMat& basis_dir) {
            JordanStructureSpec spec = src.spec;
            for (size_t b = 0; b < spec.blocks.size(); ++b)
                spec.blocks[b].eigenvalue += eps * dirs[block_map[b]];
            return synthesize(spec, src.basis + eps * basis_dir, cond_cap);
        };
        try {
            auto s1 = perturb(*dec1.source, directions.eigen_dir1, map1, directions.basis_dir1);
            auto s2 = perturb(*dec2.source, directions.eigen_dir2, map2, directions.basis_dir2);
            if (spectra_collide(s1.decomposition.eigenvalues(), collision_tol) ||
                spectra_collide(s2.decomposition.eigenvalues(), collision_tol)) {
                out.deviations.push_back(std::numeric_limits<double>::quiet_NaN());
                out.accepted.push_back(false);
                continue;
            }
            const CMat perturbed = gdoi(beta, s1.decomposition, s2.decomposition, y);
            out.deviations.push_back((perturbed - baseline).norm());
            out.accepted.push_back(true);
        } catch (const Error&) {
            out.deviations.push_back(std::numeric_limits<double>::quiet_NaN());
            out.accepted.push_back(false);
        }
    }
    return out;
}

ContinuityProbeResult continuity_probe(const AnalyticFn2& beta,
                                       const SpectralDecomposition& dec1,
                                       const SpectralDecomposition& dec2, const CMat& y,
                                       const std::vector<double>& scales, uint64_t seed) {
    if (!dec1.source || !dec2.source)
        throw InvalidInput(
            "continuity_probe: decompositions must carry their synthesis source");
    Rng rng(seed);

    auto unit_eigen_dirs = [&](size_t count) {
        std::vector<Complex> d(count);
        double norm2 = 0.0;
        for (auto& z : d) {
            z = rng.complex_normal();
            norm2 += std::norm(z);
        }
        const double scale = norm2 > 0 ? 1.0 / std::sqrt(norm2) : 0.0;
        for (auto& z : d) z *= scale;
        return d;
    };
    auto unit_matrix = [&](int n) {
        CMat e(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) e(i, j) = rng.complex_normal();
        return CMat(e / e.norm());
    };

    ContinuityDirections dirs;
    dirs.eigen_dir1 = unit_eigen_dirs(distinct_eigenvalues(dec1.source->spec).first.size());
    dirs.eigen_dir2 = unit_eigen_dirs(distinct_eigenvalues(dec2.source->spec).first.size());
    dirs.basis_dir1 = unit_matrix(dec1.n);
    dirs.basis_dir2 = unit_matrix(dec2.n);
    return continuity_probe(beta, dec1, dec2, y, scales, dirs);
}

}  // namespace doi
