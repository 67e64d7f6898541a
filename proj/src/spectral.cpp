#include "doi/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

namespace doi {

int JordanStructureSpec::total_size() const {
    int n = 0;
    for (const auto& b : blocks) n += b.size;
    return n;
}

void JordanStructureSpec::check() const {
    if (blocks.empty()) throw InvalidInput("JordanStructureSpec: no blocks");
    for (const auto& b : blocks) {
        if (b.size <= 0) throw InvalidInput("JordanStructureSpec: block size must be positive");
        if (!std::isfinite(b.eigenvalue.real()) || !std::isfinite(b.eigenvalue.imag()))
            throw InvalidInput("JordanStructureSpec: non-finite eigenvalue");
    }
}

CMat SpectralDecomposition::reconstruct() const {
    CMat x = CMat::Zero(n, n);
    for (const auto& c : components) x += c.eigenvalue * c.projector + c.nilpotent;
    return x;
}

SpectralDecomposition SpectralDecomposition::projector_part() const {
    SpectralDecomposition out;
    out.n = n;
    out.cond_estimate = cond_estimate;
    out.components.reserve(components.size());
    for (const auto& c : components)
        out.components.push_back({c.eigenvalue, c.projector, CMat::Zero(n, n), 1});
    return out;
}

bool SpectralDecomposition::is_diagonalizable(double tol) const {
    double scale = std::max(1.0, reconstruct().norm());
    for (const auto& c : components)
        if (c.nilpotent.norm() > tol * scale) return false;
    return true;
}

std::vector<Complex> SpectralDecomposition::eigenvalues() const {
    std::vector<Complex> out;
    out.reserve(components.size());
    for (const auto& c : components) out.push_back(c.eigenvalue);
    return out;
}

double SpectralDecomposition::spectral_radius() const {
    double r = 0.0;
    for (const auto& c : components) r = std::max(r, std::abs(c.eigenvalue));
    return r;
}

int SpectralDecomposition::max_index() const {
    int m = 1;
    for (const auto& c : components) m = std::max(m, c.index);
    return m;
}

SynthesisResult synthesize(const JordanStructureSpec& spec, const CMat& basis,
                           double cond_cap) {
    spec.check();
    check_matrix(basis, "synthesize");
    const int n = spec.total_size();
    if (basis.rows() != n)
        throw DimensionMismatch("synthesize: basis is " + std::to_string(basis.rows()) +
                                "x" + std::to_string(basis.cols()) + " but spec total size is " +
                                std::to_string(n));

    double cond = condition_number(basis);
    if (!std::isfinite(cond) || cond > 1e14)
        throw SingularBasis("synthesize: basis is numerically singular (cond ~ " +
                            std::to_string(cond) + ")");
    if (cond > cond_cap)
        throw ConditioningExceeded("synthesize: cond(basis) = " + std::to_string(cond) +
                                   " exceeds cap " + std::to_string(cond_cap));

    // Distinct eigenvalues keep first-appearance order; equal values merge.
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

    CMat jordan = CMat::Zero(n, n);
    std::vector<CMat> selector(distinct.size(), CMat::Zero(n, n));   // E_k
    std::vector<CMat> shift(distinct.size(), CMat::Zero(n, n));      // S_k
    std::vector<int> index(distinct.size(), 1);

    int offset = 0;
    for (size_t b = 0; b < spec.blocks.size(); ++b) {
        const int sz = spec.blocks[b].size;
        const int k = block_component[b];
        for (int i = 0; i < sz; ++i) {
            jordan(offset + i, offset + i) = spec.blocks[b].eigenvalue;
            selector[k](offset + i, offset + i) = 1.0;
            if (i + 1 < sz) {
                jordan(offset + i, offset + i + 1) = 1.0;
                shift[k](offset + i, offset + i + 1) = 1.0;
            }
        }
        index[k] = std::max(index[k], sz);
        offset += sz;
    }

    Eigen::PartialPivLU<CMat> lu(basis);
    CMat basis_inv = lu.inverse();

    SynthesisResult out;
    out.matrix = basis * jordan * basis_inv;
    out.decomposition.n = n;
    out.decomposition.cond_estimate = cond;
    for (size_t k = 0; k < distinct.size(); ++k)
        out.decomposition.components.push_back(
            {distinct[k], basis * selector[k] * basis_inv, basis * shift[k] * basis_inv,
             index[k]});
    out.decomposition.source = JordanSource{spec, basis};
    return out;
}

ValidationReport validate(const SpectralDecomposition& dec, double tol) {
    ValidationReport rep;
    const int n = dec.n;
    const double sqn = std::sqrt(static_cast<double>(std::max(1, n)));
    const CMat x = dec.reconstruct();
    const double xscale = std::max(1.0, x.norm());

    auto add = [&](const std::string& name, double residual) {
        bool pass = residual <= tol;
        rep.checks.push_back({name, residual, pass});
        rep.max_residual = std::max(rep.max_residual, residual);
        rep.all_pass = rep.all_pass && pass;
    };

    const size_t nk = dec.components.size();
    for (size_t k = 0; k < nk; ++k) {
        const auto& c = dec.components[k];
        const std::string tag = "[" + std::to_string(k) + "]";
        double pscale = std::max(1.0, c.projector.norm());
        add("idempotency" + tag, (c.projector * c.projector - c.projector).norm() / pscale);
        double nscale = std::max(1.0, c.nilpotent.norm());
        add("commutation_PN" + tag,
            (c.projector * c.nilpotent - c.nilpotent).norm() / nscale);
        add("commutation_NP" + tag,
            (c.nilpotent * c.projector - c.nilpotent).norm() / nscale);

        CMat npow = CMat::Identity(n, n);
        for (int q = 0; q < c.index; ++q) npow = npow * c.nilpotent;
        add("nilpotency" + tag, npow.norm() / xscale);
        if (c.index > 1) {
            CMat prev = CMat::Identity(n, n);
            for (int q = 0; q + 1 < c.index; ++q) prev = prev * c.nilpotent;
            // Index minimality: N^{m-1} must be genuinely nonzero.
            add("index_minimality" + tag, prev.norm() > 1e-6 * tol * xscale ? 0.0 : 1.0);
        }
    }

    CMat psum = CMat::Zero(n, n);
    for (const auto& c : dec.components) psum += c.projector;
    add("completeness", (psum - CMat::Identity(n, n)).norm() / sqn);

    for (size_t k = 0; k < nk; ++k) {
        for (size_t l = 0; l < nk; ++l) {
            if (k == l) continue;
            const auto& ck = dec.components[k];
            const auto& cl = dec.components[l];
            const std::string tag = "[" + std::to_string(k) + "," + std::to_string(l) + "]";
            add("orthogonality" + tag, (ck.projector * cl.projector).norm() / sqn);
            add("cross_PN" + tag, (ck.projector * cl.nilpotent).norm() / xscale);
            add("cross_NP" + tag, (cl.nilpotent * ck.projector).norm() / xscale);
        }
    }

    return rep;
}

std::vector<std::vector<CMat>> nilpotent_powers(const SpectralDecomposition& dec) {
    const double threshold = 1e-12 * dec.reconstruct().norm();
    std::vector<std::vector<CMat>> out(dec.components.size());
    for (size_t k = 0; k < dec.components.size(); ++k) {
        const auto& c = dec.components[k];
        if (c.index <= 1 || c.nilpotent.norm() <= threshold) continue;
        out[k].reserve(c.index - 1);
        CMat pw = c.nilpotent;
        for (int q = 1; q <= c.index - 1; ++q) {
            out[k].push_back(pw);
            if (q < c.index - 1) pw = pw * c.nilpotent;
        }
    }
    return out;
}

std::pair<CMat, CMat> split_pn(const SpectralDecomposition& dec) {
    CMat xp = CMat::Zero(dec.n, dec.n);
    CMat xn = CMat::Zero(dec.n, dec.n);
    for (const auto& c : dec.components) {
        xp += c.eigenvalue * c.projector;
        xn += c.nilpotent;
    }
    return {xp, xn};
}

namespace {

// Single-linkage clustering of eigenvalues with threshold group_tol.
std::vector<std::vector<int>> cluster_eigenvalues(const CVec& lam, double group_tol) {
    const int n = static_cast<int>(lam.size());
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(lam(i) - lam(j)) <= group_tol) parent[find(i)] = find(j);

    std::map<int, std::vector<int>> groups;
    for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);
    std::vector<std::vector<int>> out;
    for (auto& [root, members] : groups) out.push_back(std::move(members));
    // Deterministic order: by first member index.
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

}  // namespace

SpectralDecomposition decompose(const CMat& x, double group_tol) {
    check_matrix(x, "decompose");
    if (group_tol < 0) throw InvalidInput("decompose: group_tol must be nonnegative");
    const int n = static_cast<int>(x.rows());

    Eigen::ComplexEigenSolver<CMat> solver(x, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw NonConvergence("decompose: eigenvalue iteration did not converge");
    const CVec lam = solver.eigenvalues();

    auto clusters = cluster_eigenvalues(lam, group_tol);

    // Cluster representatives; the mean cancels the leading-order scatter of
    // a defective eigenvalue's computed group.
    std::vector<Complex> rep(clusters.size());
    for (size_t k = 0; k < clusters.size(); ++k) {
        Complex s = 0.0;
        for (int i : clusters[k]) s += lam(i);
        rep[k] = s / static_cast<double>(clusters[k].size());
    }

    for (size_t k = 0; k < clusters.size(); ++k)
        for (size_t l = k + 1; l < clusters.size(); ++l)
            if (std::abs(rep[k] - rep[l]) <= 10.0 * group_tol)
                throw ClusterAmbiguity(
                    "decompose: eigenvalue clusters separated by less than 10*group_tol");

    const double xnorm = std::max(1.0, x.norm());

    // P_k = p_k(X) with p_k the Hermite indicator polynomial: value 1 on
    // cluster k, value 0 on the others, derivatives 0 up to multiplicity-1
    // everywhere. Newton form over the confluent node multiset.
    std::vector<Complex> nodes;
    std::vector<int> node_cluster;
    for (size_t k = 0; k < clusters.size(); ++k)
        for (size_t r = 0; r < clusters[k].size(); ++r) {
            nodes.push_back(rep[k]);
            node_cluster.push_back(static_cast<int>(k));
        }
    const int m = static_cast<int>(nodes.size());

    SpectralDecomposition dec;
    dec.n = n;
    std::vector<CMat> projectors(clusters.size());

    for (size_t k = 0; k < clusters.size(); ++k) {
        // Confluent divided differences of the indicator data: within one
        // cluster every derivative order >= 1 vanishes, so confluent cells
        // are zero and the value cell is the indicator itself.
        std::vector<Complex> dd(m);
        for (int i = 0; i < m; ++i) dd[i] = node_cluster[i] == static_cast<int>(k) ? 1.0 : 0.0;
        std::vector<Complex> coeff(m);
        coeff[0] = dd[0];
        for (int j = 1; j < m; ++j) {
            for (int i = 0; i + j < m; ++i) {
                const Complex denom = nodes[i + j] - nodes[i];
                dd[i] = denom == 0.0 ? Complex(0.0) : (dd[i + 1] - dd[i]) / denom;
            }
            coeff[j] = dd[0];
        }
        // Newton-Horner evaluation at X.
        CMat p = coeff[m - 1] * CMat::Identity(n, n);
        for (int j = m - 2; j >= 0; --j)
            p = p * (x - nodes[j] * CMat::Identity(n, n)) + coeff[j] * CMat::Identity(n, n);
        projectors[k] = p;
    }

    CMat xp = CMat::Zero(n, n);
    for (size_t k = 0; k < clusters.size(); ++k) xp += rep[k] * projectors[k];

    for (size_t k = 0; k < clusters.size(); ++k) {
        CMat nil = (x - xp) * projectors[k];
        const int alg_mult = static_cast<int>(clusters[k].size());
        int index = alg_mult;
        CMat pw = CMat::Identity(n, n);
        for (int q = 1; q <= alg_mult; ++q) {
            pw = pw * nil;
            if (pw.norm() <= group_tol * xnorm) {
                index = q;
                break;
            }
        }
        if (index == 1) nil = CMat::Zero(n, n);
        dec.components.push_back({rep[k], projectors[k], nil, index});
    }
    return dec;
}

}  // namespace doi
