#include "doctest.h"

#include "doi/operator_integrals.hpp"
#include "doi/random_ensemble.hpp"

using namespace doi;

namespace {

// Direct polynomial evaluation on the raw matrix; independent of the
// spectral-data path.
CMat horner(const std::vector<Complex>& coeffs, const CMat& x) {
    const int n = static_cast<int>(x.rows());
    CMat acc = CMat::Zero(n, n);
    for (int k = static_cast<int>(coeffs.size()) - 1; k >= 0; --k)
        acc = acc * x + coeffs[k] * CMat::Identity(n, n);
    return acc;
}

SynthesisResult jordan2(Complex lambda) {
    return synthesize(JordanStructureSpec{{{lambda, 2}}}, CMat::Identity(2, 2));
}

SynthesisResult scaled_identity(Complex lambda, int n) {
    JordanStructureSpec spec;
    for (int i = 0; i < n; ++i) spec.blocks.push_back({lambda, 1});
    return synthesize(spec, CMat::Identity(n, n));
}

const AnalyticFn2 kBilinear = fn2_product(project_first(), project_second());

}  // namespace

TEST_CASE("eval_matrix_fn1 on a Jordan block") {
    const auto s = jordan2(3.0);
    const CMat got = eval_matrix_fn1(monomial(2), s.decomposition);
    CHECK((got - s.matrix * s.matrix).norm() == 0.0);  // direct squaring oracle
    CHECK(got(0, 0) == Complex(9.0));
    CHECK(got(0, 1) == Complex(6.0));

    CHECK((eval_matrix_fn1(constant_fn(1.0), s.decomposition) - CMat::Identity(2, 2)).norm() ==
          0.0);
    CHECK((eval_matrix_fn1(identity_fn(), s.decomposition) - s.decomposition.reconstruct())
              .norm() == 0.0);
}

TEST_CASE("eval_matrix_fn1 matches Horner on random Jordan data") {
    Rng rng(23);
    InstanceConstraints c;
    c.n_max = 6;
    for (int i = 0; i < 10; ++i) {
        Rng r = rng.fork(i);
        const auto inst = random_instance(r, c);
        std::vector<Complex> coeffs(5);
        for (auto& z : coeffs) z = r.complex_normal();
        const CMat via_spectral = eval_matrix_fn1(polynomial(coeffs), inst.decomposition);
        const CMat via_horner = horner(coeffs, inst.matrix);
        CHECK((via_spectral - via_horner).norm() <=
              1e-9 * std::max(1.0, via_horner.norm()));
    }
}

TEST_CASE("eval_matrix_fn1 enforces the radius over the spectrum") {
    const auto s = scaled_identity(2.0, 2);
    CHECK_THROWS_AS(eval_matrix_fn1(polynomial({1.0, 1.0}, 1.5), s.decomposition),
                    RadiusExceeded);
}

TEST_CASE("eval_matrix_fn2 collapses to the one-variable calculus") {
    Rng rng(31);
    InstanceConstraints c;
    c.n_max = 5;
    const auto [a, b] = random_separated_pair(rng, c);
    std::vector<Complex> coeffs(4);
    for (auto& z : coeffs) z = rng.complex_normal();
    const auto g = polynomial(coeffs);
    const CMat two = eval_matrix_fn2(lift_first(g), a.decomposition, b.decomposition);
    const CMat one = eval_matrix_fn1(g, a.decomposition);
    CHECK((two - one).norm() <= 1e-12 * std::max(1.0, one.norm()));
}

TEST_CASE("eval_matrix_fn2 product on diagonal data") {
    const auto a = synthesize(JordanStructureSpec{{{1.0, 1}, {2.0, 1}}}, CMat::Identity(2, 2));
    const auto b = synthesize(JordanStructureSpec{{{-1.0, 1}, {3.0, 1}}}, CMat::Identity(2, 2));
    const CMat got = eval_matrix_fn2(kBilinear, a.decomposition, b.decomposition);
    CHECK((got - a.matrix * b.matrix).norm() == 0.0);
}

TEST_CASE("eval_matrix_fn2 with a nilpotent first argument") {
    const auto a = jordan2(0.0);
    const auto b = scaled_identity(2.0, 2);
    // Only the first-order z1 partial survives since lambda1 = 0:
    // f(X1, X2) = 2 N1.
    const CMat got = eval_matrix_fn2(kBilinear, a.decomposition, b.decomposition);
    CHECK((got - 2.0 * a.decomposition.components[0].nilpotent).norm() == 0.0);
}

TEST_CASE("gdoi trivial symbols") {
    Rng rng(7);
    InstanceConstraints c;
    c.n_max = 5;
    const auto [a, b] = random_separated_pair(rng, c);
    const CMat y = random_dense(rng, a.decomposition.n);

    const CMat via_const = gdoi(fn2_constant(1.0), a.decomposition, b.decomposition, y);
    CHECK((via_const - y).norm() <= 1e-12 * y.norm());

    const auto s1 = scaled_identity(1.0, 3);
    const auto s2 = scaled_identity(2.0, 3);
    const CMat y3 = random_dense(rng, 3);
    const auto sum = fn2_sum(project_first(), project_second());
    CHECK((gdoi(sum, s1.decomposition, s2.decomposition, y3) - 3.0 * y3).norm() <=
          1e-14 * y3.norm());
}

TEST_CASE("gdoi hand-expanded Jordan example") {
    const auto a = jordan2(0.0);
    const auto b = scaled_identity(2.0, 2);
    const CMat got = gdoi(kBilinear, a.decomposition, b.decomposition, CMat::Identity(2, 2));
    CMat expected(2, 2);
    expected << 0, 2, 0, 0;
    CHECK((got - expected).norm() == 0.0);
}

TEST_CASE("doi_hermitian equals gdoi on diagonalizable data and rejects nilpotents") {
    const auto a = synthesize(JordanStructureSpec{{{1.0, 1}, {2.0, 1}}}, CMat::Identity(2, 2));
    const auto b = synthesize(JordanStructureSpec{{{-1.0, 1}, {3.0, 1}}}, CMat::Identity(2, 2));
    const CMat got =
        doi_hermitian(kBilinear, a.decomposition, b.decomposition, CMat::Identity(2, 2));
    CHECK((got - a.matrix * b.matrix).norm() == 0.0);

    Rng rng(13);
    InstanceConstraints c;
    c.allow_nilpotent = false;
    const auto [h1, h2] = random_separated_pair(rng, c);
    const CMat y = random_dense(rng, h1.decomposition.n);
    const CMat lhs = gdoi(kBilinear, h1.decomposition, h2.decomposition, y);
    const CMat rhs = doi_hermitian(kBilinear, h1.decomposition, h2.decomposition, y);
    CHECK((lhs - rhs).norm() == 0.0);  // same projector-only loop

    const CMat y1 = random_dense(rng, h1.decomposition.n);
    CHECK((doi_hermitian(fn2_constant(1.0), h1.decomposition, h2.decomposition, y1) - y1)
              .norm() <= 1e-12 * y1.norm());

    const auto nil = jordan2(0.0);
    CHECK_THROWS_AS(doi_hermitian(kBilinear, nil.decomposition, nil.decomposition,
                                  CMat::Identity(2, 2)),
                    NonDiagonalizableInput);
}

TEST_CASE("positional varieties") {
    Rng rng(19);
    InstanceConstraints c;
    c.n_max = 4;
    const auto [a, b] = random_separated_pair(rng, c);
    const CMat y = random_dense(rng, a.decomposition.n);
    CHECK((doi_variant_pre(fn2_constant(1.0), a.decomposition, b.decomposition, y) - y).norm() <=
          1e-12 * y.norm());
    CHECK((doi_variant_post(fn2_constant(1.0), a.decomposition, b.decomposition, y) - y)
              .norm() <= 1e-12 * y.norm());

    // Projector-only inputs, beta = z1 + z2: the pre variety equals the
    // termwise sum beta(l1, l2) Y P1 P2.
    InstanceConstraints diag = c;
    diag.allow_nilpotent = false;
    Rng r2(29);
    const auto [d1, d2] = random_separated_pair(r2, diag);
    const CMat y2 = random_dense(r2, d1.decomposition.n);
    const auto sum = fn2_sum(project_first(), project_second());
    CMat direct = CMat::Zero(d1.decomposition.n, d1.decomposition.n);
    for (const auto& c1 : d1.decomposition.components)
        for (const auto& c2 : d2.decomposition.components)
            direct += sum.value(c1.eigenvalue, c2.eigenvalue) * y2 * c1.projector * c2.projector;
    const CMat pre = doi_variant_pre(sum, d1.decomposition, d2.decomposition, y2);
    CHECK((pre - direct).norm() <= 1e-11 * std::max(1.0, direct.norm()));
    CHECK((pre - y2 * (d1.matrix + d2.matrix)).norm() <= 1e-11 * std::max(1.0, pre.norm()));

    // X1 = J2(0), X2 = I, beta = z1 z2: the post variety is N1 Y.
    const auto j = jordan2(0.0);
    const auto eye = scaled_identity(1.0, 2);
    const CMat y3 = random_dense(r2, 2);
    const CMat post = doi_variant_post(kBilinear, j.decomposition, eye.decomposition, y3);
    CHECK((post - j.decomposition.components[0].nilpotent * y3).norm() == 0.0);
}

TEST_CASE("gtoi trivial and diagonal cases") {
    Rng rng(37);
    InstanceConstraints c;
    c.n_max = 4;
    const auto family = random_separated_family(rng, {c, c, c});
    const int n = family[0].decomposition.n;
    const CMat y1 = random_dense(rng, n);
    const CMat y2 = random_dense(rng, n);
    const CMat via_const = gtoi(fn3_constant(1.0), family[0].decomposition,
                                family[1].decomposition, family[2].decomposition, y1, y2);
    CHECK((via_const - y1 * y2).norm() <= 1e-12 * std::max(1.0, (y1 * y2).norm()));

    InstanceConstraints diag = c;
    diag.allow_nilpotent = false;
    Rng r2(41);
    const auto dfam = random_separated_family(r2, {diag, diag, diag});
    const int m = dfam[0].decomposition.n;
    const CMat w1 = random_dense(r2, m);
    const CMat w2 = random_dense(r2, m);
    const CMat first = gtoi(fn3_monomial(1, 0, 0), dfam[0].decomposition,
                            dfam[1].decomposition, dfam[2].decomposition, w1, w2);
    CHECK((first - dfam[0].matrix * w1 * w2).norm() <=
          1e-11 * std::max(1.0, first.norm()));

    const CMat triple = gtoi(fn3_monomial(1, 1, 1), dfam[0].decomposition,
                             dfam[1].decomposition, dfam[2].decomposition, w1, w2);
    const CMat oracle = dfam[0].matrix * w1 * dfam[1].matrix * w2 * dfam[2].matrix;
    CHECK((triple - oracle).norm() <= 1e-10 * std::max(1.0, oracle.norm()));
}

TEST_CASE("compose identities") {
    Rng rng(43);
    InstanceConstraints c;
    c.n_max = 5;
    const auto [a, b] = random_separated_pair(rng, c);
    const CMat y = random_dense(rng, a.decomposition.n);
    const auto beta = kBilinear;
    CHECK((compose(fn2_constant(1.0), beta, a.decomposition, b.decomposition, y) -
           gdoi(beta, a.decomposition, b.decomposition, y))
              .norm() <= 1e-11 * std::max(1.0, y.norm()));
    CHECK((compose(beta, fn2_constant(1.0), a.decomposition, b.decomposition, y) -
           gdoi(beta, a.decomposition, b.decomposition, y))
              .norm() <= 1e-11 * std::max(1.0, y.norm()));

    InstanceConstraints diag = c;
    diag.allow_nilpotent = false;
    Rng r2(47);
    const auto [d1, d2] = random_separated_pair(r2, diag);
    const CMat w = random_dense(r2, d1.decomposition.n);
    const CMat got =
        compose(project_first(), project_second(), d1.decomposition, d2.decomposition, w);
    const CMat oracle = d1.matrix * w * d2.matrix;
    CHECK((got - oracle).norm() <= 1e-11 * std::max(1.0, oracle.norm()));
}

TEST_CASE("gdoi_split parts and definitional sum") {
    Rng rng(53);
    InstanceConstraints diag;
    diag.allow_nilpotent = false;
    const auto [d1, d2] = random_separated_pair(rng, diag);
    const CMat y = random_dense(rng, d1.decomposition.n);
    const auto parts = gdoi_split(kBilinear, d1.decomposition, d2.decomposition, y);
    CHECK(parts.pn.norm() == 0.0);
    CHECK(parts.np.norm() == 0.0);
    CHECK(parts.nn.norm() == 0.0);

    const auto a = jordan2(0.0);
    const auto b = scaled_identity(2.0, 2);
    const auto jp = gdoi_split(kBilinear, a.decomposition, b.decomposition,
                               CMat::Identity(2, 2));
    CHECK((jp.np - 2.0 * a.decomposition.components[0].nilpotent).norm() == 0.0);
    CHECK(jp.pp.norm() == 0.0);
    CHECK(jp.pn.norm() == 0.0);
    CHECK(jp.nn.norm() == 0.0);

    InstanceConstraints c;
    const auto [x1, x2] = random_separated_pair(rng, c);
    const CMat w = random_dense(rng, x1.decomposition.n);
    const auto sp = gdoi_split(kBilinear, x1.decomposition, x2.decomposition, w);
    const CMat total = gdoi(kBilinear, x1.decomposition, x2.decomposition, w);
    CHECK((sp.sum() - total).norm() == 0.0);  // same loops, same order
}

TEST_CASE("parameter split: projector/nilpotent interpretations") {
    Rng rng(59);
    InstanceConstraints c;
    const auto [a, b] = random_separated_pair(rng, c);
    const auto& d1 = a.decomposition;
    const auto& d2 = b.decomposition;
    const CMat y = random_dense(rng, d1.n);

    auto nilpotent_view = [](const SpectralDecomposition& dec) {
        SpectralDecomposition out = dec;
        for (auto& comp : out.components) comp.projector = CMat::Zero(dec.n, dec.n);
        return out;
    };
    const auto p1 = d1.projector_part(), p2 = d2.projector_part();
    const auto n1 = nilpotent_view(d1), n2 = nilpotent_view(d2);

    std::vector<std::vector<Complex>> coeffs(3, std::vector<Complex>(3));
    Rng r2(61);
    for (auto& row : coeffs)
        for (auto& z : row) z = r2.complex_normal();
    const auto beta = polynomial2(coeffs);

    const auto parts = gdoi_split(beta, d1, d2, y);
    const double scale = std::max(1.0, parts.sum().norm());
    CHECK((gdoi(beta, p1, p2, y) - parts.pp).norm() <= 1e-12 * scale);
    CHECK((gdoi(beta, p1, n2, y) - parts.pn).norm() <= 1e-12 * scale);
    CHECK((gdoi(beta, n1, p2, y) - parts.np).norm() <= 1e-12 * scale);
    CHECK((gdoi(beta, n1, n2, y) - parts.nn).norm() <= 1e-12 * scale);
    const CMat four_way = gdoi(beta, p1, p2, y) + gdoi(beta, p1, n2, y) +
                          gdoi(beta, n1, p2, y) + gdoi(beta, n1, n2, y);
    CHECK((four_way - gdoi(beta, d1, d2, y)).norm() <= 1e-12 * scale);
}

TEST_CASE("gdoi additivity and multiplicativity") {
    Rng base(67);
    InstanceConstraints c;
    for (int i = 0; i < 20; ++i) {
        Rng rng = base.fork(i);
        const auto [a, b] = random_separated_pair(rng, c);
        const auto& d1 = a.decomposition;
        const auto& d2 = b.decomposition;
        const CMat y = random_dense(rng, d1.n);

        std::vector<std::vector<Complex>> ca(4, std::vector<Complex>(4)),
            cb(4, std::vector<Complex>(4));
        for (auto& row : ca)
            for (auto& z : row) z = rng.complex_normal();
        for (auto& row : cb)
            for (auto& z : row) z = rng.complex_normal();
        const auto beta = polynomial2(ca);
        const auto gamma = polynomial2(cb);
        const Complex c1 = rng.complex_normal(), c2 = rng.complex_normal();

        const CMat lin_lhs = gdoi(fn2_sum(fn2_scale(c1, beta), fn2_scale(c2, gamma)), d1, d2, y);
        const CMat lin_rhs = c1 * gdoi(beta, d1, d2, y) + c2 * gdoi(gamma, d1, d2, y);
        CHECK((lin_lhs - lin_rhs).norm() <=
              1e-10 * std::max({1.0, lin_lhs.norm(), lin_rhs.norm()}));

        const CMat mul_lhs = gdoi(fn2_product(beta, gamma), d1, d2, y);
        const CMat mul_rhs = compose(beta, gamma, d1, d2, y);
        CHECK((mul_lhs - mul_rhs).norm() <=
              1e-9 * std::max({1.0, mul_lhs.norm(), mul_rhs.norm()}));
    }
}

TEST_CASE("sampled injectivity probe") {
    Rng base(71);
    InstanceConstraints c;
    c.n_max = 6;
    for (int i = 0; i < 50; ++i) {
        Rng rng = base.fork(i);
        const auto [a, b] = random_separated_pair(rng, c);
        const auto& d1 = a.decomposition;
        const auto& d2 = b.decomposition;
        const int deg = std::max(d1.max_index(), d2.max_index());

        std::vector<std::vector<Complex>> ca(deg + 1, std::vector<Complex>(deg + 1)),
            cb(deg + 1, std::vector<Complex>(deg + 1));
        for (auto& row : ca)
            for (auto& z : row) z = rng.complex_normal();
        for (auto& row : cb)
            for (auto& z : row) z = rng.complex_normal();
        const auto beta = polynomial2(ca);
        const auto gamma = polynomial2(cb);

        // The symbols must differ somewhere on the constrained jet for the
        // instance to distinguish them.
        double jet_gap = 0.0;
        for (const auto& c1 : d1.components)
            for (const auto& c2 : d2.components)
                for (int q1 = 0; q1 < c1.index; ++q1)
                    for (int q2 = 0; q2 < c2.index; ++q2)
                        jet_gap = std::max(
                            jet_gap,
                            std::abs(beta.partial(q1, q2, c1.eigenvalue, c2.eigenvalue) -
                                     gamma.partial(q1, q2, c1.eigenvalue, c2.eigenvalue)));
        REQUIRE(jet_gap > 1e-6);

        const CMat eye = CMat::Identity(d1.n, d1.n);
        const CMat diff = gdoi(beta, d1, d2, eye) - gdoi(gamma, d1, d2, eye);
        CHECK(diff.norm() > 1e-8);
    }
}

namespace {

// Separable three-variable symbol g(z1) h(z2) k(z3); partials factor per slot.
class SeparableFn3 final : public Fn3Impl {
   public:
    SeparableFn3(AnalyticFn1 g, AnalyticFn1 h, AnalyticFn1 k)
        : g_(std::move(g)), h_(std::move(h)), k_(std::move(k)) {}
    Complex partial(int q1, int q2, int q3, Complex z1, Complex z2,
                    Complex z3) const override {
        return g_.derivative(q1, z1) * h_.derivative(q2, z2) * k_.derivative(q3, z3);
    }

   private:
    AnalyticFn1 g_, h_, k_;
};

std::vector<Complex> random_coeffs1(Rng& rng, int deg) {
    std::vector<Complex> c(deg + 1);
    for (auto& z : c) z = rng.complex_normal();
    return c;
}

}  // namespace

TEST_CASE("separable symbols factor the double integral") {
    // beta = g(z1) h(z2) gives T_beta(Y) = g(X1) Y h(X2); the right side is
    // evaluated by Horner on the raw matrices, independent of spectral data.
    Rng base(211);
    InstanceConstraints c;
    for (int i = 0; i < 10; ++i) {
        Rng rng = base.fork(i);
        const auto [a, b] = random_separated_pair(rng, c);
        const auto cg = random_coeffs1(rng, 3);
        const auto ch = random_coeffs1(rng, 3);
        const CMat y = random_dense(rng, a.decomposition.n);
        const CMat got = gdoi(fn2_product(lift_first(polynomial(cg)),
                                          lift_second(polynomial(ch))),
                              a.decomposition, b.decomposition, y);
        const CMat oracle = horner(cg, a.matrix) * y * horner(ch, b.matrix);
        CHECK((got - oracle).norm() <= 1e-9 * std::max(1.0, oracle.norm()));
    }
}

TEST_CASE("separable symbols factor the triple integral") {
    // beta = g(z1) h(z2) k(z3) gives T_beta(Y1, Y2) = g(X1) Y1 h(X2) Y2 k(X3),
    // exercising all eight placement parts on Jordan data.
    Rng base(223);
    InstanceConstraints c;
    c.n_max = 6;
    for (int i = 0; i < 8; ++i) {
        Rng rng = base.fork(i);
        const auto family = random_separated_family(rng, {c, c, c});
        const auto cg = random_coeffs1(rng, 3);
        const auto ch = random_coeffs1(rng, 3);
        const auto ck = random_coeffs1(rng, 3);
        const int n = family[0].decomposition.n;
        const CMat y1 = random_dense(rng, n);
        const CMat y2 = random_dense(rng, n);
        const AnalyticFn3 beta(std::make_shared<SeparableFn3>(
            polynomial(cg), polynomial(ch), polynomial(ck)));
        const CMat got = gtoi(beta, family[0].decomposition, family[1].decomposition,
                              family[2].decomposition, y1, y2);
        const CMat oracle = horner(cg, family[0].matrix) * y1 * horner(ch, family[1].matrix) *
                            y2 * horner(ck, family[2].matrix);
        CHECK((got - oracle).norm() <= 1e-8 * std::max(1.0, oracle.norm()));
    }
}

TEST_CASE("aggregating geometric components does not change the integral") {
    // Two blocks sharing one eigenvalue: summing the per-block projectors and
    // nilpotents per distinct eigenvalue gives the same integral as keeping
    // one component per block, because the symbol values are block-independent
    // and the extended q sums only add vanishing powers.
    Rng rng(227);
    const CMat u = random_basis(rng, 5, 10.0);
    const JordanStructureSpec spec{{{1.5, 2}, {1.5, 1}, {Complex(-0.5, 1.0), 2}}};
    const auto aggregated = synthesize(spec, u);

    // Per-block spectral data built by synthesizing each block selector alone.
    SpectralDecomposition per_block;
    per_block.n = 5;
    int offset = 0;
    for (const auto& block : spec.blocks) {
        CMat selector = CMat::Zero(5, 5);
        CMat shift = CMat::Zero(5, 5);
        for (int i = 0; i < block.size; ++i) {
            selector(offset + i, offset + i) = 1.0;
            if (i + 1 < block.size) shift(offset + i, offset + i + 1) = 1.0;
        }
        const CMat uinv = u.inverse();
        per_block.components.push_back(
            {block.eigenvalue, u * selector * uinv, u * shift * uinv, block.size});
        offset += block.size;
    }

    std::vector<std::vector<Complex>> coeffs(3, std::vector<Complex>(3));
    for (auto& row : coeffs)
        for (auto& z : row) z = rng.complex_normal();
    const auto beta = polynomial2(coeffs);
    const CMat y = random_dense(rng, 5);

    const CMat lhs = gdoi(beta, aggregated.decomposition, aggregated.decomposition, y);
    const CMat rhs = gdoi(beta, per_block, per_block, y);
    CHECK((lhs - rhs).norm() <= 1e-10 * std::max(1.0, lhs.norm()));
}
