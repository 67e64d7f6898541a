#include "doctest.h"

#include "doi/functions.hpp"
#include "doi/rng.hpp"

using namespace doi;

namespace {

// Exact bivariate polynomial product on coefficient tables; the independent
// oracle for the Leibniz combinator.
std::vector<std::vector<Complex>> poly2_product(const std::vector<std::vector<Complex>>& a,
                                                const std::vector<std::vector<Complex>>& b) {
    const size_t ra = a.size(), rb = b.size();
    size_t ca = 0, cb = 0;
    for (const auto& row : a) ca = std::max(ca, row.size());
    for (const auto& row : b) cb = std::max(cb, row.size());
    std::vector<std::vector<Complex>> out(ra + rb - 1,
                                          std::vector<Complex>(ca + cb - 1, 0.0));
    for (size_t i = 0; i < ra; ++i)
        for (size_t j = 0; j < a[i].size(); ++j)
            for (size_t k = 0; k < rb; ++k)
                for (size_t l = 0; l < b[k].size(); ++l) out[i + k][j + l] += a[i][j] * b[k][l];
    return out;
}

std::vector<std::vector<Complex>> random_coeffs(Rng& rng, int deg) {
    std::vector<std::vector<Complex>> out(deg + 1, std::vector<Complex>(deg + 1));
    for (auto& row : out)
        for (auto& c : row) c = rng.complex_normal();
    return out;
}

}  // namespace

TEST_CASE("polynomial derivatives are exact") {
    const auto f = monomial(3);
    CHECK(f.value(2.0) == Complex(8.0));
    CHECK(f.derivative(1, 2.0) == Complex(12.0));
    CHECK(f.derivative(2, 2.0) == Complex(12.0));
    CHECK(f.derivative(3, 2.0) == Complex(6.0));
    CHECK(f.derivative(4, 2.0) == Complex(0.0));
}

TEST_CASE("exponential derivatives") {
    const auto f = exponential();
    const Complex z(0.3, -0.7);
    CHECK(std::abs(f.derivative(5, z) - std::exp(z)) <= 1e-15);
    CHECK(truncated_exponential(12).value(0.5).real() ==
          doctest::Approx(std::exp(0.5)).epsilon(1e-12));
}

TEST_CASE("convergence radius is enforced strictly") {
    const auto f = polynomial({1.0, 1.0}, 1.0);
    CHECK_NOTHROW(f.value(0.5));
    CHECK_THROWS_AS(f.value(1.0), RadiusExceeded);
    CHECK_THROWS_AS(f.value(Complex(0.8, 0.8)), RadiusExceeded);
}

TEST_CASE("first divided difference of z^2 is x + y") {
    const auto dd = divided_diff_1(monomial(2));
    CHECK(dd.value(2.0, 1.0) == Complex(3.0));
    CHECK(dd.partial(1, 0, 2.0, 1.0) == Complex(1.0));
    CHECK(dd.partial(0, 1, 5.0, -1.0) == Complex(1.0));
    CHECK(dd.partial(1, 1, 2.0, 1.0) == Complex(0.0));
}

TEST_CASE("confluent partials of the first divided difference of z^3") {
    const auto dd = divided_diff_1(monomial(3));
    CHECK(dd.value(2.0, 1.0) == Complex(7.0));
    // f[2,1,1] = (f[2,1] - f[1,1]) / (2 - 1) = 7 - 3 = 4.
    CHECK(dd.partial(0, 1, 2.0, 1.0) == Complex(4.0));
    // Against the exact expansion f^[1] = x^2 + xy + y^2.
    CHECK(dd.partial(1, 0, 2.0, 1.0) == Complex(2.0 * 2.0 + 1.0));
    CHECK(dd.partial(1, 1, 2.0, 1.0) == Complex(1.0));
}

TEST_CASE("first divided difference of the identity is one") {
    const auto dd = divided_diff_1(identity_fn());
    CHECK(dd.value(0.7, -0.2) == Complex(1.0));
    CHECK(dd.partial(1, 0, 0.7, -0.2) == Complex(0.0));
    CHECK(dd.partial(2, 3, 0.7, -0.2) == Complex(0.0));
}

TEST_CASE("second divided difference values") {
    CHECK(divided_diff_2(monomial(2)).value(0.5, 2.0, -1.0) == Complex(1.0));
    const auto dd2 = divided_diff_2(monomial(3));
    CHECK(dd2.value(1.0, 2.0, 3.0) == Complex(6.0));  // x0 + x1 + x2
    CHECK(divided_diff_2(identity_fn()).value(1.0, 2.0, 3.0) == Complex(0.0));
}

TEST_CASE("separation guard and confluent evaluation") {
    const auto strict = divided_diff_1(monomial(3));
    CHECK_THROWS_AS(strict.value(1.0, 1.0 + 1e-9), SeparationViolation);
    const auto confluent = divided_diff_1(monomial(3), {0.0, true});
    CHECK(confluent.value(2.0, 2.0) == Complex(12.0));  // f'(2)
    CHECK(confluent.value(1.0, 1.0 + 1e-9).real() == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("confluent divided difference table by hand") {
    const auto f = monomial(3);
    CHECK(confluent_divided_difference(f, {{2.0, 2}}) == Complex(12.0));  // f'(2)
    // f[1,1,2] = (f[1,2] - f[1,1]) / (2 - 1) = 7 - 3 = 4.
    CHECK(confluent_divided_difference(f, {{1.0, 2}, {2.0, 1}}) == Complex(4.0));
}

TEST_CASE("combinator partials") {
    const auto bilinear = fn2_product(project_first(), project_second());
    CHECK(bilinear.partial(1, 1, 0.3, 0.4) == Complex(1.0));

    const auto scaled = fn2_product(divided_diff_1(monomial(2)), fn2_constant(2.0));
    CHECK(scaled.value(2.0, 1.0) == Complex(6.0));  // 2 (x + y)

    // (x + y)(x - y) = x^2 - y^2, so the (2,0) partial is 2.
    const auto sum = fn2_sum(project_first(), project_second());
    const auto diff = fn2_sum(project_first(), fn2_scale(-1.0, project_second()));
    CHECK(fn2_product(sum, diff).partial(2, 0, 0.7, 0.3) == Complex(2.0));
    CHECK(fn2_product(sum, diff).partial(0, 2, 0.7, 0.3) == Complex(-2.0));
}

TEST_CASE("Leibniz combinator against exact polynomial products") {
    Rng rng(97);
    for (int trial = 0; trial < 20; ++trial) {
        Rng r = rng.fork(trial);
        const auto ca = random_coeffs(r, 4);
        const auto cb = random_coeffs(r, 4);
        const auto product = fn2_product(polynomial2(ca), polynomial2(cb));
        const auto exact = polynomial2(poly2_product(ca, cb));
        const Complex z1 = r.complex_normal(), z2 = r.complex_normal();
        for (int q1 = 0; q1 <= 3; ++q1)
            for (int q2 = 0; q2 <= 3; ++q2) {
                const Complex got = product.partial(q1, q2, z1, z2);
                const Complex want = exact.partial(q1, q2, z1, z2);
                CHECK(std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want)));
            }
    }
}

TEST_CASE("confluent partials agree with central finite differences") {
    const double h = 1e-5;
    for (const auto& f : {monomial(3), truncated_exponential(8)}) {
        const auto dd = divided_diff_1(f);
        const Complex x(1.1, 0.2), y(-0.4, -0.1);
        auto fd = [&](int q1, int q2) {
            if (q1 == 1 && q2 == 0)
                return (dd.value(x + h, y) - dd.value(x - h, y)) / (2 * h);
            if (q1 == 0 && q2 == 1)
                return (dd.value(x, y + h) - dd.value(x, y - h)) / (2 * h);
            // mixed (1,1)
            return (dd.value(x + h, y + h) - dd.value(x + h, y - h) - dd.value(x - h, y + h) +
                    dd.value(x - h, y - h)) /
                   (4 * h * h);
        };
        for (auto [q1, q2] : {std::pair{1, 0}, {0, 1}, {1, 1}}) {
            const Complex got = dd.partial(q1, q2, x, y);
            const Complex want = fd(q1, q2);
            CHECK(std::abs(got - want) <= 1e-6 * std::max(1.0, std::abs(got)));
        }
    }
}

TEST_CASE("function registry") {
    CHECK(make_function("identity").value(3.0) == Complex(3.0));
    CHECK(make_function("power:3").value(2.0) == Complex(8.0));
    CHECK(make_function("const:2.5").value(9.0) == Complex(2.5));
    CHECK(make_function("const:[1,2]").value(0.0) == Complex(1.0, 2.0));
    CHECK(make_function("poly:[1,0,2]").value(2.0) == Complex(9.0));
    CHECK(make_function("poly:[[0,1],1]").value(2.0) == Complex(2.0, 1.0));
    CHECK(make_function("exp").value(0.0) == Complex(1.0));
    CHECK_THROWS_AS(make_function("nope"), InvalidInput);
    CHECK_THROWS_AS(make_function("poly:[]"), InvalidInput);
    CHECK_THROWS_AS(make_function("power:-1"), InvalidInput);

    CHECK(make_function2("proj1").value(2.0, 5.0) == Complex(2.0));
    CHECK(make_function2("proj2").value(2.0, 5.0) == Complex(5.0));
    CHECK(make_function2("const:3").value(1.0, 1.0) == Complex(3.0));
    CHECK(make_function2("poly2:[[0,0],[0,1]]").value(2.0, 3.0) == Complex(6.0));  // z1 z2
    CHECK(make_function2("dd1:power:2").value(2.0, 1.0) == Complex(3.0));
    CHECK_THROWS_AS(make_function2("what"), InvalidInput);
}
