#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "doi/matrix.hpp"

namespace doi {

namespace detail {
double factorial(int k);
double binomial(int n, int k);
}  // namespace detail

// One-variable analytic function with exact derivative evaluators. Derivatives
// are supplied, never finite-differenced: operator-integral sums need partials
// at exact orders and approximation noise would contaminate every bound built
// on top of them.
class Fn1Impl {
   public:
    virtual ~Fn1Impl() = default;
    virtual Complex derivative(int order, Complex z) const = 0;  // order 0 = value
    virtual double radius() const;                               // default: infinite
};

class AnalyticFn1 {
   public:
    AnalyticFn1() = default;
    explicit AnalyticFn1(std::shared_ptr<const Fn1Impl> impl) : impl_(std::move(impl)) {}

    Complex value(Complex z) const { return derivative(0, z); }
    Complex derivative(int order, Complex z) const;  // radius-checked
    double radius() const;

   private:
    std::shared_ptr<const Fn1Impl> impl_;
};

// Coefficients in ascending powers; radius limits evaluation when finite.
AnalyticFn1 polynomial(std::vector<Complex> coeffs,
                       double radius = std::numeric_limits<double>::infinity());
AnalyticFn1 monomial(int power);
AnalyticFn1 identity_fn();
AnalyticFn1 constant_fn(Complex c);
AnalyticFn1 exponential();
AnalyticFn1 truncated_exponential(int degree);

// Two-variable analytic function exposing mixed partials of any order.
class Fn2Impl {
   public:
    virtual ~Fn2Impl() = default;
    virtual Complex partial(int q1, int q2, Complex z1, Complex z2) const = 0;
};

class AnalyticFn2 {
   public:
    AnalyticFn2() = default;
    explicit AnalyticFn2(std::shared_ptr<const Fn2Impl> impl) : impl_(std::move(impl)) {}

    Complex value(Complex z1, Complex z2) const { return partial(0, 0, z1, z2); }
    Complex partial(int q1, int q2, Complex z1, Complex z2) const;

   private:
    std::shared_ptr<const Fn2Impl> impl_;
};

AnalyticFn2 fn2_constant(Complex c);
AnalyticFn2 lift_first(AnalyticFn1 f);    // (z1, z2) -> f(z1)
AnalyticFn2 lift_second(AnalyticFn1 f);   // (z1, z2) -> f(z2)
AnalyticFn2 project_first();              // pi_1
AnalyticFn2 project_second();             // pi_2

// Bivariate polynomial, coeffs[i][j] multiplying z1^i z2^j.
AnalyticFn2 polynomial2(std::vector<std::vector<Complex>> coeffs);

// Combinators; the product differentiates by the double Leibniz sum.
AnalyticFn2 fn2_sum(AnalyticFn2 a, AnalyticFn2 b);
AnalyticFn2 fn2_scale(Complex c, AnalyticFn2 f);
AnalyticFn2 fn2_product(AnalyticFn2 a, AnalyticFn2 b);

struct DividedDiffOptions {
    // 0 means automatic: 1e-6 * max(1, |evaluation points|).
    double sep_tol = 0.0;
    bool allow_confluent = false;
};

// First divided difference f[x, y] = (f(x) - f(y)) / (x - y) as a two-variable
// function. Mixed partials are confluent divided differences:
//   partial(q1, q2)(x, y) = q1! q2! * f[x^(q1+1), y^(q2+1)]
// evaluated from a Newton table seeded with f^(j)(.)/j! on repeated nodes.
AnalyticFn2 divided_diff_1(AnalyticFn1 f, DividedDiffOptions opts = {});

// Three-variable analytic function.
class Fn3Impl {
   public:
    virtual ~Fn3Impl() = default;
    virtual Complex partial(int q1, int q2, int q3, Complex z1, Complex z2,
                            Complex z3) const = 0;
};

class AnalyticFn3 {
   public:
    AnalyticFn3() = default;
    explicit AnalyticFn3(std::shared_ptr<const Fn3Impl> impl) : impl_(std::move(impl)) {}

    Complex value(Complex z1, Complex z2, Complex z3) const {
        return partial(0, 0, 0, z1, z2, z3);
    }
    Complex partial(int q1, int q2, int q3, Complex z1, Complex z2, Complex z3) const;

   private:
    std::shared_ptr<const Fn3Impl> impl_;
};

AnalyticFn3 fn3_constant(Complex c);
AnalyticFn3 fn3_monomial(int p1, int p2, int p3);  // z1^p1 z2^p2 z3^p3
AnalyticFn3 lift_slot(AnalyticFn1 f, int slot);    // slot in {1,2,3}

// Second divided difference f[x0, x1, x2] with confluent partials, as above.
AnalyticFn3 divided_diff_2(AnalyticFn1 f, DividedDiffOptions opts = {});

// Confluent divided difference over a node multiset given as (node, multiplicity)
// groups. Nodes in different groups must differ; repeated nodes seed the table
// with f^(j)/j!. Exposed for reuse and direct testing.
Complex confluent_divided_difference(const AnalyticFn1& f,
                                     const std::vector<std::pair<Complex, int>>& groups);

// Named function registry used by the CLI and the bindings.
// One-variable descriptors: "poly:[c0,c1,...]", "exp", "power:k", "identity",
// "const:c" where scalars are numbers or [re, im] pairs.
AnalyticFn1 make_function(const std::string& descriptor);

// Two-variable descriptors: "const:c", "proj1", "proj2",
// "poly2:[[c00,c01],[c10,c11],...]" (row i = powers of z1),
// "dd1:<one-variable descriptor>".
AnalyticFn2 make_function2(const std::string& descriptor);

}  // namespace doi
