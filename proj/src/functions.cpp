#include "doi/functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "json.hpp"

namespace doi {

namespace detail {

double factorial(int k) {
    static const auto table = [] {
        std::array<double, 171> t{};
        t[0] = 1.0;
        for (size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] * static_cast<double>(i);
        return t;
    }();
    if (k < 0) throw InvalidInput("factorial: negative order");
    if (static_cast<size_t>(k) < table.size()) return table[k];
    return std::numeric_limits<double>::infinity();
}

double binomial(int n, int k) {
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * static_cast<double>(n - k + i) / static_cast<double>(i);
    return b;
}

}  // namespace detail

namespace {

using detail::binomial;
using detail::factorial;

Complex cpow(Complex z, int p) {
    Complex r = 1.0;
    for (int i = 0; i < p; ++i) r *= z;
    return r;
}

}  // namespace

double Fn1Impl::radius() const { return std::numeric_limits<double>::infinity(); }

Complex AnalyticFn1::derivative(int order, Complex z) const {
    if (!impl_) throw InvalidInput("AnalyticFn1: empty handle");
    if (order < 0) throw InvalidInput("AnalyticFn1: negative derivative order");
    const double r = impl_->radius();
    if (std::isfinite(r) && std::abs(z) >= r - 1e-12 * std::max(1.0, r))
        throw RadiusExceeded("AnalyticFn1: |z| = " + std::to_string(std::abs(z)) +
                             " outside convergence radius " + std::to_string(r));
    return impl_->derivative(order, z);
}

double AnalyticFn1::radius() const {
    if (!impl_) throw InvalidInput("AnalyticFn1: empty handle");
    return impl_->radius();
}

namespace {

class PolynomialImpl final : public Fn1Impl {
   public:
    PolynomialImpl(std::vector<Complex> coeffs, double radius)
        : coeffs_(std::move(coeffs)), radius_(radius) {
        if (coeffs_.empty()) coeffs_.push_back(0.0);
    }

    Complex derivative(int order, Complex z) const override {
        const int deg = static_cast<int>(coeffs_.size()) - 1;
        if (order > deg) return 0.0;
        // Horner on the shifted coefficients c_k * k!/(k-order)!.
        Complex acc = 0.0;
        for (int k = deg; k >= order; --k) {
            double fall = 1.0;
            for (int i = 0; i < order; ++i) fall *= static_cast<double>(k - i);
            acc = acc * z + fall * coeffs_[k];
        }
        return acc;
    }

    double radius() const override { return radius_; }

   private:
    std::vector<Complex> coeffs_;
    double radius_;
};

class ExponentialImpl final : public Fn1Impl {
   public:
    Complex derivative(int, Complex z) const override { return std::exp(z); }
};

}  // namespace

AnalyticFn1 polynomial(std::vector<Complex> coeffs, double radius) {
    return AnalyticFn1(std::make_shared<PolynomialImpl>(std::move(coeffs), radius));
}

AnalyticFn1 monomial(int power) {
    if (power < 0) throw InvalidInput("monomial: power must be nonnegative");
    std::vector<Complex> c(power + 1, 0.0);
    c[power] = 1.0;
    return polynomial(std::move(c));
}

AnalyticFn1 identity_fn() { return monomial(1); }

AnalyticFn1 constant_fn(Complex c) { return polynomial({c}); }

AnalyticFn1 exponential() { return AnalyticFn1(std::make_shared<ExponentialImpl>()); }

AnalyticFn1 truncated_exponential(int degree) {
    if (degree < 0) throw InvalidInput("truncated_exponential: negative degree");
    std::vector<Complex> c(degree + 1);
    for (int k = 0; k <= degree; ++k) c[k] = 1.0 / factorial(k);
    return polynomial(std::move(c));
}

Complex AnalyticFn2::partial(int q1, int q2, Complex z1, Complex z2) const {
    if (!impl_) throw InvalidInput("AnalyticFn2: empty handle");
    if (q1 < 0 || q2 < 0) throw InvalidInput("AnalyticFn2: negative derivative order");
    return impl_->partial(q1, q2, z1, z2);
}

namespace {

class Fn2ConstImpl final : public Fn2Impl {
   public:
    explicit Fn2ConstImpl(Complex c) : c_(c) {}
    Complex partial(int q1, int q2, Complex, Complex) const override {
        return (q1 == 0 && q2 == 0) ? c_ : Complex(0.0);
    }

   private:
    Complex c_;
};

class Fn2LiftImpl final : public Fn2Impl {
   public:
    Fn2LiftImpl(AnalyticFn1 f, int slot) : f_(std::move(f)), slot_(slot) {}
    Complex partial(int q1, int q2, Complex z1, Complex z2) const override {
        if (slot_ == 1) return q2 > 0 ? Complex(0.0) : f_.derivative(q1, z1);
        return q1 > 0 ? Complex(0.0) : f_.derivative(q2, z2);
    }

   private:
    AnalyticFn1 f_;
    int slot_;
};

class Fn2PolyImpl final : public Fn2Impl {
   public:
    explicit Fn2PolyImpl(std::vector<std::vector<Complex>> coeffs)
        : coeffs_(std::move(coeffs)) {}

    Complex partial(int q1, int q2, Complex z1, Complex z2) const override {
        Complex acc = 0.0;
        for (int i = q1; i < static_cast<int>(coeffs_.size()); ++i) {
            const auto& row = coeffs_[i];
            double fall1 = 1.0;
            for (int d = 0; d < q1; ++d) fall1 *= static_cast<double>(i - d);
            Complex row_acc = 0.0;
            for (int j = static_cast<int>(row.size()) - 1; j >= q2; --j) {
                double fall2 = 1.0;
                for (int d = 0; d < q2; ++d) fall2 *= static_cast<double>(j - d);
                row_acc = row_acc * z2 + fall2 * row[j];
            }
            acc += fall1 * cpow(z1, i - q1) * row_acc;
        }
        return acc;
    }

   private:
    std::vector<std::vector<Complex>> coeffs_;
};

class Fn2SumImpl final : public Fn2Impl {
   public:
    Fn2SumImpl(AnalyticFn2 a, AnalyticFn2 b) : a_(std::move(a)), b_(std::move(b)) {}
    Complex partial(int q1, int q2, Complex z1, Complex z2) const override {
        return a_.partial(q1, q2, z1, z2) + b_.partial(q1, q2, z1, z2);
    }

   private:
    AnalyticFn2 a_, b_;
};

class Fn2ScaleImpl final : public Fn2Impl {
   public:
    Fn2ScaleImpl(Complex c, AnalyticFn2 f) : c_(c), f_(std::move(f)) {}
    Complex partial(int q1, int q2, Complex z1, Complex z2) const override {
        return c_ * f_.partial(q1, q2, z1, z2);
    }

   private:
    Complex c_;
    AnalyticFn2 f_;
};

class Fn2ProductImpl final : public Fn2Impl {
   public:
    Fn2ProductImpl(AnalyticFn2 a, AnalyticFn2 b) : a_(std::move(a)), b_(std::move(b)) {}

    // Double Leibniz sum over both derivative slots.
    Complex partial(int q1, int q2, Complex z1, Complex z2) const override {
        Complex acc = 0.0;
        for (int i = 0; i <= q1; ++i)
            for (int j = 0; j <= q2; ++j)
                acc += binomial(q1, i) * binomial(q2, j) * a_.partial(i, j, z1, z2) *
                       b_.partial(q1 - i, q2 - j, z1, z2);
        return acc;
    }

   private:
    AnalyticFn2 a_, b_;
};

}  // namespace

AnalyticFn2 fn2_constant(Complex c) { return AnalyticFn2(std::make_shared<Fn2ConstImpl>(c)); }

AnalyticFn2 lift_first(AnalyticFn1 f) {
    return AnalyticFn2(std::make_shared<Fn2LiftImpl>(std::move(f), 1));
}

AnalyticFn2 lift_second(AnalyticFn1 f) {
    return AnalyticFn2(std::make_shared<Fn2LiftImpl>(std::move(f), 2));
}

AnalyticFn2 project_first() { return lift_first(identity_fn()); }
AnalyticFn2 project_second() { return lift_second(identity_fn()); }

AnalyticFn2 polynomial2(std::vector<std::vector<Complex>> coeffs) {
    return AnalyticFn2(std::make_shared<Fn2PolyImpl>(std::move(coeffs)));
}

AnalyticFn2 fn2_sum(AnalyticFn2 a, AnalyticFn2 b) {
    return AnalyticFn2(std::make_shared<Fn2SumImpl>(std::move(a), std::move(b)));
}

AnalyticFn2 fn2_scale(Complex c, AnalyticFn2 f) {
    return AnalyticFn2(std::make_shared<Fn2ScaleImpl>(c, std::move(f)));
}

AnalyticFn2 fn2_product(AnalyticFn2 a, AnalyticFn2 b) {
    return AnalyticFn2(std::make_shared<Fn2ProductImpl>(std::move(a), std::move(b)));
}

Complex confluent_divided_difference(const AnalyticFn1& f,
                                     const std::vector<std::pair<Complex, int>>& groups_in) {
    // Merge bit-equal nodes so repeated values form one contiguous run; the
    // divided difference is symmetric in its nodes, so reordering is harmless.
    std::vector<std::pair<Complex, int>> groups;
    for (const auto& g : groups_in) {
        if (g.second <= 0) throw InvalidInput("confluent_divided_difference: multiplicity <= 0");
        auto it = std::find_if(groups.begin(), groups.end(),
                               [&](const auto& h) { return h.first == g.first; });
        if (it == groups.end())
            groups.push_back(g);
        else
            it->second += g.second;
    }
    if (groups.empty()) throw InvalidInput("confluent_divided_difference: no nodes");

    std::vector<Complex> t;
    std::vector<int> gid;
    for (size_t g = 0; g < groups.size(); ++g)
        for (int r = 0; r < groups[g].second; ++r) {
            t.push_back(groups[g].first);
            gid.push_back(static_cast<int>(g));
        }
    const int m = static_cast<int>(t.size());

    std::vector<Complex> cur(m), next(m);
    for (int i = 0; i < m; ++i) cur[i] = f.value(t[i]);
    for (int j = 1; j < m; ++j) {
        for (int i = 0; i + j < m; ++i) {
            if (gid[i] == gid[i + j])
                next[i] = f.derivative(j, t[i]) / factorial(j);
            else
                next[i] = (cur[i + 1] - cur[i]) / (t[i + j] - t[i]);
        }
        std::swap(cur, next);
    }
    return cur[0];
}

namespace {

double effective_sep_tol(double configured, double point_scale) {
    return configured > 0.0 ? configured : 1e-6 * std::max(1.0, point_scale);
}

class Fn2DividedDiffImpl final : public Fn2Impl {
   public:
    Fn2DividedDiffImpl(AnalyticFn1 f, DividedDiffOptions opts)
        : f_(std::move(f)), opts_(opts) {}

    Complex partial(int q1, int q2, Complex z1, Complex z2) const override {
        const double tol =
            effective_sep_tol(opts_.sep_tol, std::max(std::abs(z1), std::abs(z2)));
        if (!opts_.allow_confluent && std::abs(z1 - z2) < tol)
            throw SeparationViolation(
                "divided_diff_1: evaluation points closer than sep_tol; confluent "
                "evaluation not requested");
        return factorial(q1) * factorial(q2) *
               confluent_divided_difference(f_, {{z1, q1 + 1}, {z2, q2 + 1}});
    }

   private:
    AnalyticFn1 f_;
    DividedDiffOptions opts_;
};

}  // namespace

AnalyticFn2 divided_diff_1(AnalyticFn1 f, DividedDiffOptions opts) {
    return AnalyticFn2(std::make_shared<Fn2DividedDiffImpl>(std::move(f), opts));
}

Complex AnalyticFn3::partial(int q1, int q2, int q3, Complex z1, Complex z2,
                             Complex z3) const {
    if (!impl_) throw InvalidInput("AnalyticFn3: empty handle");
    if (q1 < 0 || q2 < 0 || q3 < 0) throw InvalidInput("AnalyticFn3: negative derivative order");
    return impl_->partial(q1, q2, q3, z1, z2, z3);
}

namespace {

class Fn3ConstImpl final : public Fn3Impl {
   public:
    explicit Fn3ConstImpl(Complex c) : c_(c) {}
    Complex partial(int q1, int q2, int q3, Complex, Complex, Complex) const override {
        return (q1 == 0 && q2 == 0 && q3 == 0) ? c_ : Complex(0.0);
    }

   private:
    Complex c_;
};

class Fn3MonomialImpl final : public Fn3Impl {
   public:
    Fn3MonomialImpl(int p1, int p2, int p3) : p1_(p1), p2_(p2), p3_(p3) {}

    Complex partial(int q1, int q2, int q3, Complex z1, Complex z2, Complex z3) const override {
        if (q1 > p1_ || q2 > p2_ || q3 > p3_) return 0.0;
        auto fall = [](int p, int q) {
            double r = 1.0;
            for (int d = 0; d < q; ++d) r *= static_cast<double>(p - d);
            return r;
        };
        return fall(p1_, q1) * fall(p2_, q2) * fall(p3_, q3) * cpow(z1, p1_ - q1) *
               cpow(z2, p2_ - q2) * cpow(z3, p3_ - q3);
    }

   private:
    int p1_, p2_, p3_;
};

class Fn3LiftImpl final : public Fn3Impl {
   public:
    Fn3LiftImpl(AnalyticFn1 f, int slot) : f_(std::move(f)), slot_(slot) {}

    Complex partial(int q1, int q2, int q3, Complex z1, Complex z2, Complex z3) const override {
        const std::array<int, 3> q{q1, q2, q3};
        const std::array<Complex, 3> z{z1, z2, z3};
        for (int s = 0; s < 3; ++s)
            if (s != slot_ - 1 && q[s] > 0) return 0.0;
        return f_.derivative(q[slot_ - 1], z[slot_ - 1]);
    }

   private:
    AnalyticFn1 f_;
    int slot_;
};

class Fn3DividedDiffImpl final : public Fn3Impl {
   public:
    Fn3DividedDiffImpl(AnalyticFn1 f, DividedDiffOptions opts)
        : f_(std::move(f)), opts_(opts) {}

    Complex partial(int q1, int q2, int q3, Complex z1, Complex z2, Complex z3) const override {
        const double tol = effective_sep_tol(
            opts_.sep_tol, std::max({std::abs(z1), std::abs(z2), std::abs(z3)}));
        if (!opts_.allow_confluent) {
            if (std::abs(z1 - z2) < tol || std::abs(z1 - z3) < tol || std::abs(z2 - z3) < tol)
                throw SeparationViolation(
                    "divided_diff_2: evaluation points closer than sep_tol; confluent "
                    "evaluation not requested");
        }
        return factorial(q1) * factorial(q2) * factorial(q3) *
               confluent_divided_difference(f_, {{z1, q1 + 1}, {z2, q2 + 1}, {z3, q3 + 1}});
    }

   private:
    AnalyticFn1 f_;
    DividedDiffOptions opts_;
};

}  // namespace

AnalyticFn3 fn3_constant(Complex c) { return AnalyticFn3(std::make_shared<Fn3ConstImpl>(c)); }

AnalyticFn3 fn3_monomial(int p1, int p2, int p3) {
    if (p1 < 0 || p2 < 0 || p3 < 0) throw InvalidInput("fn3_monomial: negative power");
    return AnalyticFn3(std::make_shared<Fn3MonomialImpl>(p1, p2, p3));
}

AnalyticFn3 lift_slot(AnalyticFn1 f, int slot) {
    if (slot < 1 || slot > 3) throw InvalidInput("lift_slot: slot must be 1, 2 or 3");
    return AnalyticFn3(std::make_shared<Fn3LiftImpl>(std::move(f), slot));
}

AnalyticFn3 divided_diff_2(AnalyticFn1 f, DividedDiffOptions opts) {
    return AnalyticFn3(std::make_shared<Fn3DividedDiffImpl>(std::move(f), opts));
}

namespace {

Complex scalar_from_json(const nlohmann::json& j, const std::string& what) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return Complex(j[0].get<double>(), j[1].get<double>());
    throw InvalidInput(what + ": expected a number or [re, im] pair");
}

nlohmann::json parse_payload(const std::string& payload, const std::string& what) {
    try {
        return nlohmann::json::parse(payload);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(what + ": cannot parse '" + payload + "': " + e.what());
    }
}

}  // namespace

AnalyticFn1 make_function(const std::string& descriptor) {
    if (descriptor == "exp") return exponential();
    if (descriptor == "identity") return identity_fn();
    if (descriptor.rfind("poly:", 0) == 0) {
        auto j = parse_payload(descriptor.substr(5), "make_function(poly)");
        if (!j.is_array() || j.empty())
            throw InvalidInput("make_function(poly): expected a nonempty coefficient array");
        std::vector<Complex> coeffs;
        for (const auto& c : j) coeffs.push_back(scalar_from_json(c, "make_function(poly)"));
        return polynomial(std::move(coeffs));
    }
    if (descriptor.rfind("power:", 0) == 0) {
        auto j = parse_payload(descriptor.substr(6), "make_function(power)");
        if (!j.is_number_integer() || j.get<int>() < 0)
            throw InvalidInput("make_function(power): expected a nonnegative integer");
        return monomial(j.get<int>());
    }
    if (descriptor.rfind("const:", 0) == 0) {
        auto j = parse_payload(descriptor.substr(6), "make_function(const)");
        return constant_fn(scalar_from_json(j, "make_function(const)"));
    }
    throw InvalidInput("make_function: unknown descriptor '" + descriptor + "'");
}

AnalyticFn2 make_function2(const std::string& descriptor) {
    if (descriptor == "proj1") return project_first();
    if (descriptor == "proj2") return project_second();
    if (descriptor.rfind("const:", 0) == 0) {
        auto j = parse_payload(descriptor.substr(6), "make_function2(const)");
        return fn2_constant(scalar_from_json(j, "make_function2(const)"));
    }
    if (descriptor.rfind("poly2:", 0) == 0) {
        auto j = parse_payload(descriptor.substr(6), "make_function2(poly2)");
        if (!j.is_array() || j.empty())
            throw InvalidInput("make_function2(poly2): expected a nonempty array of rows");
        std::vector<std::vector<Complex>> coeffs;
        for (const auto& row : j) {
            if (!row.is_array())
                throw InvalidInput("make_function2(poly2): rows must be arrays");
            std::vector<Complex> r;
            for (const auto& c : row) r.push_back(scalar_from_json(c, "make_function2(poly2)"));
            coeffs.push_back(std::move(r));
        }
        return polynomial2(std::move(coeffs));
    }
    if (descriptor.rfind("dd1:", 0) == 0)
        return divided_diff_1(make_function(descriptor.substr(4)));
    throw InvalidInput("make_function2: unknown descriptor '" + descriptor + "'");
}

}  // namespace doi
