#include "fuchs/hypergeometric.hpp"

#include <cmath>
#include <limits>
#include <memory>

namespace fuchs {

HypergeomParams::HypergeomParams(Scalar a, Scalar b, Scalar c) : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
    if (a_.backend() != b_.backend() || a_.backend() != c_.backend())
        throw BackendMismatch("hypergeometric parameters use mixed backends");
    for (const Scalar* p : {&a_, &b_, &c_}) {
        const bool integral = p->is_exact() ? p->is_integer()
                                            : p->im_float().is_zero() && p->re_float().to_rational().get_den() == 1;
        if (integral) throw DomainError("hypergeometric parameter " + p->str() + " is an integer");
    }
}

namespace {

Backend work_backend(const HypergeomParams& params, const Scalar& z, const F21Options& options) {
    unsigned bits = options.precision_bits;
    if (!params.backend().is_exact()) bits = std::max(bits, params.backend().precision_bits);
    if (!z.is_exact()) bits = std::max(bits, z.backend().precision_bits);
    return Backend::floating(bits);
}

/// Sum of f_n z^n with f_{n+1}/f_n = (a+n)(b+n)/((c+n)(n+1)), starting from f_0 = lead.
/// shift_down: sum (n+1) f_{n+1} z^n instead.
F21Sum hyper_sum(const Scalar& a, const Scalar& b, const Scalar& c, const Scalar& z, const Scalar& lead,
                 const F21Options& options, bool shift_down) {
    const Backend be = z.backend();
    const double az = z.abs();
    if (az >= 1.0) throw DomainError("the series needs |z| < 1, got |z| = " + std::to_string(az));
    const double ma = a.abs(), mb = b.abs(), mc = c.abs();
    // ratio of consecutive terms of the summed series: F itself, or the contiguous
    // series with parameters shifted by one when differentiating
    const double sa = shift_down ? (a + Scalar::one(be)).abs() : ma;
    const double sb = shift_down ? (b + Scalar::one(be)).abs() : mb;
    const double sc = shift_down ? (c + Scalar::one(be)).abs() : mc;
    F21Sum out;
    Scalar coef = lead;  // f_n
    Scalar zn = Scalar::one(be);
    Scalar sum = Scalar::zero(be);
    if (shift_down) coef = coef * a * b / c;  // f_1, then term (n+1) f_{n+1} z^n
    for (long n = 0; n < options.max_terms; ++n) {
        const Scalar nn(n, be);
        Scalar term = shift_down ? coef * Scalar(n + 1, be) * zn : coef * zn;
        sum += term;
        const long k = shift_down ? n + 1 : n;  // index of coef
        const Scalar kk(k, be);
        coef = coef * (a + kk) * (b + kk) / ((c + kk) * (kk + Scalar::one(be)));
        zn = zn * z;
        const double m = static_cast<double>(n + 1);
        if (m > sc) {
            const double R = az * (1.0 + sa / m) * (1.0 + sb / m) / (1.0 - sc / m);
            if (R < 1.0) {
                const double next = shift_down ? (coef * Scalar(n + 2, be) * zn).abs() : (coef * zn).abs();
                out.tail_bound = next / (1.0 - R);
                if (out.tail_bound < options.tol || next == 0.0) {
                    out.value = sum;
                    out.terms = n + 1;
                    return out;
                }
            }
        }
    }
    throw ConvergenceError("hypergeometric tail bound " + std::to_string(out.tail_bound) + " not below " +
                           std::to_string(options.tol) + " after " + std::to_string(options.max_terms) + " terms");
}

}  // namespace

F21Sum f21_sum(const HypergeomParams& params, const Scalar& z, const F21Options& options) {
    if (!(options.tol > 0)) throw DomainError("tolerance must be positive");
    const Backend be = work_backend(params, z, options);
    const HypergeomParams p = params.to(be);
    return hyper_sum(p.a(), p.b(), p.c(), z.to(be), Scalar::one(be), options, false);
}

Scalar f21(const HypergeomParams& params, const Scalar& z, const F21Options& options) {
    return f21_sum(params, z, options).value;
}

Scalar f21_derivative(const HypergeomParams& params, const Scalar& z, const F21Options& options) {
    const Backend be = work_backend(params, z, options);
    const HypergeomParams p = params.to(be);
    const Scalar one = Scalar::one(be);
    const HypergeomParams shifted(p.a() + one, p.b() + one, p.c() + one);
    return p.a() * p.b() / p.c() * f21(shifted, z.to(be), options);
}

Scalar f21_derivative_termwise(const HypergeomParams& params, const Scalar& z, const F21Options& options) {
    const Backend be = work_backend(params, z, options);
    const HypergeomParams p = params.to(be);
    return hyper_sum(p.a(), p.b(), p.c(), z.to(be), Scalar::one(be), options, true).value;
}

Scalar f21_logderiv(const HypergeomParams& params, const Scalar& z, const F21Options& options) {
    const Scalar F = f21(params, z, options);
    if (F.abs() < 1e3 * options.tol) throw DomainError("F(z) vanishes within tolerance at z = " + z.str());
    return f21_derivative(params, z, options) / F;
}

DifferentialOperator gauss_operator(const HypergeomParams& params) {
    const Backend be = params.backend();
    const Scalar one = Scalar::one(be), zero = Scalar::zero(be);
    const Polynomial den({zero, one, -one}, be);
    const RationalFunction q0(Polynomial({params.a() * params.b()}, be), den);
    const RationalFunction q1(Polynomial({-params.c(), params.a() + params.b() + one}, be), den);
    return DifferentialOperator::standard({q0, q1});
}

DerivativeRecurrence gauss_recurrence_coefficients(const HypergeomParams& params, const Scalar& z) {
    Backend be = params.backend();
    if (be.is_exact() && !z.is_exact()) be = z.backend();
    const HypergeomParams p = params.to(be);
    const Scalar zb = z.to(be);
    const Scalar one = Scalar::one(be), two(2, be);
    const Polynomial n1({one, one}, be);                 // n + 1
    const Polynomial n2({two, one}, be);                 // n + 2
    const Polynomial lin({p.c() - (p.a() + p.b() + one) * zb, one - two * zb}, be);  // c+n-(a+b+2n+1)z
    DerivativeRecurrence rec;
    rec.order = 2;
    rec.z = zb;
    rec.numerators = {n1 * lin, (n1 * n2).scaled(zb * (one - zb))};
    rec.denominator = Polynomial({p.a(), one}, be) * Polynomial({p.b(), one}, be);
    return rec;
}

HypergeomParams kummer_switch(const HypergeomParams& params) {
    const Scalar one = Scalar::one(params.backend());
    return {params.a(), params.b(), params.a() + params.b() - params.c() + one};
}

DichotomyReport region_dichotomy_check(const HypergeomParams& params, const Scalar& z,
                                       const DichotomyOptions& options) {
    const Backend be = options.backend;
    const Scalar zb = z.to(be);
    SingularSet sites;
    sites.points = {Scalar::zero(be), Scalar::one(be)};
    sites.residuals = {0.0, 0.0};
    const RegionQueryResult where = classify_point(sites, zb, options.guard_tol);
    DichotomyReport rep;
    rep.z = zb;
    rep.distance_to_AL = where.distance_to_AL;
    if (where.is_tie) {
        throw PreconditionError("z = " + zb.str() + " lies on Re z = 1/2 (distance " +
                                std::to_string(where.distance_to_AL) + ")");
    }
    rep.side = *where.nearest_index == 0 ? "left" : "right";

    auto rec = std::make_shared<DerivativeRecurrence>(gauss_recurrence_coefficients(params.to(be), zb));
    const ContinuedFraction cf = from_order2_coefficients([rec](long n) { return rec->a(1, n); },
                                                          [rec](long n) { return rec->a(2, n); });
    rep.cf = evaluate(cf, options.cf_tol, options.n_max);
    const std::complex<double> v = rep.cf.value.to_complex();

    const Scalar zx = z.to(Backend::floating(options.oracle.precision_bits));
    const Scalar one = Scalar::one(zx.backend());
    if (zx.abs() < 1.0) {
        rep.oracle_left = f21_logderiv(params, zx, options.oracle);
        rep.error_left = std::abs(v - rep.oracle_left->to_complex());
    }
    if ((one - zx).abs() < 1.0) {
        rep.oracle_right = -f21_logderiv(kummer_switch(params), one - zx, options.oracle);
        rep.error_right = std::abs(v - rep.oracle_right->to_complex());
    }
    const auto& chosen = rep.side == "left" ? rep.error_left : rep.error_right;
    rep.expected_error = chosen ? *chosen : std::numeric_limits<double>::quiet_NaN();
    return rep;
}

}  // namespace fuchs
