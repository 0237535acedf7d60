#include <chrono>
#include <cmath>

#include "doctest.h"
#include "fuchs/hypergeometric.hpp"
#include "generators.hpp"
#include "support.hpp"

using namespace fuchs;
using namespace fuchs::testing;

namespace {

const Backend kF113 = Backend::floating(113);

HypergeomParams ref_params() { return {q(1, 2), q(1, 3), q(1, 4)}; }

Scalar dec(const char* text) { return Scalar::from_bigfloat(BigFloat(text, 113), BigFloat(0L, 113)); }

F21Options tight() {
    F21Options o;
    o.tol = 1e-32;
    return o;
}

double rel(const Scalar& x, const Scalar& y) { return (x - y.to(x.backend())).abs() / y.abs(); }

}  // namespace

TEST_CASE("parameters must not be integers") {
    CHECK_THROWS_AS(HypergeomParams(q(1, 2), q(1, 3), q(2)), DomainError);
    CHECK_THROWS_AS(HypergeomParams(q(-1), q(1, 3), q(1, 4)), DomainError);
    CHECK_NOTHROW(HypergeomParams(qi(1, 2, 1, 1), q(1, 3), q(1, 4)));
    // c' = a + b - c + 1 is an integer
    CHECK_THROWS_AS(kummer_switch(HypergeomParams(q(1, 2), q(1, 2), q(1, 3) + q(2, 3))), DomainError);
}

TEST_CASE("series values") {
    const auto p = ref_params();
    CHECK(f21(p, q(0)) == Scalar(1, kF113));
    CHECK(rel(f21(p, q(1, 5), tight()), dec("1.15916506107702612717963024986")) < 1e-28);
    CHECK_THROWS_AS(f21(p, Scalar::from_double(1.2, 0, kF113)), DomainError);
    CHECK_THROWS_AS(f21(p, q(1)), DomainError);

    // exact partial sums bracket the float value within the reported tail bound
    auto s = f21_sum(p, q(1, 5));
    Scalar partial = q(0), term = q(1);
    for (long n = 0; n < s.terms; ++n) {
        partial += term;
        const Scalar nn(n, Backend::exact());
        term = term * (q(1, 2) + nn) * (q(1, 3) + nn) / ((q(1, 4) + nn) * (nn + q(1))) * q(1, 5);
    }
    CHECK((s.value - partial.to(kF113)).abs() < 1e-30);
    CHECK(s.tail_bound < 1e-20);
}

TEST_CASE("logarithmic derivative") {
    const auto p = ref_params();
    CHECK(rel(f21_logderiv(p, q(0)), Scalar(q(1, 2) * q(1, 3) / q(1, 4)).to(kF113)) < 1e-30);
    CHECK(rel(f21_logderiv(p, q(1, 5), tight()), dec("0.821669173149327387029130874321")) < 1e-28);
    CHECK(rel(f21_logderiv(p, q(4, 5), tight()), dec("3.09387414753578115636040191526")) < 1e-28);
    const auto sw = kummer_switch(p);
    CHECK(sw.c() == q(19, 12));
    CHECK(kummer_switch(sw).c() == p.c());
    CHECK(rel(-f21_logderiv(sw, q(1, 5), tight()), dec("-0.121969910361598480671191509045")) < 1e-28);
    CHECK(rel(-f21_logderiv(sw, q(4, 5), tight()), dec("-0.279160798087970348955949532359")) < 1e-28);
}

TEST_CASE("contiguous and termwise derivatives agree on a grid") {
    Gen g(31);
    for (int trial = 0; trial < 4; ++trial) {
        HypergeomParams p(Scalar::exact(g.fractional(), g.rational()), Scalar::exact(g.fractional(), 0),
                          Scalar::exact(g.fractional(), 0));
        for (int k = 0; k < 20; ++k) {
            const double r = 0.8 * (k + 1) / 20.0, phi = 0.7 * k;
            const Scalar z = Scalar::from_double(r * std::cos(phi), r * std::sin(phi), kF113);
            const Scalar d1 = f21_derivative(p, z), d2 = f21_derivative_termwise(p, z);
            CHECK((d1 - d2).abs() <= 1e-12 * std::max(1.0, d1.abs()));
        }
    }
}

TEST_CASE("recurrence coefficients") {
    const auto p = ref_params();
    const Scalar z = q(1, 5);
    auto rec = gauss_recurrence_coefficients(p, z);
    const Scalar ab = q(1, 2) * q(1, 3);
    CHECK(rec.a(1, 0) == (q(1, 4) - (q(1, 2) + q(1, 3) + q(1)) * z) / ab);
    CHECK(rec.a(2, 0) == q(2) * z * (q(1) - z) / ab);
    // same coefficients as the generic Leibniz route on the operator
    auto generic = derivative_recurrence(gauss_operator(p), z);
    for (long n = 0; n < 12; ++n) {
        CHECK(rec.a(1, n) == generic.a(1, n));
        CHECK(rec.a(2, n) == generic.a(2, n));
    }
    // exact recurrence on x_n = y^(n)(z)/n! of two independent solutions
    for (auto init : {std::vector<Scalar>{q(1), q(0)}, std::vector<Scalar>{q(0), q(1)}}) {
        auto series = solve_series(gauss_operator(p), z, init, 14);
        const auto& x = series.coefficients;
        for (long n = 0; n <= 10; ++n) CHECK(x[n] - rec.a(1, n) * x[n + 1] - rec.a(2, n) * x[n + 2] == q(0));
    }
    // the printed z(z - 1) fails the same check
    auto series = solve_series(gauss_operator(p), z, {q(1), q(0)}, 6);
    const auto& x = series.coefficients;
    CHECK(x[0] - rec.a(1, 0) * x[1] + rec.a(2, 0) * x[2] != q(0));
}

TEST_CASE("characteristic roots are 1/(t - z)") {
    for (const Scalar& z : {q(1, 5), q(4, 5), qi(1, 3, 2, 7)}) {
        auto rec = gauss_recurrence_coefficients(ref_params(), z);
        auto roots = find_roots(characteristic_polynomial(rec.normalized()));
        std::vector<Scalar> values;
        for (auto& r : roots) {
            CHECK(r.exact);
            values.push_back(r.value);
        }
        std::vector<Scalar> expected = {q(1) / (q(0) - z), q(1) / (q(1) - z)};
        sort_scalars(values);
        sort_scalars(expected);
        CHECK(values == expected);
    }
}

TEST_CASE("region dichotomy") {
    const auto p = ref_params();
    SUBCASE("left of the line") {
        const auto start = std::chrono::steady_clock::now();
        auto rep = region_dichotomy_check(p, q(1, 5));
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        CHECK(rep.side == "left");
        CHECK(rep.cf.converged);
        CHECK(rep.cf.n_used <= 300);
        CHECK(*rep.error_left < 1e-8);
        CHECK(*rep.error_right > 1e-3);
        CHECK(secs < 1.0);
    }
    SUBCASE("right of the line") {
        auto rep = region_dichotomy_check(p, q(4, 5));
        CHECK(rep.side == "right");
        CHECK(rep.expected_error < 1e-6);
        CHECK(*rep.error_left > 1e-3);
    }
    SUBCASE("on the line") { CHECK_THROWS_AS(region_dichotomy_check(p, q(1, 2)), PreconditionError); }
    SUBCASE("outside the lens only one oracle applies") {
        auto rep = region_dichotomy_check(p, Scalar::from_double(-0.5, 0, Backend::floating(53)));
        CHECK(rep.oracle_left);
        CHECK(!rep.oracle_right);
        CHECK(rep.expected_error < 1e-8);
    }
}
