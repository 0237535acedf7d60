#include <cmath>

#include "doctest.h"
#include "fuchs/chain.hpp"
#include "generators.hpp"
#include "support.hpp"

using namespace fuchs;
using namespace fuchs::testing;

namespace {

const Backend kF128 = Backend::floating(128);

double rel(const Scalar& x, double target) { return std::abs(x.to_complex().real() - target) / std::abs(target); }

/// y'' = 2/(1-z) y': solutions 1 and 1/(1-z).
DifferentialOperator constant_and_pole() {
    return DifferentialOperator::standard(
        {RationalFunction(), RationalFunction(poly({q(2)}), poly({q(1), q(-1)}))});
}

Scalar factorial_q(long n) {
    Scalar f = q(1);
    for (long k = 2; k <= n; ++k) f *= q(k);
    return f;
}

}  // namespace

TEST_CASE("chain of y'' = 0 vanishes past the unit vectors") {
    auto op = DifferentialOperator::standard({RationalFunction(), RationalFunction()});
    auto states = chain_run(op, 6);
    REQUIRE(states.size() == 7);
    CHECK(states[0].q[0] == RationalFunction::constant(q(1)));
    CHECK(states[1].q[1] == RationalFunction::constant(q(1)));
    for (long n = 2; n <= 6; ++n) {
        CHECK(states[n].q[0].is_zero());
        CHECK(states[n].q[1].is_zero());
    }
}

TEST_CASE("chain of y'' = 2/(1-z) y' is n!/(1-z)^(n-1)") {
    auto states = chain_run(constant_and_pole(), 8);
    for (long n = 1; n <= 8; ++n) {
        CHECK(states[n].q[0].is_zero());
        Polynomial den = Polynomial::constant(q(1));
        for (long k = 1; k < n; ++k) den = den * poly({q(1), q(-1)});
        CHECK(states[n].q[1] == RationalFunction(Polynomial::constant(factorial_q(n)), den));
        CHECK(states[n].power == std::max(0L, n - 1));
    }
}

TEST_CASE("exact chain residual vanishes on the Gauss series") {
    auto op = gauss_exact();
    const Scalar z = q(1, 5);
    auto series = solve_series(op, z, {q(1), q(2, 3)}, 12);
    for (long n = 2; n <= 10; ++n) CHECK(verify_chain(op, series, z, n).is_zero());
}

TEST_CASE("float chain residual is small relative to y^(n)") {
    auto op = gauss_exact().to(kF128);
    const Scalar z = Scalar::rational(1, 5, kF128);
    auto series = solve_series(op, z, {Scalar(1, kF128), Scalar::rational(2, 3, kF128)}, 12);
    Scalar fact = Scalar(1, kF128);
    for (long n = 2; n <= 10; ++n) {
        fact = fact * Scalar(n, kF128);
        const double scale = (series.coefficients[n] * fact).abs();
        CHECK(verify_chain(op, series, z, n).abs() <= 1e-10 * std::max(1.0, scale));
    }
}

TEST_CASE("chain values from the Taylor basis equal the symbolic chain") {
    Gen g(11);
    for (int trial = 0; trial < 6; ++trial) {
        auto op = trial == 0 ? gauss_exact() : random_fuchsian2(g);
        Scalar z = g.scalar(true);
        if (!is_ordinary_point(op, z)) continue;
        auto states = chain_run(op, 9);
        auto values = chain_values(op, z, 9);
        for (long n = 0; n <= 9; ++n) {
            for (int i = 0; i < 2; ++i) CHECK(values.value(i, n) == states[n].q[i].evaluate(z));
        }
    }
}

TEST_CASE("logarithmic derivative limit for the Gauss operator") {
    auto op = gauss_exact().to(kF128);
    SUBCASE("nearest point 0 gives F'/F") {
        auto res = logderiv_limit(op, Scalar::rational(1, 5, kF128));
        CHECK(rel(res.value, 0.821669173149327387029130874321) < 1e-8);
        CHECK(res.nearest_site == Scalar(0, kF128));
    }
    SUBCASE("nearest point 1 gives the branch holomorphic at 1") {
        auto res = logderiv_limit(op, Scalar::rational(4, 5, kF128));
        CHECK(rel(res.value, -0.121969910361598480671191509045) < 1e-8);
        CHECK(res.nearest_index == 1);
    }
    SUBCASE("modes agree") {
        LogDerivOptions sym, ev;
        sym.mode = ChainMode::Symbolic;
        ev.mode = ChainMode::Evaluate;
        const Scalar z = Scalar::rational(1, 5, kF128);
        auto a = logderiv_limit(op, z, sym);
        auto b = logderiv_limit(op, z, ev);
        CHECK(a.n_used == b.n_used);
        CHECK((a.value - b.value).abs() < 1e-20);
    }
    SUBCASE("auto mode switches once the degree cap is exceeded") {
        LogDerivOptions opt;
        opt.degree_cap = 8;
        auto res = logderiv_limit(op, Scalar::rational(1, 5, kF128), opt);
        CHECK(res.switched_at > 0);
        CHECK(rel(res.value, 0.821669173149327387029130874321) < 1e-8);
    }
    SUBCASE("exact input converges too") {
        auto res = logderiv_limit(gauss_exact(), q(1, 5));
        CHECK(res.value.is_exact());
        CHECK(rel(res.value, 0.821669173149327387029130874321) < 1e-8);
    }
}

TEST_CASE("logarithmic derivative guards") {
    auto op = gauss_exact();
    CHECK_THROWS_AS(logderiv_limit(op, q(1, 2)), PreconditionError);
    CHECK_THROWS_AS(logderiv_limit(op, q(0)), PreconditionError);
    auto order1 = DifferentialOperator::standard({RationalFunction(poly({q(1)}), poly({q(1), q(-1)}))});
    CHECK_THROWS_AS(logderiv_limit(order1, q(1, 5)), PreconditionError);
    auto free = DifferentialOperator::standard({RationalFunction(), RationalFunction()});
    CHECK_THROWS_AS(logderiv_limit(free, q(1, 5)), PreconditionError);
    // y'' = y'/z: solutions 1 and z^2 are both holomorphic at 0
    auto both = DifferentialOperator::standard({RationalFunction(), RationalFunction(poly({q(1)}), poly({q(0), q(1)}))});
    CHECK_THROWS_AS(logderiv_limit(both, Scalar::rational(1, 5, kF128)), PreconditionError);
}

TEST_CASE("constant solution at the nearest singular point has zero logarithmic derivative") {
    auto res = logderiv_limit(constant_and_pole(), Scalar::from_double(0.9, 0, kF128));
    CHECK(res.value.abs() == 0.0);
}

TEST_CASE("derivative ratios of two solutions decay when one extends") {
    auto op = gauss_exact().to(kF128);
    const Scalar F = Scalar::from_double(1.15916506107702612717963024986, 0, kF128);
    const Scalar dF = F * Scalar::from_double(0.821669173149327387029130874321, 0, kF128);
    auto res = problem1_probe(op, {F, dF}, {Scalar(1, kF128), Scalar(1, kF128)}, Scalar::rational(1, 5, kF128), 60);
    CHECK(res.decays);
    CHECK(res.zero_denominator_indices.empty());
    CHECK(res.converged);
}

TEST_CASE("Gauss derivative recurrence matches the closed form") {
    const Scalar a = q(1, 2), b = q(1, 3), c = q(1, 4), z = q(1, 5);
    auto rec = derivative_recurrence(gauss_exact(), z);
    REQUIRE(rec.order == 2);
    for (long n = 0; n < 15; ++n) {
        const Scalar nn(n, Backend::exact());
        const Scalar den = (a + nn) * (b + nn);
        const Scalar a1 = (nn + q(1)) * (c + nn - (a + b + q(2) * nn + q(1)) * z) / den;
        const Scalar a2 = (nn + q(1)) * (nn + q(2)) * z * (q(1) - z) / den;
        CHECK(rec.a(1, n) == a1);
        CHECK(rec.a(2, n) == a2);
    }
    auto series = solve_series(gauss_exact(), z, {q(3), q(-1, 7)}, 20);
    const auto& x = series.coefficients;
    for (long n = 0; n + 2 <= 20; ++n) CHECK(x[n] == rec.a(1, n) * x[n + 1] + rec.a(2, n) * x[n + 2]);
}

TEST_CASE("Leibniz and Taylor-basis routes agree") {
    Gen g(5);
    for (int trial = 0; trial < 10; ++trial) {
        auto op = random_fuchsian2(g);
        Scalar z = g.scalar(true);
        if (!is_ordinary_point(op, z)) continue;
        DerivativeRecurrence rec;
        try {
            rec = derivative_recurrence(op, z);
        } catch (const DomainError&) {
            continue;
        }
        std::vector<std::vector<Scalar>> rows;
        try {
            rows = derivative_recurrence_by_basis(op, z, 8);
        } catch (const DomainError&) {
            continue;
        }
        for (long n = 0; n <= 8; ++n) {
            CHECK(rows[n][0] == rec.a(1, n));
            CHECK(rows[n][1] == rec.a(2, n));
        }
    }
}

TEST_CASE("derivative recurrence rejects high-degree coefficients") {
    auto op = DifferentialOperator::standard(
        {RationalFunction(poly({q(0), q(0), q(0), q(1)})), RationalFunction()});
    CHECK_THROWS_AS(derivative_recurrence(op, q(1, 3)), DomainError);
    auto rows = derivative_recurrence_by_basis(op, q(1, 3), 5);
    CHECK(rows.size() == 6);
}
