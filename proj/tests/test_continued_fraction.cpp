#include <cmath>

#include "doctest.h"
#include "fuchs/continued_fraction.hpp"
#include "generators.hpp"
#include "support.hpp"

using namespace fuchs;
using namespace fuchs::testing;

namespace {

const Backend kF53 = Backend::floating(53);
const Backend kF128 = Backend::floating(128);

ContinuedFraction constant_fraction(const Scalar& b0, const Scalar& a, const Scalar& b) {
    return ContinuedFraction(b0, [a, b](long) { return CFTerm{a, b}; });
}

/// (Pi y)''' = 0 with Pi = (z-1)(z-3)(z-5): solutions 1/(1-z), 1/(3-z), 1/(5-z).
/// Built in the float backend so that every coefficient keeps the denominator Pi.
DifferentialOperator three_poles(Backend be) {
    Polynomial pi = Polynomial::linear(q(1)) * Polynomial::linear(q(3)) * Polynomial::linear(q(5));
    Polynomial d1 = pi.derivative(), d2 = d1.derivative(), d3 = d2.derivative();
    const Polynomial den = pi.to(be);
    std::vector<RationalFunction> qs = {RationalFunction((-d3).to(be), den),
                                        RationalFunction((-d2.scaled(q(3))).to(be), den),
                                        RationalFunction((-d1.scaled(q(3))).to(be), den)};
    return DifferentialOperator::standard(qs);
}

}  // namespace

TEST_CASE("golden ratio") {
    auto cf = constant_fraction(Scalar(1, kF53), Scalar(1, kF53), Scalar(1, kF53));
    auto ev = evaluate(cf, 1e-15, 200);
    CHECK(ev.converged);
    CHECK(near(ev.value.to_complex().real(), 1.618033988749895, 1e-14));
    CHECK(ev.infinite_at.empty());
}

TEST_CASE("finite fractions evaluate exactly") {
    ContinuedFraction cf(q(1), [](long) { return CFTerm{q(1), q(2)}; }, 1);
    auto ev = evaluate(cf, 1e-30, 50);
    CHECK(ev.converged);
    CHECK(ev.value == q(3, 2));
    CHECK_THROWS_AS(cf.term(2), DomainError);
    // sqrt(2) = 1 + 1/(2 + 1/(2 + ...)): convergents 1, 3/2, 7/5, 17/12
    auto s2 = constant_fraction(q(1), q(1), q(2));
    auto pairs = convergents(s2, 3);
    CHECK(pairs.size() == 5);
    CHECK(pair_at(pairs, 3).A / pair_at(pairs, 3).B == q(17, 12));
    CHECK(evaluate_tail_truncated(s2, 2, q(0)) == q(7, 5));
}

TEST_CASE("determinant identity holds for random fractions") {
    Gen g(3);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<CFTerm> terms;
        for (int n = 0; n < 15; ++n) terms.push_back({g.scalar(true), g.scalar(true)});
        ContinuedFraction cf(g.scalar(true), [terms](long n) { return terms[n - 1]; }, 15);
        auto pairs = convergents(cf, 15);
        CHECK(determinant_check(cf, pairs) == -1);
        for (long N = 0; N <= 15; ++N) {
            const auto& p = pair_at(pairs, N);
            if (p.B.is_zero()) continue;
            Scalar back;
            try {
                back = evaluate_tail_truncated(cf, N, Scalar::zero(Backend::exact()));
            } catch (const DomainError&) {
                continue;
            }
            CHECK(back == p.A / p.B);
        }
    }
}

TEST_CASE("vanishing B_n is recorded, not fatal") {
    ContinuedFraction cf(Scalar(0, kF53), [](long n) {
        return CFTerm{Scalar(1, kF53), Scalar(n == 1 ? 0 : 1, kF53)};
    });
    auto ev = evaluate(cf, 1e-14, 200);
    REQUIRE(!ev.infinite_at.empty());
    CHECK(ev.infinite_at.front() == 1);
    CHECK(ev.converged);
    CHECK(near(ev.value.to_complex().real(), 1.618033988749895, 1e-12));
}

TEST_CASE("zero partial numerator terminates the fraction") {
    ContinuedFraction cf(q(0), [](long n) { return CFTerm{n == 3 ? q(0) : q(1), q(1)}; });
    auto ev = evaluate(cf, 1e-30, 50);
    REQUIRE(ev.terminated_at);
    CHECK(*ev.terminated_at == 3);
    CHECK(ev.value == q(1, 2));
}

TEST_CASE("non-convergence is reported") {
    // 1/(1 - 1/(1 - ...)) cycles
    auto cf = constant_fraction(q(0), q(-1), q(1));
    auto ev = evaluate(cf, 1e-12, 40);
    CHECK(!ev.converged);
    CHECK(!ev.diagnostic.empty());
}

TEST_CASE("reconstruction of x_0 and x_1 from the tail") {
    const Scalar z = q(1, 5);
    auto rec = derivative_recurrence(gauss_exact(), z);
    auto series = solve_series(gauss_exact(), z, {q(2), q(1, 3)}, 14);
    const auto& x = series.coefficients;
    IndexedScalar a1 = [&rec](long n) { return rec.a(1, n); };
    IndexedScalar a2 = [&rec](long n) { return rec.a(2, n); };
    auto cf = from_recurrence(a1, a2);
    auto pairs = convergents(cf, 12);
    for (long n = 1; n <= 10; ++n) {
        auto [x0, x1] = reconstruct_x0_x1(pairs, n, cf.term(n).a, x[n], x[n + 1]);
        CHECK(x0 == x[0]);
        CHECK(x1 == x[1]);
    }
}

TEST_CASE("chain ratio equals a convergent of the derivative fraction") {
    SUBCASE("Gauss, exact") {
        for (const Scalar& z : {q(1, 5), q(4, 5), qi(1, 3, 1, 2), q(-2, 7)}) {
            auto rep = cf_equivalence(gauss_exact(), z, 12);
            CHECK(rep.all_equal);
            CHECK(!rep.trivial);
            CHECK(rep.rows.size() == 11);
        }
    }
    SUBCASE("orientation and offset are the same for every operator") {
        Gen g(17);
        auto ref = cf_equivalence(gauss_exact(), q(1, 5), 6);
        int tested = 0;
        for (int trial = 0; trial < 12; ++trial) {
            auto op = random_fuchsian2(g);
            Scalar z = g.scalar(true);
            if (!is_ordinary_point(op, z)) continue;
            CfEquivalenceReport rep;
            try {
                rep = cf_equivalence(op, z, 10);
            } catch (const DomainError&) {
                continue;
            }
            ++tested;
            CHECK(rep.all_equal);
            CHECK(rep.orientation == ref.orientation);
            CHECK(rep.offset == ref.offset);
        }
        CHECK(tested >= 5);
    }
    SUBCASE("float backend within tolerance") {
        auto rep = cf_equivalence(gauss_exact().to(kF128), Scalar::rational(1, 5, kF128), 12, 1e-12);
        CHECK(rep.all_equal);
    }
    SUBCASE("q_0 = 0 is trivial") {
        auto op = DifferentialOperator::standard(
            {RationalFunction(), RationalFunction(poly({q(2)}), poly({q(1), q(-1)}))});
        auto rep = cf_equivalence(op, q(1, 3), 8);
        CHECK(rep.trivial);
        CHECK(rep.all_equal);
    }
}

TEST_CASE("generalized fraction for m = 2 equals the ordinary one") {
    Gen g(23);
    for (int trial = 0; trial < 8; ++trial) {
        auto op = trial == 0 ? gauss_exact() : random_fuchsian2(g);
        Scalar z = trial == 0 ? q(1, 5) : g.scalar(true);
        if (!is_ordinary_point(op, z)) continue;
        DerivativeRecurrence rec;
        try {
            rec = derivative_recurrence(op, z);
        } catch (const DomainError&) {
            continue;
        }
        IndexedScalar a1 = [&rec](long n) { return rec.a(1, n); };
        IndexedScalar a2 = [&rec](long n) { return rec.a(2, n); };
        auto cf = from_order2_coefficients(a1, a2);
        for (long D = 1; D <= 12; ++D) {
            Scalar mono, ref;
            try {
                mono = monster_ratio_eval(rec, D);
                auto pairs = convergents(cf, D);
                ref = pair_at(pairs, D).A / pair_at(pairs, D).B;
            } catch (const DomainError&) {
                continue;
            }
            CHECK(mono == ref);
        }
    }
}

TEST_CASE("generalized fraction with only a_1 = 1 is 1") {
    auto coeff = [](int j, long) { return j == 1 ? q(1) : q(0); };
    for (int m = 2; m <= 4; ++m) CHECK(monster_ratio_eval(coeff, m, 30, q(0)) == q(1));
}

TEST_CASE("generalized fraction of order 3 gives the most recessive branch") {
    auto op = three_poles(kF128);
    const Scalar z = Scalar::rational(3, 10, kF128);
    auto rec = derivative_recurrence(op, z);
    const double target = 1.0 / (5.0 - 0.3);
    CHECK(near(monster_ratio_eval(rec, 400).to_complex().real(), target, 1e-12));
    CHECK_THROWS_AS(monster_ratio_eval(rec, 0), DomainError);
}
