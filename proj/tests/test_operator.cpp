#include "doctest.h"
#include "generators.hpp"
#include "support.hpp"

using namespace fuchs;
using namespace fuchs::testing;


TEST_CASE("make_operator validation") {
    CHECK_THROWS_AS(DifferentialOperator::standard({}), DomainError);
    CHECK_THROWS_AS(DifferentialOperator::delta_poly({Polynomial(), poly({q(1)})}), DomainError);
    auto f = RationalFunction::constant(Scalar::one(Backend::floating(53)));
    auto e = RationalFunction::constant(q(1));
    CHECK_THROWS_AS(DifferentialOperator::standard({f, e}), BackendMismatch);
    auto trivial = DifferentialOperator::standard({RationalFunction()});
    CHECK(trivial.order() == 1);
    CHECK(singular_points(trivial).size() == 0);
    auto th = DifferentialOperator::theta({poly({q(0), q(-1), q(1)}), poly({q(1)})});
    CHECK(th.order() == 2);
}

TEST_CASE("delta-polynomial forms of small operators") {
    // y'' = 0 -> delta(delta - 1)
    auto y2 = DifferentialOperator::standard({RationalFunction(), RationalFunction()});
    auto d = to_delta_poly(y2);
    REQUIRE(d.order() == 2);
    CHECK(d.delta_coeffs()[0] == poly({q(1)}));
    CHECK(d.delta_coeffs()[1] == poly({q(-1)}));
    CHECK(d.delta_coeffs()[2].is_zero());
    // y' = y / z -> delta - 1
    auto y1 = DifferentialOperator::standard({rf({q(1)}, {q(0), q(1)})});
    auto d1 = to_delta_poly(y1);
    CHECK(d1.delta_coeffs()[0] == poly({q(1)}));
    CHECK(d1.delta_coeffs()[1] == poly({q(-1)}));
}

TEST_CASE("gauss theta form and indicial data") {
    auto op = gauss_exact();
    auto th = to_theta_form(op);
    REQUIRE(th.theta_coeffs().size() == 2);
    // delta (delta + c - 1) and -(delta + a)(delta + b)
    CHECK(th.theta_coeffs()[0] == poly({q(0), q(-3, 4), q(1)}));
    CHECK(th.theta_coeffs()[1] == poly({q(-1, 6), q(-5, 6), q(-1)}));
    CHECK_FALSE(th.irregular_at_zero());
    auto dp = to_delta_poly(op);
    CHECK(dp.delta_coeffs()[0].evaluate(q(0)) != q(0));
    CHECK(dp.delta_coeffs()[0] == poly({q(-1), q(1)}));

    auto at0 = indicial_data(op, q(0));
    REQUIRE(at0.exponents.size() == 2);
    CHECK(at0.exponents[0] == q(0));
    CHECK(at0.exponents[1] == q(3, 4));  // 1 - c
    CHECK(at0.generic_probe == Genericity::Generic);
    auto at1 = indicial_data(op, q(1));
    REQUIRE(at1.exponents.size() == 2);
    CHECK(at1.exponents[0] == q(-7, 12));  // c - a - b
    CHECK(at1.exponents[1] == q(0));
    CHECK(at1.fuchsian_at_point);
}

TEST_CASE("irregular theta form is flagged not rejected") {
    // delta - z^2 delta^2: deg P_2 > deg P_0 is accepted with degree bookkeeping
    auto dp = DifferentialOperator::delta_poly({poly({q(0), q(0), q(-1)}), poly({q(1)}), poly({})});
    auto th = to_theta_form(dp);
    CHECK(th.irregular_at_zero());
    // y'' = y / z^4 is irregular at 0
    auto op = DifferentialOperator::standard({rf({q(1)}, {q(0), q(0), q(0), q(0), q(1)}), RationalFunction()});
    CHECK(to_theta_form(op).irregular_at_zero());
    CHECK_THROWS_AS(genericity_probe(op, q(0)), PreconditionError);
    auto rep = indicial_data(op, q(0));
    CHECK_FALSE(rep.fuchsian_at_point);
    CHECK(rep.generic_probe == Genericity::Undetermined);
}

TEST_CASE("round trip standard -> delta -> standard is exact") {
    Gen g(21);
    for (int trial = 0; trial < 40; ++trial) {
        const int m = static_cast<int>(g.integer(1, 3));
        std::vector<RationalFunction> qs;
        for (int i = 0; i < m; ++i) {
            qs.emplace_back(g.polynomial(static_cast<int>(g.integer(0, 2)), trial % 2 == 0),
                            g.polynomial(static_cast<int>(g.integer(0, 3)), false));
        }
        auto op = DifferentialOperator::standard(qs);
        auto back = to_standard(to_delta_poly(op));
        for (int i = 0; i < m; ++i) CHECK(back.q()[i] == op.q()[i]);
        auto back2 = to_standard(to_theta_form(op));
        for (int i = 0; i < m; ++i) CHECK(back2.q()[i] == op.q()[i]);
    }
}

TEST_CASE("ordinary points have exponents 0..m-1") {
    Gen g(22);
    for (int trial = 0; trial < 25; ++trial) {
        auto op = trial % 2 ? random_fuchsian2(g) : gauss_standard(Scalar::exact(g.fractional(), 0),
                                                                    Scalar::exact(g.fractional(), 0),
                                                                    Scalar::exact(g.fractional(), 0));
        Scalar t = g.scalar(true);
        if (!is_ordinary_point(op, t)) continue;
        auto rep = indicial_data(op, t);
        REQUIRE(rep.exponents.size() == static_cast<std::size_t>(op.order()));
        for (int i = 0; i < op.order(); ++i) CHECK(rep.exponents[i] == q(i));
        CHECK(rep.ordinary);
        CHECK_THROWS_AS(genericity_probe(op, t), PreconditionError);
    }
}

TEST_CASE("recenter translates singular points") {
    auto op = gauss_exact();
    auto s = singular_points(recenter(op, q(1, 5)));
    REQUIRE(s.size() == 2);
    CHECK(s.points[0] == q(-1, 5));
    CHECK(s.points[1] == q(4, 5));
    CHECK(to_standard(recenter(op, q(0))).q()[0] == op.q()[0]);
    Gen g(23);
    for (int trial = 0; trial < 20; ++trial) {
        auto r = random_fuchsian2(g);
        Scalar z0 = g.scalar(true);
        auto there = recenter(r, z0);
        auto back = recenter(there, -z0);
        for (int i = 0; i < 2; ++i) CHECK(back.q()[i] == r.q()[i]);
        auto s0 = singular_points(r), s1 = singular_points(there);
        REQUIRE(s0.size() == s1.size());
        for (std::size_t i = 0; i < s0.size(); ++i) CHECK(s1.points[i] == s0.points[i] - z0);
    }
    // float backend within dedup tolerance
    auto fop = op.to(Backend::floating(53));
    auto fs = singular_points(recenter(fop, Scalar::from_double(0.2, 0, Backend::floating(53))));
    REQUIRE(fs.size() == 2);
    CHECK(near(fs.points[0].to_complex().real(), -0.2, fs.dedup_tolerance));
    CHECK(near(fs.points[1].to_complex().real(), 0.8, fs.dedup_tolerance));
}

TEST_CASE("singular points of small operators") {
    auto op = gauss_exact();
    auto s = singular_points(op);
    REQUIRE(s.size() == 2);
    CHECK(s.points[0] == q(0));
    CHECK(s.points[1] == q(1));
    auto yy = DifferentialOperator::standard({RationalFunction::constant(q(1)), RationalFunction()});
    CHECK(singular_points(yy).size() == 0);
    auto pole = DifferentialOperator::standard({RationalFunction(), rf({q(2)}, {q(1), q(-1)})});
    auto sp = singular_points(pole);
    REQUIRE(sp.size() == 1);
    CHECK(sp.points[0] == q(1));
}

TEST_CASE("fuchs criterion") {
    auto rep = is_fuchsian(gauss_exact());
    CHECK(rep.fuchsian);
    REQUIRE(rep.points.size() == 2);
    CHECK(rep.points[0].pole_orders == std::vector<int>{1, 1});
    CHECK(rep.regular_at_infinity);
    auto bad = DifferentialOperator::standard({rf({q(1)}, {q(0), q(0), q(0), q(0), q(1)}), RationalFunction()});
    auto br = is_fuchsian(bad);
    CHECK_FALSE(br.fuchsian);
    CHECK(br.points[0].pole_orders[1] == 4);
    auto free = DifferentialOperator::standard({RationalFunction(), RationalFunction()});
    CHECK(is_fuchsian(free).fuchsian);
    // y'' = y: irregular at infinity, still Fuchsian on the finite plane
    auto yy = DifferentialOperator::standard({RationalFunction::constant(q(1)), RationalFunction()});
    auto yr = is_fuchsian(yy);
    CHECK(yr.fuchsian);
    CHECK_FALSE(yr.regular_at_infinity);
}

TEST_CASE("genericity probe") {
    auto g0 = genericity_probe(gauss_exact(), q(0));
    CHECK(g0.verdict == Genericity::Generic);
    CHECK(g0.holomorphic_dimension == 1);
    // basis {1, 1/(1-z)}
    auto pole = DifferentialOperator::standard({RationalFunction(), rf({q(2)}, {q(1), q(-1)})});
    auto g1 = genericity_probe(pole, q(1));
    CHECK(g1.verdict == Genericity::Generic);
    // Euler operator with basis {1, z^2}: both extend, so not generic
    auto euler = DifferentialOperator::theta({poly({q(0), q(-2), q(1)})});
    CHECK(genericity_probe(euler, q(0)).verdict == Genericity::NotGeneric);
    // y'' = -y'/z: basis {1, log z}; exponents 0,0 with one holomorphic solution
    auto bessel0 = DifferentialOperator::standard({RationalFunction(), rf({q(-1)}, {q(0), q(1)})});
    auto gb = genericity_probe(bessel0, q(0));
    CHECK(gb.verdict == Genericity::Generic);
    // Gauss with c = -3 (resonant): exponents 0 and 4, series at 0 blocks at n = 4
    auto resonant = gauss_standard(q(1, 2), q(1, 3), q(-3));
    auto gr = genericity_probe(resonant, q(0));
    CHECK(gr.resonant_indices == std::vector<long>{4});
    CHECK(gr.verdict == Genericity::Generic);
    CHECK(gr.holomorphic_dimension == 1);
    // Gauss with c = -3, a = -2: the obstruction vanishes, two holomorphic solutions
    auto poly_case = gauss_standard(q(-2), q(1, 3), q(-3));
    CHECK(genericity_probe(poly_case, q(0)).verdict == Genericity::NotGeneric);
    // exponents with no nonnegative integer: nothing extends
    auto none = DifferentialOperator::theta({poly({q(1, 6), q(-5, 6), q(1)}), poly({q(1)})});
    CHECK(genericity_probe(none, q(0)).verdict == Genericity::NotGeneric);
    // y'' = 0 at an ordinary point
    auto free = DifferentialOperator::standard({RationalFunction(), RationalFunction()});
    CHECK_THROWS_AS(genericity_probe(free, q(1, 2)), PreconditionError);
    // float backend agrees
    CHECK(genericity_probe(gauss_exact().to(Backend::floating(53)), q(0)).verdict == Genericity::Generic);
}

TEST_CASE("genericity for order 3") {
    // delta (delta - 1) (delta - 1/2): exponents 0, 1 extend, 1/2 does not
    auto op = DifferentialOperator::theta({poly({q(0), q(1, 2), q(-3, 2), q(1)})});
    auto r = genericity_probe(op, q(0));
    CHECK(r.verdict == Genericity::Generic);
    CHECK(r.holomorphic_dimension == 2);
    // adding z * 1 obstructs the exponent-0 series; order 3 stays undetermined
    auto obstructed = DifferentialOperator::theta({poly({q(0), q(1, 2), q(-3, 2), q(1)}), poly({q(1)})});
    auto ro = genericity_probe(obstructed, q(0));
    CHECK(ro.verdict == Genericity::Undetermined);
    CHECK(ro.holomorphic_dimension == 1);
    // only one nonnegative integer exponent
    auto op2 = DifferentialOperator::theta({poly({q(0), q(1, 6), q(-5, 6), q(1)})});
    CHECK(genericity_probe(op2, q(0)).verdict == Genericity::NotGeneric);
}

TEST_CASE("companion and adjoint matrices") {
    auto op = gauss_exact();
    auto a = companion_matrix(op);
    CHECK(a[0][0].is_zero());
    CHECK(a[0][1] == RationalFunction::constant(q(1)));
    CHECK(a[1][0] == op.q()[0]);
    CHECK(a[1][1] == op.q()[1]);
    auto adj = adjoint_matrix(adjoint_matrix(a));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(adj[i][j] == a[i][j]);
    auto z = companion_matrix(DifferentialOperator::standard({RationalFunction(), RationalFunction()}));
    CHECK(z[1][0].is_zero());
    CHECK(z[1][1].is_zero());
}
