#pragma once

#include <string>
#include <vector>

#include "fuchs/operator.hpp"

namespace fuchs::testing {

inline Scalar q(long num, long den = 1) { return Scalar::rational(num, den, Backend::exact()); }

inline Scalar qi(long re_num, long re_den, long im_num, long im_den) {
    return Scalar::exact(mpq_class(re_num, re_den), mpq_class(im_num, im_den));
}

/// Polynomial from exact integer/rational pairs, ascending.
inline Polynomial poly(std::vector<Scalar> c) { return Polynomial(std::move(c), Backend::exact()); }

inline RationalFunction rf(std::vector<Scalar> num, std::vector<Scalar> den) {
    return RationalFunction(poly(std::move(num)), poly(std::move(den)));
}

/// z(1-z) y'' + (c - (a+b+1) z) y' - a b y = 0 in standard form.
inline DifferentialOperator gauss_standard(const Scalar& a, const Scalar& b, const Scalar& c) {
    const Backend be = a.backend();
    const Scalar one = Scalar::one(be), zero = Scalar::zero(be);
    Polynomial den({zero, one, -one}, be);
    RationalFunction q0(Polynomial({a * b}, be), den);
    RationalFunction q1(Polynomial({-c, a + b + one}, be), den);
    return DifferentialOperator::standard({q0, q1});
}

inline DifferentialOperator gauss_exact() { return gauss_standard(q(1, 2), q(1, 3), q(1, 4)); }

inline bool near(double x, double y, double tol) { return std::abs(x - y) <= tol; }

}  // namespace fuchs::testing
