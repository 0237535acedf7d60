#pragma once

#include <string>

#include "fuchs/polynomial.hpp"

namespace fuchs {

/// Quotient of polynomials with a monic, nonzero denominator. In the exact
/// backend numerator and denominator are kept coprime after every operation,
/// so representation equality is mathematical equality.
class RationalFunction {
public:
    explicit RationalFunction(Backend backend = Backend::exact());
    explicit RationalFunction(Polynomial numerator);
    RationalFunction(Polynomial numerator, Polynomial denominator);

    static RationalFunction constant(const Scalar& c);

    Backend backend() const { return num_.backend(); }
    const Polynomial& numerator() const { return num_; }
    const Polynomial& denominator() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.degree() == 0; }

    /// Throws DomainError at a pole.
    Scalar evaluate(const Scalar& z) const;
    RationalFunction derivative() const;
    /// f(z + shift)
    RationalFunction shifted(const Scalar& shift) const;
    RationalFunction to(Backend target) const;

    /// Order of the pole at t (0 when t is not a pole).
    int pole_order_at(const Scalar& t) const;
    /// deg(numerator) - deg(denominator); kZeroDegree for zero.
    int degree_at_infinity() const;

    RationalFunction operator-() const;
    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
    friend bool operator==(const RationalFunction& a, const RationalFunction& b);
    friend bool operator!=(const RationalFunction& a, const RationalFunction& b) { return !(a == b); }

    std::string str(const std::string& var = "z") const;

private:
    struct Unchecked {};
    RationalFunction(Polynomial numerator, Polynomial denominator, Unchecked);
    void normalize();

    Polynomial num_;
    Polynomial den_;
};

}  // namespace fuchs
