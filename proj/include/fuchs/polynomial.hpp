#pragma once

#include <climits>
#include <string>
#include <utility>
#include <vector>

#include "fuchs/scalar.hpp"

namespace fuchs {

/// Dense univariate polynomial with Scalar coefficients in ascending degree.
/// The coefficient list is normalized: the leading coefficient is nonzero, and
/// the zero polynomial has no coefficients. Every polynomial carries its
/// backend so that the zero polynomial knows how to produce constants.
class Polynomial {
public:
    /// Degree reported for the zero polynomial (stands for minus infinity).
    static constexpr int kZeroDegree = INT_MIN;

    explicit Polynomial(Backend backend = Backend::exact());
    Polynomial(std::vector<Scalar> coeffs, Backend backend);

    static Polynomial constant(const Scalar& c);
    static Polynomial monomial(const Scalar& c, std::size_t degree);
    /// z - root
    static Polynomial linear(const Scalar& root);
    /// Falling factorial x (x-1) ... (x-k+1) in the given backend.
    static Polynomial falling_factorial(std::size_t k, Backend backend);

    Backend backend() const { return backend_; }
    bool is_zero() const { return coeffs_.empty(); }
    int degree() const { return is_zero() ? kZeroDegree : static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<Scalar>& coefficients() const { return coeffs_; }
    /// Coefficient of z^i; zero beyond the degree.
    Scalar coefficient(std::size_t i) const;
    Scalar leading() const;
    /// Smallest i with a nonzero coefficient; 0 for the zero polynomial.
    std::size_t valuation() const;

    Scalar evaluate(const Scalar& z) const;
    Polynomial derivative() const;
    /// p(z + shift)
    Polynomial shifted(const Scalar& shift) const;
    /// z^k p(1/z); requires k >= degree.
    Polynomial reversed(std::size_t k) const;
    Polynomial monic() const;
    Polynomial scaled(const Scalar& c) const;
    /// Divide by z^k (requires valuation >= k).
    Polynomial divided_by_power(std::size_t k) const;
    Polynomial to(Backend target) const;

    Polynomial operator-() const;
    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend bool operator==(const Polynomial& a, const Polynomial& b);
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    std::string str(const std::string& var = "z") const;

private:
    void normalize();

    std::vector<Scalar> coeffs_;
    Backend backend_;
};

/// Euclidean division a = q b + r with deg r < deg b.
std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b);

/// Monic greatest common divisor. Exact backend only; gcd(0, 0) = 0.
Polynomial gcd(const Polynomial& a, const Polynomial& b);

/// Multiplicity of root t in p (exact: by repeated exact division; float:
/// successive derivatives compared against tol relative to coefficient scale).
int root_multiplicity(const Polynomial& p, const Scalar& t, double tol = 1e-9);

}  // namespace fuchs
