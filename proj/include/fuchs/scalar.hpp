#pragma once

#include <complex>
#include <string>
#include <variant>

#include <gmpxx.h>
#include <mpfr.h>

#include "fuchs/error.hpp"

namespace fuchs {

enum class BackendKind { Exact, Float };

/// Arithmetic backend of a Scalar. Two float backends with different
/// precisions are different backends.
struct Backend {
    BackendKind kind = BackendKind::Exact;
    unsigned precision_bits = 0;

    static Backend exact() { return {BackendKind::Exact, 0}; }
    static Backend floating(unsigned bits = 53);

    bool is_exact() const { return kind == BackendKind::Exact; }
    std::string describe() const;

    friend bool operator==(const Backend&, const Backend&) = default;
};

/// Owning wrapper around an mpfr_t. Results of binary operations carry the
/// larger of the operand precisions.
class BigFloat {
public:
    explicit BigFloat(unsigned bits = 53);
    BigFloat(double v, unsigned bits);
    BigFloat(const mpq_class& q, unsigned bits);
    BigFloat(const std::string& decimal, unsigned bits);
    BigFloat(const BigFloat& other);
    BigFloat(BigFloat&& other) noexcept;
    BigFloat& operator=(const BigFloat& other);
    BigFloat& operator=(BigFloat&& other) noexcept;
    ~BigFloat();

    unsigned precision() const { return static_cast<unsigned>(mpfr_get_prec(v_)); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    mpq_class to_rational() const;
    std::string to_string(int digits = 0) const;
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    BigFloat operator-() const;
    friend BigFloat operator+(const BigFloat& a, const BigFloat& b);
    friend BigFloat operator-(const BigFloat& a, const BigFloat& b);
    friend BigFloat operator*(const BigFloat& a, const BigFloat& b);
    friend BigFloat operator/(const BigFloat& a, const BigFloat& b);
    friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
    friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.v_, b.v_) != 0; }

    /// Copy rounded to a different precision.
    BigFloat with_precision(unsigned bits) const;

    static BigFloat sqrt(const BigFloat& x);
    static BigFloat hypot(const BigFloat& x, const BigFloat& y);

    mpfr_srcptr raw() const { return v_; }

private:
    mpfr_t v_;
};

/// A complex number, either an exact Gaussian rational or a binary floating
/// point pair of fixed precision. Arithmetic between different backends throws
/// BackendMismatch.
class Scalar {
public:
    /// Exact zero.
    Scalar();
    Scalar(long v, Backend backend);
    Scalar(const mpq_class& re, const mpq_class& im, Backend backend);

    static Scalar exact(const mpq_class& re, const mpq_class& im = 0);
    static Scalar rational(long num, long den, Backend backend);
    static Scalar from_double(double re, double im, Backend backend);
    static Scalar from_bigfloat(BigFloat re, BigFloat im);
    static Scalar zero(Backend backend) { return Scalar(0L, backend); }
    static Scalar one(Backend backend) { return Scalar(1L, backend); }

    Backend backend() const;
    bool is_exact() const { return std::holds_alternative<ExactPart>(v_); }
    bool is_zero() const;
    bool is_real() const;
    /// Exact backend only: true for a rational integer.
    bool is_integer() const;
    /// Float: true when |z| <= tol. Exact: true iff zero.
    bool negligible(double tol) const;

    const mpq_class& re_rational() const;
    const mpq_class& im_rational() const;
    BigFloat re_float() const;
    BigFloat im_float() const;

    std::complex<double> to_complex() const;
    double abs() const;
    double real_double() const { return to_complex().real(); }

    Scalar real_part() const;
    Scalar imag_part() const;
    Scalar conj() const;
    /// |z|^2 in the same backend.
    Scalar norm() const;
    Scalar pow(long e) const;
    Scalar to(Backend target) const;

    std::string str() const;

    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Scalar& o);
    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
    /// Representation equality: exact comparison of both components.
    friend bool operator==(const Scalar& a, const Scalar& b);
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

private:
    struct ExactPart {
        mpq_class re, im;
    };
    struct FloatPart {
        BigFloat re, im;
    };
    explicit Scalar(ExactPart e) : v_(std::move(e)) {}
    explicit Scalar(FloatPart f) : v_(std::move(f)) {}

    void check_same(const Scalar& o) const;

    std::variant<ExactPart, FloatPart> v_;
};

/// Parses "p/q", "p", or a decimal literal ("0.25", "1e-3") into an exact
/// rational. Decimal literals are converted exactly.
mpq_class parse_rational(const std::string& text);

}  // namespace fuchs
