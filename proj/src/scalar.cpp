#include "fuchs/scalar.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <utility>

namespace fuchs {

Backend Backend::floating(unsigned bits) {
    if (bits < MPFR_PREC_MIN || bits > 1u << 20) {
        throw DomainError("float precision_bits out of range: " + std::to_string(bits));
    }
    return {BackendKind::Float, bits};
}

std::string Backend::describe() const {
    if (is_exact()) return "exact";
    return "float(" + std::to_string(precision_bits) + ")";
}

// ---------------------------------------------------------------------------
// BigFloat

BigFloat::BigFloat(unsigned bits) {
    mpfr_init2(v_, bits);
    mpfr_set_zero(v_, 1);
}

BigFloat::BigFloat(double v, unsigned bits) {
    mpfr_init2(v_, bits);
    mpfr_set_d(v_, v, MPFR_RNDN);
}

BigFloat::BigFloat(const mpq_class& q, unsigned bits) {
    mpfr_init2(v_, bits);
    mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
}

BigFloat::BigFloat(const std::string& decimal, unsigned bits) {
    mpfr_init2(v_, bits);
    if (mpfr_set_str(v_, decimal.c_str(), 10, MPFR_RNDN) != 0) {
        mpfr_clear(v_);
        throw ParseError("not a decimal number: '" + decimal + "'");
    }
}

BigFloat::BigFloat(const BigFloat& other) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_swap(v_, other.v_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
    if (this != &other) {
        mpfr_set_prec(v_, mpfr_get_prec(other.v_));
        mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
    mpfr_swap(v_, other.v_);
    return *this;
}

BigFloat::~BigFloat() { mpfr_clear(v_); }

mpq_class BigFloat::to_rational() const {
    if (!is_finite()) throw DomainError("non-finite float cannot be made exact");
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), v_);
    return q;
}

std::string BigFloat::to_string(int digits) const {
    if (digits <= 0) {
        // enough decimal digits to round-trip
        digits = static_cast<int>(std::ceil(precision() * 0.30103)) + 1;
    }
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Rg", digits, v_);
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
}

namespace {
unsigned max_prec(const BigFloat& a, const BigFloat& b) {
    return a.precision() > b.precision() ? a.precision() : b.precision();
}
}  // namespace

BigFloat BigFloat::operator-() const {
    BigFloat r(precision());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
}

BigFloat operator+(const BigFloat& a, const BigFloat& b) {
    BigFloat r(max_prec(a, b));
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}

BigFloat operator-(const BigFloat& a, const BigFloat& b) {
    BigFloat r(max_prec(a, b));
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}

BigFloat operator*(const BigFloat& a, const BigFloat& b) {
    BigFloat r(max_prec(a, b));
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}

BigFloat operator/(const BigFloat& a, const BigFloat& b) {
    BigFloat r(max_prec(a, b));
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}

BigFloat BigFloat::with_precision(unsigned bits) const {
    BigFloat r(bits);
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
}

BigFloat BigFloat::sqrt(const BigFloat& x) {
    BigFloat r(x.precision());
    mpfr_sqrt(r.v_, x.v_, MPFR_RNDN);
    return r;
}

BigFloat BigFloat::hypot(const BigFloat& x, const BigFloat& y) {
    BigFloat r(max_prec(x, y));
    mpfr_hypot(r.v_, x.v_, y.v_, MPFR_RNDN);
    return r;
}

// ---------------------------------------------------------------------------
// Scalar

Scalar::Scalar() : v_(ExactPart{0, 0}) {}

Scalar::Scalar(long v, Backend backend) : Scalar(mpq_class(v), mpq_class(0), backend) {}

Scalar::Scalar(const mpq_class& re, const mpq_class& im, Backend backend) {
    if (backend.is_exact()) {
        v_ = ExactPart{re, im};
    } else {
        v_ = FloatPart{BigFloat(re, backend.precision_bits), BigFloat(im, backend.precision_bits)};
    }
}

Scalar Scalar::exact(const mpq_class& re, const mpq_class& im) { return Scalar(ExactPart{re, im}); }

Scalar Scalar::rational(long num, long den, Backend backend) {
    if (den == 0) throw DomainError("zero denominator");
    mpq_class q(num, den);
    q.canonicalize();
    return Scalar(q, 0, backend);
}

Scalar Scalar::from_double(double re, double im, Backend backend) {
    if (!std::isfinite(re) || !std::isfinite(im)) throw DomainError("non-finite scalar");
    if (backend.is_exact()) return Scalar(ExactPart{mpq_class(re), mpq_class(im)});
    return Scalar(FloatPart{BigFloat(re, backend.precision_bits), BigFloat(im, backend.precision_bits)});
}

Scalar Scalar::from_bigfloat(BigFloat re, BigFloat im) {
    if (re.precision() != im.precision()) throw BackendMismatch("component precisions differ");
    return Scalar(FloatPart{std::move(re), std::move(im)});
}

Backend Scalar::backend() const {
    if (auto f = std::get_if<FloatPart>(&v_)) return {BackendKind::Float, f->re.precision()};
    return Backend::exact();
}

void Scalar::check_same(const Scalar& o) const {
    if (v_.index() != o.v_.index() || backend() != o.backend()) {
        throw BackendMismatch("mixed scalar backends: " + backend().describe() + " and " +
                              o.backend().describe());
    }
}

bool Scalar::is_zero() const {
    if (auto e = std::get_if<ExactPart>(&v_)) return sgn(e->re) == 0 && sgn(e->im) == 0;
    const auto& f = std::get<FloatPart>(v_);
    return f.re.is_zero() && f.im.is_zero();
}

bool Scalar::is_real() const {
    if (auto e = std::get_if<ExactPart>(&v_)) return sgn(e->im) == 0;
    return std::get<FloatPart>(v_).im.is_zero();
}

bool Scalar::is_integer() const {
    auto e = std::get_if<ExactPart>(&v_);
    return e && sgn(e->im) == 0 && e->re.get_den() == 1;
}

bool Scalar::negligible(double tol) const {
    if (is_exact()) return is_zero();
    return abs() <= tol;
}

const mpq_class& Scalar::re_rational() const {
    if (auto e = std::get_if<ExactPart>(&v_)) return e->re;
    throw BackendMismatch("re_rational() on a float scalar");
}

const mpq_class& Scalar::im_rational() const {
    if (auto e = std::get_if<ExactPart>(&v_)) return e->im;
    throw BackendMismatch("im_rational() on a float scalar");
}

BigFloat Scalar::re_float() const {
    if (auto f = std::get_if<FloatPart>(&v_)) return f->re;
    throw BackendMismatch("re_float() on an exact scalar");
}

BigFloat Scalar::im_float() const {
    if (auto f = std::get_if<FloatPart>(&v_)) return f->im;
    throw BackendMismatch("im_float() on an exact scalar");
}

std::complex<double> Scalar::to_complex() const {
    // through MPFR: correctly rounded, and huge values saturate to +-inf cleanly
    if (auto e = std::get_if<ExactPart>(&v_)) return {BigFloat(e->re, 53).to_double(), BigFloat(e->im, 53).to_double()};
    const auto& f = std::get<FloatPart>(v_);
    return {f.re.to_double(), f.im.to_double()};
}

double Scalar::abs() const {
    if (auto f = std::get_if<FloatPart>(&v_)) return BigFloat::hypot(f->re, f->im).to_double();
    const auto& e = std::get<ExactPart>(v_);
    // hypot through 64-bit MPFR keeps huge exact values from overflowing early
    return BigFloat::hypot(BigFloat(e.re, 64), BigFloat(e.im, 64)).to_double();
}

Scalar Scalar::real_part() const {
    if (auto e = std::get_if<ExactPart>(&v_)) return Scalar(ExactPart{e->re, 0});
    const auto& f = std::get<FloatPart>(v_);
    return Scalar(FloatPart{f.re, BigFloat(f.re.precision())});
}

Scalar Scalar::imag_part() const {
    if (auto e = std::get_if<ExactPart>(&v_)) return Scalar(ExactPart{e->im, 0});
    const auto& f = std::get<FloatPart>(v_);
    return Scalar(FloatPart{f.im, BigFloat(f.im.precision())});
}

Scalar Scalar::conj() const {
    if (auto e = std::get_if<ExactPart>(&v_)) return Scalar(ExactPart{e->re, -e->im});
    const auto& f = std::get<FloatPart>(v_);
    return Scalar(FloatPart{f.re, -f.im});
}

Scalar Scalar::norm() const {
    if (auto e = std::get_if<ExactPart>(&v_)) return Scalar(ExactPart{e->re * e->re + e->im * e->im, 0});
    const auto& f = std::get<FloatPart>(v_);
    return Scalar(FloatPart{f.re * f.re + f.im * f.im, BigFloat(f.re.precision())});
}

Scalar Scalar::pow(long e) const {
    if (e < 0) return Scalar::one(backend()) / pow(-e);
    Scalar result = Scalar::one(backend());
    Scalar base = *this;
    while (e > 0) {
        if (e & 1) result *= base;
        e >>= 1;
        if (e) base *= base;
    }
    return result;
}

Scalar Scalar::to(Backend target) const {
    if (backend() == target) return *this;
    if (auto e = std::get_if<ExactPart>(&v_)) return Scalar(e->re, e->im, target);
    const auto& f = std::get<FloatPart>(v_);
    if (target.is_exact()) return Scalar(ExactPart{f.re.to_rational(), f.im.to_rational()});
    return Scalar(FloatPart{f.re.with_precision(target.precision_bits), f.im.with_precision(target.precision_bits)});
}

std::string Scalar::str() const {
    std::ostringstream os;
    if (auto e = std::get_if<ExactPart>(&v_)) {
        os << e->re.get_str();
        if (sgn(e->im) != 0) os << (sgn(e->im) > 0 ? "+" : "") << e->im.get_str() << "i";
        return os.str();
    }
    const auto& f = std::get<FloatPart>(v_);
    os << f.re.to_string(17);
    if (!f.im.is_zero()) os << (f.im.sign() > 0 ? "+" : "") << f.im.to_string(17) << "i";
    return os.str();
}

Scalar Scalar::operator-() const {
    if (auto e = std::get_if<ExactPart>(&v_)) return Scalar(ExactPart{-e->re, -e->im});
    const auto& f = std::get<FloatPart>(v_);
    return Scalar(FloatPart{-f.re, -f.im});
}

Scalar& Scalar::operator+=(const Scalar& o) {
    check_same(o);
    if (auto e = std::get_if<ExactPart>(&v_)) {
        const auto& oe = std::get<ExactPart>(o.v_);
        e->re += oe.re;
        e->im += oe.im;
    } else {
        auto& f = std::get<FloatPart>(v_);
        const auto& of = std::get<FloatPart>(o.v_);
        f.re = f.re + of.re;
        f.im = f.im + of.im;
    }
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
    check_same(o);
    if (auto e = std::get_if<ExactPart>(&v_)) {
        const auto& oe = std::get<ExactPart>(o.v_);
        e->re -= oe.re;
        e->im -= oe.im;
    } else {
        auto& f = std::get<FloatPart>(v_);
        const auto& of = std::get<FloatPart>(o.v_);
        f.re = f.re - of.re;
        f.im = f.im - of.im;
    }
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
    check_same(o);
    if (auto e = std::get_if<ExactPart>(&v_)) {
        const auto& oe = std::get<ExactPart>(o.v_);
        if (sgn(e->im) == 0 && sgn(oe.im) == 0) {
            e->re *= oe.re;
            return *this;
        }
        mpq_class re = e->re * oe.re - e->im * oe.im;
        mpq_class im = e->re * oe.im + e->im * oe.re;
        e->re = std::move(re);
        e->im = std::move(im);
    } else {
        auto& f = std::get<FloatPart>(v_);
        const auto& of = std::get<FloatPart>(o.v_);
        BigFloat re = f.re * of.re - f.im * of.im;
        BigFloat im = f.re * of.im + f.im * of.re;
        f.re = std::move(re);
        f.im = std::move(im);
    }
    return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
    check_same(o);
    if (o.is_zero()) throw DomainError("division by zero scalar");
    if (auto e = std::get_if<ExactPart>(&v_)) {
        const auto& oe = std::get<ExactPart>(o.v_);
        if (sgn(oe.im) == 0) {
            e->re /= oe.re;
            e->im /= oe.re;
            return *this;
        }
        mpq_class den = oe.re * oe.re + oe.im * oe.im;
        mpq_class re = (e->re * oe.re + e->im * oe.im) / den;
        mpq_class im = (e->im * oe.re - e->re * oe.im) / den;
        e->re = std::move(re);
        e->im = std::move(im);
    } else {
        auto& f = std::get<FloatPart>(v_);
        const auto& of = std::get<FloatPart>(o.v_);
        if (of.im.is_zero()) {
            f.re = f.re / of.re;
            f.im = f.im / of.re;
            return *this;
        }
        // Smith's algorithm to limit overflow in the denominator
        if (mpfr_cmpabs(of.re.raw(), of.im.raw()) >= 0) {
            BigFloat r = of.im / of.re;
            BigFloat d = of.re + of.im * r;
            BigFloat re = (f.re + f.im * r) / d;
            BigFloat im = (f.im - f.re * r) / d;
            f.re = std::move(re);
            f.im = std::move(im);
        } else {
            BigFloat r = of.re / of.im;
            BigFloat d = of.re * r + of.im;
            BigFloat re = (f.re * r + f.im) / d;
            BigFloat im = (f.im * r - f.re) / d;
            f.re = std::move(re);
            f.im = std::move(im);
        }
    }
    return *this;
}

bool operator==(const Scalar& a, const Scalar& b) {
    a.check_same(b);
    if (auto e = std::get_if<Scalar::ExactPart>(&a.v_)) {
        const auto& be = std::get<Scalar::ExactPart>(b.v_);
        return e->re == be.re && e->im == be.im;
    }
    const auto& f = std::get<Scalar::FloatPart>(a.v_);
    const auto& bf = std::get<Scalar::FloatPart>(b.v_);
    return f.re == bf.re && f.im == bf.im;
}

mpq_class parse_rational(const std::string& raw) {
    std::string text;
    for (char ch : raw) {
        if (ch != ' ' && ch != '+') text.push_back(ch);
        else if (ch == '+' && !text.empty() && text.back() != 'e' && text.back() != 'E') {
            throw ParseError("not a rational literal: '" + raw + "'");
        }
    }
    if (text.empty()) throw ParseError("empty rational literal");
    mpq_class q;
    if (text.find_first_of(".eE") == std::string::npos) {
        if (q.set_str(text, 10) != 0) throw ParseError("not a rational literal: '" + raw + "'");
        if (q.get_den() == 0) throw ParseError("zero denominator in '" + raw + "'");
        q.canonicalize();
        return q;
    }
    // decimal: mantissa[.fraction][e exponent], converted exactly
    std::size_t epos = text.find_first_of("eE");
    std::string mant = text.substr(0, epos);
    long exponent = 0;
    if (epos != std::string::npos) {
        const std::string exp_text = text.substr(epos + 1);
        char* end = nullptr;
        exponent = std::strtol(exp_text.c_str(), &end, 10);
        if (exp_text.empty() || *end != '\0') throw ParseError("bad exponent in '" + raw + "'");
    }
    bool negative = false;
    if (!mant.empty() && mant[0] == '-') {
        negative = true;
        mant.erase(0, 1);
    }
    std::string digits;
    long frac_len = 0;
    bool seen_dot = false;
    for (char ch : mant) {
        if (ch == '.') {
            if (seen_dot) throw ParseError("bad decimal '" + raw + "'");
            seen_dot = true;
        } else if (ch >= '0' && ch <= '9') {
            digits.push_back(ch);
            if (seen_dot) ++frac_len;
        } else {
            throw ParseError("bad decimal '" + raw + "'");
        }
    }
    if (digits.empty()) throw ParseError("bad decimal '" + raw + "'");
    mpz_class num(digits, 10);
    long scale = exponent - frac_len;
    mpz_class ten_pow;
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
    if (scale >= 0) {
        q = mpq_class(num * ten_pow);
    } else {
        q = mpq_class(num, ten_pow);
        q.canonicalize();
    }
    return negative ? mpq_class(-q) : q;
}

}  // namespace fuchs
