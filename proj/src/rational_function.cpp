#include "fuchs/rational_function.hpp"

namespace fuchs {

RationalFunction::RationalFunction(Backend backend)
    : num_(backend), den_(Polynomial::constant(Scalar::one(backend))) {}

RationalFunction::RationalFunction(Polynomial numerator)
    : num_(std::move(numerator)), den_(Polynomial::constant(Scalar::one(num_.backend()))) {}

RationalFunction::RationalFunction(Polynomial numerator, Polynomial denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
    if (num_.backend() != den_.backend()) throw BackendMismatch("rational function backends differ");
    if (den_.is_zero()) throw DomainError("rational function with zero denominator");
    normalize();
}

RationalFunction::RationalFunction(Polynomial numerator, Polynomial denominator, Unchecked)
    : num_(std::move(numerator)), den_(std::move(denominator)) {}

RationalFunction RationalFunction::constant(const Scalar& c) {
    return RationalFunction(Polynomial::constant(c));
}

void RationalFunction::normalize() {
    const Backend be = num_.backend();
    if (num_.is_zero()) {
        den_ = Polynomial::constant(Scalar::one(be));
        return;
    }
    if (be.is_exact() && den_.degree() > 0) {
        Polynomial g = gcd(num_, den_);
        if (g.degree() > 0) {
            num_ = divmod(num_, g).first;
            den_ = divmod(den_, g).first;
        }
    }
    const Scalar lead = den_.leading();
    if (lead != Scalar::one(be)) {
        const Scalar inv = Scalar::one(be) / lead;
        num_ = num_.scaled(inv);
        den_ = den_.scaled(inv);
    }
}

Scalar RationalFunction::evaluate(const Scalar& z) const {
    Scalar d = den_.evaluate(z);
    if (d.is_zero()) throw DomainError("rational function evaluated at a pole z = " + z.str());
    return num_.evaluate(z) / d;
}

RationalFunction RationalFunction::derivative() const {
    if (is_polynomial()) return RationalFunction(num_.derivative());
    // (n/d)' = (n' d - n d') / d^2, with the common factor of d and d' removed
    // first in the exact backend to keep degrees down.
    const Backend be = backend();
    if (be.is_exact()) {
        Polynomial dprime = den_.derivative();
        Polynomial g = gcd(den_, dprime);
        Polynomial d_over_g = divmod(den_, g).first;
        Polynomial dprime_over_g = divmod(dprime, g).first;
        Polynomial top = num_.derivative() * d_over_g - num_ * dprime_over_g;
        return RationalFunction(std::move(top), den_ * d_over_g);
    }
    return RationalFunction(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
}

RationalFunction RationalFunction::shifted(const Scalar& shift) const {
    return RationalFunction(num_.shifted(shift), den_.shifted(shift));
}

RationalFunction RationalFunction::to(Backend target) const {
    return RationalFunction(num_.to(target), den_.to(target));
}

int RationalFunction::pole_order_at(const Scalar& t) const {
    int d = root_multiplicity(den_, t);
    if (d == 0) return 0;
    if (backend().is_exact() || num_.is_zero()) return d;
    // float: numerator and denominator are not reduced
    int n = root_multiplicity(num_, t);
    return d > n ? d - n : 0;
}

int RationalFunction::degree_at_infinity() const {
    if (num_.is_zero()) return Polynomial::kZeroDegree;
    return num_.degree() - den_.degree();
}

RationalFunction RationalFunction::operator-() const { return RationalFunction(-num_, den_, Unchecked{}); }

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den_ == b.den_) return RationalFunction(a.num_ + b.num_, a.den_);
    if (a.backend().is_exact()) {
        Polynomial g = gcd(a.den_, b.den_);
        Polynomial ad = divmod(a.den_, g).first;
        Polynomial bd = divmod(b.den_, g).first;
        return RationalFunction(a.num_ * bd + b.num_ * ad, ad * b.den_);
    }
    return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    if (a.is_zero()) return a;
    if (b.is_zero()) return b;
    if (a.backend().is_exact()) {
        // cross-cancel before multiplying
        Polynomial g1 = gcd(a.num_, b.den_);
        Polynomial g2 = gcd(b.num_, a.den_);
        Polynomial an = divmod(a.num_, g1).first, bd = divmod(b.den_, g1).first;
        Polynomial bn = divmod(b.num_, g2).first, ad = divmod(a.den_, g2).first;
        // coprime and monic already: quotients of monic polynomials by monic gcds
        return RationalFunction(an * bn, ad * bd, RationalFunction::Unchecked{});
    }
    return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.is_zero()) throw DomainError("rational function division by zero");
    return a * RationalFunction(b.den_, b.num_);
}

bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
}

std::string RationalFunction::str(const std::string& var) const {
    if (is_polynomial()) return num_.str(var);
    return "[" + num_.str(var) + "] / [" + den_.str(var) + "]";
}

}  // namespace fuchs
