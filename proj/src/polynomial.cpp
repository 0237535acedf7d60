#include "fuchs/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fuchs {

Polynomial::Polynomial(Backend backend) : backend_(backend) {}

Polynomial::Polynomial(std::vector<Scalar> coeffs, Backend backend)
    : coeffs_(std::move(coeffs)), backend_(backend) {
    for (const auto& c : coeffs_) {
        if (c.backend() != backend_) {
            throw BackendMismatch("polynomial coefficient backend " + c.backend().describe() +
                                  " differs from " + backend_.describe());
        }
    }
    normalize();
}

void Polynomial::normalize() {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

Polynomial Polynomial::constant(const Scalar& c) { return Polynomial({c}, c.backend()); }

Polynomial Polynomial::monomial(const Scalar& c, std::size_t degree) {
    std::vector<Scalar> coeffs(degree + 1, Scalar::zero(c.backend()));
    coeffs[degree] = c;
    return Polynomial(std::move(coeffs), c.backend());
}

Polynomial Polynomial::linear(const Scalar& root) {
    return Polynomial({-root, Scalar::one(root.backend())}, root.backend());
}

Polynomial Polynomial::falling_factorial(std::size_t k, Backend backend) {
    Polynomial p = constant(Scalar::one(backend));
    for (std::size_t j = 0; j < k; ++j) p = p * linear(Scalar(static_cast<long>(j), backend));
    return p;
}

Scalar Polynomial::coefficient(std::size_t i) const {
    return i < coeffs_.size() ? coeffs_[i] : Scalar::zero(backend_);
}

Scalar Polynomial::leading() const { return is_zero() ? Scalar::zero(backend_) : coeffs_.back(); }

std::size_t Polynomial::valuation() const {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (!coeffs_[i].is_zero()) return i;
    }
    return 0;
}

Scalar Polynomial::evaluate(const Scalar& z) const {
    Scalar acc = Scalar::zero(backend_);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc *= z;
        acc += *it;
    }
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) return Polynomial(backend_);
    std::vector<Scalar> d;
    d.reserve(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) {
        d.push_back(coeffs_[i] * Scalar(static_cast<long>(i), backend_));
    }
    return Polynomial(std::move(d), backend_);
}

Polynomial Polynomial::shifted(const Scalar& shift) const {
    if (shift.is_zero() || coeffs_.size() <= 1) return *this;
    // repeated synthetic division (Horner's Taylor shift)
    std::vector<Scalar> c = coeffs_;
    const std::size_t n = c.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = n - 1; j > i; --j) c[j - 1] += shift * c[j];
    }
    return Polynomial(std::move(c), backend_);
}

Polynomial Polynomial::reversed(std::size_t k) const {
    if (!is_zero() && static_cast<std::size_t>(degree()) > k) {
        throw DomainError("reversal length below polynomial degree");
    }
    std::vector<Scalar> c(k + 1, Scalar::zero(backend_));
    for (std::size_t i = 0; i < coeffs_.size(); ++i) c[k - i] = coeffs_[i];
    return Polynomial(std::move(c), backend_);
}

Polynomial Polynomial::monic() const {
    if (is_zero()) return *this;
    return scaled(Scalar::one(backend_) / leading());
}

Polynomial Polynomial::scaled(const Scalar& c) const {
    std::vector<Scalar> out = coeffs_;
    for (auto& x : out) x *= c;
    return Polynomial(std::move(out), backend_);
}

Polynomial Polynomial::divided_by_power(std::size_t k) const {
    if (is_zero()) return *this;
    if (valuation() < k) throw DomainError("polynomial not divisible by z^k");
    return Polynomial(std::vector<Scalar>(coeffs_.begin() + static_cast<long>(k), coeffs_.end()), backend_);
}

Polynomial Polynomial::to(Backend target) const {
    std::vector<Scalar> out;
    out.reserve(coeffs_.size());
    for (const auto& c : coeffs_) out.push_back(c.to(target));
    return Polynomial(std::move(out), target);
}

Polynomial Polynomial::operator-() const {
    std::vector<Scalar> out = coeffs_;
    for (auto& x : out) x = -x;
    return Polynomial(std::move(out), backend_);
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    if (o.backend_ != backend_) throw BackendMismatch("polynomial backends differ");
    if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Scalar::zero(backend_));
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    normalize();
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    if (o.backend_ != backend_) throw BackendMismatch("polynomial backends differ");
    if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Scalar::zero(backend_));
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    normalize();
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.backend_ != b.backend_) throw BackendMismatch("polynomial backends differ");
    if (a.is_zero() || b.is_zero()) return Polynomial(a.backend_);
    std::vector<Scalar> out(a.coeffs_.size() + b.coeffs_.size() - 1, Scalar::zero(a.backend_));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
        if (a.coeffs_[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return Polynomial(std::move(out), a.backend_);
}

bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.backend_ != b.backend_) throw BackendMismatch("polynomial backends differ");
    return a.coeffs_.size() == b.coeffs_.size() &&
           std::equal(a.coeffs_.begin(), a.coeffs_.end(), b.coeffs_.begin());
}

std::string Polynomial::str(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = coeffs_.size(); i-- > 0;) {
        if (coeffs_[i].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << coeffs_[i].str() << ")";
        if (i >= 1) os << "*" << var;
        if (i >= 2) os << "^" << i;
    }
    return os.str();
}

std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) throw DomainError("polynomial division by zero");
    if (a.backend() != b.backend()) throw BackendMismatch("polynomial backends differ");
    const Backend be = a.backend();
    if (a.degree() < b.degree()) return {Polynomial(be), a};
    std::vector<Scalar> rem = a.coefficients();
    const auto& bc = b.coefficients();
    const std::size_t db = bc.size() - 1;
    std::vector<Scalar> quot(rem.size() - db, Scalar::zero(be));
    const Scalar inv_lead = Scalar::one(be) / bc.back();
    for (std::size_t k = quot.size(); k-- > 0;) {
        Scalar q = rem[k + db] * inv_lead;
        if (q.is_zero()) continue;
        for (std::size_t j = 0; j <= db; ++j) rem[k + j] -= q * bc[j];
        rem[k + db] = Scalar::zero(be);
        quot[k] = std::move(q);
    }
    rem.resize(db);
    return {Polynomial(std::move(quot), be), Polynomial(std::move(rem), be)};
}

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
    if (!a.backend().is_exact()) throw BackendMismatch("polynomial gcd requires the exact backend");
    Polynomial x = a, y = b;
    while (!y.is_zero()) {
        Polynomial r = divmod(x, y).second;
        x = std::move(y);
        y = r.monic();
    }
    return x.monic();
}

int root_multiplicity(const Polynomial& p, const Scalar& t, double tol) {
    if (p.is_zero()) throw DomainError("multiplicity of a root of the zero polynomial");
    int mult = 0;
    if (p.backend().is_exact()) {
        Polynomial q = p;
        const Polynomial lin = Polynomial::linear(t);
        while (q.degree() >= 1) {
            auto [quot, rem] = divmod(q, lin);
            if (!rem.is_zero()) break;
            q = std::move(quot);
            ++mult;
        }
        return mult;
    }
    double scale = 0.0;
    for (const auto& c : p.coefficients()) scale = std::max(scale, c.abs());
    const double r = std::max(1.0, t.abs());
    Polynomial d = p;
    double factorial = 1.0;
    while (d.degree() >= 1) {
        double bound = scale * tol * std::pow(r, d.degree()) * factorial;
        if (d.evaluate(t).abs() > bound) break;
        ++mult;
        d = d.derivative();
        factorial *= mult;
    }
    return mult;
}

}  // namespace fuchs
