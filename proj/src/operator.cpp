#include "fuchs/operator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fuchs {

std::string to_string(OperatorForm form) {
    switch (form) {
        case OperatorForm::Standard: return "standard";
        case OperatorForm::DeltaPoly: return "delta_poly";
        case OperatorForm::Theta: return "theta";
    }
    return "unknown";
}

std::string to_string(Genericity g) {
    switch (g) {
        case Genericity::Generic: return "Generic";
        case Genericity::NotGeneric: return "NotGeneric";
        case Genericity::Undetermined: return "Undetermined";
    }
    return "unknown";
}

void sort_scalars(std::vector<Scalar>& values) {
    std::stable_sort(values.begin(), values.end(), [](const Scalar& a, const Scalar& b) {
        auto ca = a.to_complex(), cb = b.to_complex();
        if (ca.real() != cb.real()) return ca.real() < cb.real();
        return ca.imag() < cb.imag();
    });
}

// ---------------------------------------------------------------------------
// construction

namespace {

template <class T>
Backend common_backend(const std::vector<T>& items) {
    const Backend be = items.front().backend();
    for (const auto& it : items) {
        if (it.backend() != be) throw BackendMismatch("operator coefficients use mixed backends");
    }
    return be;
}

}  // namespace

DifferentialOperator DifferentialOperator::standard(std::vector<RationalFunction> q) {
    if (q.empty()) throw DomainError("standard form needs at least one coefficient");
    const Backend be = common_backend(q);
    const int m = static_cast<int>(q.size());
    return DifferentialOperator(StandardForm{std::move(q)}, m, be);
}

DifferentialOperator DifferentialOperator::delta_poly(std::vector<Polynomial> Q) {
    if (Q.empty()) throw DomainError("delta-polynomial form needs at least one coefficient");
    const Backend be = common_backend(Q);
    if (Q.front().is_zero()) throw DomainError("leading coefficient Q_0 is zero: order undefined");
    if (Q.size() < 2) throw DomainError("delta-polynomial form of order 0");
    const int m = static_cast<int>(Q.size()) - 1;
    return DifferentialOperator(DeltaPolyForm{std::move(Q)}, m, be);
}

DifferentialOperator DifferentialOperator::theta(std::vector<Polynomial> P) {
    if (P.empty()) throw DomainError("theta form needs at least one coefficient");
    const Backend be = common_backend(P);
    if (P.front().is_zero()) throw DomainError("theta form with P_0 identically zero");
    while (P.size() > 1 && P.back().is_zero()) P.pop_back();
    int m = 0;
    for (const auto& p : P) m = std::max(m, p.degree());
    if (m < 1) throw DomainError("theta form of order 0");
    return DifferentialOperator(ThetaForm{std::move(P)}, m, be);
}

OperatorForm DifferentialOperator::form() const {
    switch (data_.index()) {
        case 0: return OperatorForm::Standard;
        case 1: return OperatorForm::DeltaPoly;
        default: return OperatorForm::Theta;
    }
}

const std::vector<RationalFunction>& DifferentialOperator::q() const {
    if (auto s = std::get_if<StandardForm>(&data_)) return s->q;
    throw DomainError("operator is not in standard form");
}

const std::vector<Polynomial>& DifferentialOperator::delta_coeffs() const {
    if (auto d = std::get_if<DeltaPolyForm>(&data_)) return d->Q;
    throw DomainError("operator is not in delta-polynomial form");
}

const std::vector<Polynomial>& DifferentialOperator::theta_coeffs() const {
    if (auto t = std::get_if<ThetaForm>(&data_)) return t->P;
    throw DomainError("operator is not in theta form");
}

bool DifferentialOperator::irregular_at_zero() const {
    const auto& P = theta_coeffs();
    return P.front().degree() < order_;
}

DifferentialOperator DifferentialOperator::to(Backend target) const {
    if (target == backend_) return *this;
    switch (form()) {
        case OperatorForm::Standard: {
            std::vector<RationalFunction> out;
            for (const auto& f : q()) out.push_back(f.to(target));
            return standard(std::move(out));
        }
        case OperatorForm::DeltaPoly: {
            std::vector<Polynomial> out;
            for (const auto& p : delta_coeffs()) out.push_back(p.to(target));
            return delta_poly(std::move(out));
        }
        case OperatorForm::Theta: {
            std::vector<Polynomial> out;
            for (const auto& p : theta_coeffs()) out.push_back(p.to(target));
            return theta(std::move(out));
        }
    }
    return *this;
}

// ---------------------------------------------------------------------------
// conversions

namespace {

/// Stirling numbers of the second kind S(n, k), 0 <= k <= n.
std::vector<std::vector<long>> stirling2(int n) {
    std::vector<std::vector<long>> s(n + 1, std::vector<long>(n + 1, 0));
    s[0][0] = 1;
    for (int i = 1; i <= n; ++i) {
        for (int k = 1; k <= i; ++k) s[i][k] = k * s[i - 1][k] + s[i - 1][k - 1];
    }
    return s;
}

Polynomial lcm_poly(const Polynomial& a, const Polynomial& b) {
    Polynomial g = gcd(a, b);
    return (divmod(a, g).first * b).monic();
}

/// Least common multiple of the denominators (float: product of the distinct
/// ones) and, per input, the cofactor D / den.
struct CommonDenominator {
    Polynomial D;
    std::vector<Polynomial> cofactors;
};

CommonDenominator common_denominator(const std::vector<RationalFunction>& fs, Backend be) {
    const Polynomial one = Polynomial::constant(Scalar::one(be));
    CommonDenominator out{one, {}};
    if (be.is_exact()) {
        for (const auto& f : fs) out.D = lcm_poly(out.D, f.denominator());
        for (const auto& f : fs) out.cofactors.push_back(divmod(out.D, f.denominator()).first);
        return out;
    }
    // float: no gcd, so multiply distinct denominators and never divide
    std::vector<Polynomial> distinct;
    for (const auto& f : fs) {
        const Polynomial& den = f.denominator();
        if (den.degree() > 0 && std::find(distinct.begin(), distinct.end(), den) == distinct.end())
            distinct.push_back(den);
    }
    for (const auto& d : distinct) out.D = out.D * d;
    for (const auto& f : fs) {
        Polynomial c = one;
        bool skipped = false;
        for (const auto& d : distinct) {
            if (!skipped && d == f.denominator()) {
                skipped = true;
                continue;
            }
            c = c * d;
        }
        out.cofactors.push_back(c);
    }
    return out;
}

Polynomial exact_quotient(const Polynomial& a, const Polynomial& b) {
    auto [q, r] = divmod(a, b);
    if (a.backend().is_exact() && !r.is_zero()) throw Error("internal: inexact polynomial quotient");
    return q;
}

Polynomial monomial_z(std::size_t k, Backend be) { return Polynomial::monomial(Scalar::one(be), k); }

}  // namespace

DifferentialOperator to_standard(const DifferentialOperator& op) {
    if (op.form() == OperatorForm::Standard) return op;
    const DifferentialOperator dp = op.form() == OperatorForm::Theta ? to_delta_poly(op) : op;
    const auto& Q = dp.delta_coeffs();
    const Backend be = dp.backend();
    const int m = dp.order();
    const auto s2 = stirling2(m);
    // delta^p = sum_i S(p, i) z^i D^i, so sum_j Q_j delta^(m-j) = sum_i c_i z^i D^i
    std::vector<Polynomial> c(m + 1, Polynomial(be));
    for (int j = 0; j <= m; ++j) {
        const int p = m - j;
        for (int i = 0; i <= p; ++i) {
            if (s2[p][i] == 0) continue;
            c[i] += Q[j].scaled(Scalar(s2[p][i], be));
        }
    }
    std::vector<RationalFunction> q;
    for (int i = 0; i < m; ++i) {
        // q_i = -c_i / (Q_0 z^(m-i))
        q.emplace_back(-c[i], c[m] * monomial_z(static_cast<std::size_t>(m - i), be));
    }
    return DifferentialOperator::standard(std::move(q));
}

DifferentialOperator to_delta_poly(const DifferentialOperator& op) {
    const Backend be = op.backend();
    const int m = op.order();
    if (op.form() == OperatorForm::DeltaPoly) return op;
    if (op.form() == OperatorForm::Theta) {
        const auto& P = op.theta_coeffs();
        std::vector<Polynomial> Q(m + 1, Polynomial(be));
        for (std::size_t i = 0; i < P.size(); ++i) {
            for (int j = 0; j <= m; ++j) {
                const Scalar c = P[i].coefficient(static_cast<std::size_t>(m - j));
                if (!c.is_zero()) Q[j] += Polynomial::monomial(c, i);
            }
        }
        return DifferentialOperator::delta_poly(std::move(Q));
    }
    // Standard: multiply y^(m) = sum q_i y^(i) by z^m, use z^i D^i = [delta]_i
    const auto& q = op.q();
    std::vector<RationalFunction> r;
    for (int i = 0; i < m; ++i) {
        r.push_back(q[i] * RationalFunction(monomial_z(static_cast<std::size_t>(m - i), be)));
    }
    const CommonDenominator cd = common_denominator(r, be);
    std::vector<Polynomial> poly(m + 1, Polynomial(be));
    poly[m] = cd.D;
    for (int i = 0; i < m; ++i) poly[i] = -(r[i].numerator() * cd.cofactors[i]);
    std::vector<Polynomial> Q(m + 1, Polynomial(be));
    for (int i = 0; i <= m; ++i) {
        const Polynomial ff = Polynomial::falling_factorial(static_cast<std::size_t>(i), be);
        for (int p = 0; p <= i; ++p) {
            const Scalar c = ff.coefficient(static_cast<std::size_t>(p));
            if (!c.is_zero()) Q[m - p] += poly[i].scaled(c);
        }
    }
    if (be.is_exact()) {
        Polynomial g(be);
        for (const auto& x : Q) g = gcd(g, x);
        if (g.degree() > 0) {
            for (auto& x : Q) x = exact_quotient(x, g);
        }
    }
    const Scalar inv = Scalar::one(be) / Q[0].leading();
    for (auto& x : Q) x = x.scaled(inv);
    return DifferentialOperator::delta_poly(std::move(Q));
}

DifferentialOperator to_theta_form(const DifferentialOperator& op) {
    const Backend be = op.backend();
    if (op.form() == OperatorForm::Theta) {
        auto P = op.theta_coeffs();
        const Scalar inv = Scalar::one(be) / P.front().leading();
        for (auto& p : P) p = p.scaled(inv);
        return DifferentialOperator::theta(std::move(P));
    }
    const DifferentialOperator dp = to_delta_poly(op);
    const auto& Q = dp.delta_coeffs();
    const int m = dp.order();
    int k = 0;
    for (const auto& x : Q) k = std::max(k, x.degree());
    std::vector<Polynomial> P(static_cast<std::size_t>(k) + 1, Polynomial(be));
    for (int j = 0; j <= m; ++j) {
        for (int i = 0; i <= Q[j].degree(); ++i) {
            const Scalar c = Q[j].coefficient(static_cast<std::size_t>(i));
            if (!c.is_zero()) P[i] += Polynomial::monomial(c, static_cast<std::size_t>(m - j));
        }
    }
    // z^s sum z^(i-s) P_i(delta): the left factor z^s does not change solutions
    std::size_t s = 0;
    while (s < P.size() && P[s].is_zero()) ++s;
    P.erase(P.begin(), P.begin() + static_cast<long>(s));
    const Scalar inv = Scalar::one(be) / P.front().leading();
    for (auto& p : P) p = p.scaled(inv);
    return DifferentialOperator::theta(std::move(P));
}

DifferentialOperator recenter(const DifferentialOperator& op, const Scalar& z0) {
    if (z0.backend() != op.backend()) throw BackendMismatch("recenter point and operator backends differ");
    if (z0.is_zero()) return op;
    const DifferentialOperator st = to_standard(op);
    std::vector<RationalFunction> q;
    for (const auto& f : st.q()) q.push_back(f.shifted(z0));
    DifferentialOperator shifted = DifferentialOperator::standard(std::move(q));
    switch (op.form()) {
        case OperatorForm::Standard: return shifted;
        case OperatorForm::DeltaPoly: return to_delta_poly(shifted);
        case OperatorForm::Theta: return to_theta_form(shifted);
    }
    return shifted;
}

std::vector<Polynomial> polynomial_coefficients(const DifferentialOperator& op) {
    const DifferentialOperator st = to_standard(op);
    const Backend be = st.backend();
    const int m = st.order();
    const CommonDenominator cd = common_denominator(st.q(), be);
    std::vector<Polynomial> p(m + 1, Polynomial(be));
    p[m] = cd.D;
    for (int i = 0; i < m; ++i) p[i] = -(st.q()[i].numerator() * cd.cofactors[i]);
    return p;
}

// ---------------------------------------------------------------------------
// singular points

SingularSet singular_points(const DifferentialOperator& op, const SingularOptions& options) {
    const DifferentialOperator st = to_standard(op);
    const Backend be = st.backend();
    const Polynomial D = common_denominator(st.q(), be).D;
    SingularSet out;
    out.dedup_tolerance =
        options.dedup_tolerance >= 0 ? options.dedup_tolerance : default_dedup_tolerance(options.precision_bits);
    if (D.degree() <= 0) return out;
    RootOptions ro;
    ro.precision_bits = be.is_exact() ? options.precision_bits : be.precision_bits;
    ro.dedup_tolerance = out.dedup_tolerance;
    auto roots = find_roots(D, ro);
    // one inexact root puts the whole set in the float backend
    const bool all_exact = std::all_of(roots.begin(), roots.end(), [](const Root& r) { return r.value.is_exact(); });
    std::vector<std::pair<Scalar, double>> pts;
    for (auto& r : roots)
        pts.emplace_back(all_exact ? r.value : r.value.to(Backend::floating(ro.precision_bits)), r.residual);
    std::stable_sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        auto ca = a.first.to_complex(), cb = b.first.to_complex();
        if (ca.real() != cb.real()) return ca.real() < cb.real();
        return ca.imag() < cb.imag();
    });
    for (auto& [p, res] : pts) {
        out.points.push_back(p);
        out.residuals.push_back(res);
    }
    return out;
}

namespace {

/// Shared backend for an operator and a point: exact only if both are exact.
Backend joint_backend(const DifferentialOperator& op, const Scalar& t) {
    if (op.backend().is_exact() && t.is_exact()) return Backend::exact();
    if (!op.backend().is_exact()) return op.backend();
    return t.backend();
}

bool is_pole(const RationalFunction& f, const Scalar& t) { return f.pole_order_at(t) > 0; }

}  // namespace

bool is_ordinary_point(const DifferentialOperator& op, const Scalar& t) {
    const Backend be = joint_backend(op, t);
    const DifferentialOperator st = to_standard(op).to(be);
    const Scalar tb = t.to(be);
    for (const auto& f : st.q()) {
        if (is_pole(f, tb)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Fuchs criterion

namespace {

FuchsianPoint fuchs_at(const DifferentialOperator& st, const Scalar& t) {
    const int m = st.order();
    FuchsianPoint fp;
    fp.point = t;
    const Backend be = joint_backend(st, t);
    const Scalar tb = t.to(be);
    for (int j = 1; j <= m; ++j) {
        const RationalFunction f = st.q()[m - j].to(be);
        const int order = f.pole_order_at(tb);
        fp.pole_orders.push_back(order);
        if (order > j) fp.fuchsian = false;
    }
    return fp;
}

}  // namespace

FuchsianReport is_fuchsian(const DifferentialOperator& op) {
    const DifferentialOperator st = to_standard(op);
    const int m = st.order();
    FuchsianReport rep;
    for (const auto& t : singular_points(st).points) {
        rep.points.push_back(fuchs_at(st, t));
        if (!rep.points.back().fuchsian) rep.fuchsian = false;
    }
    for (int j = 1; j <= m; ++j) {
        const auto& f = st.q()[m - j];
        if (!f.is_zero() && f.degree_at_infinity() > -j) rep.regular_at_infinity = false;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Frobenius genericity probe

namespace {

/// Rank of a list of row vectors; sets `ambiguous` when a float pivot falls in
/// the grey zone between the two tolerances.
int matrix_rank(std::vector<std::vector<Scalar>> rows, bool& ambiguous) {
    ambiguous = false;
    if (rows.empty()) return 0;
    const std::size_t cols = rows.front().size();
    const bool exact = rows.front().empty() || rows.front().front().is_exact();
    double scale = 0.0;
    if (!exact) {
        for (const auto& r : rows)
            for (const auto& x : r) scale = std::max(scale, x.abs());
    }
    const double zero_tol = 1e-9 * scale, grey_tol = 1e-6 * scale;
    int rank = 0;
    std::size_t row = 0;
    for (std::size_t c = 0; c < cols && row < rows.size(); ++c) {
        std::size_t best = rows.size();
        double best_abs = -1.0;
        for (std::size_t r = row; r < rows.size(); ++r) {
            if (exact) {
                if (!rows[r][c].is_zero()) {
                    best = r;
                    break;
                }
            } else {
                const double a = rows[r][c].abs();
                if (a > best_abs) {
                    best_abs = a;
                    best = r;
                }
            }
        }
        if (best == rows.size()) continue;
        if (!exact) {
            if (best_abs <= zero_tol) continue;
            if (best_abs <= grey_tol) ambiguous = true;
        }
        std::swap(rows[row], rows[best]);
        for (std::size_t r = row + 1; r < rows.size(); ++r) {
            if (rows[r][c].is_zero()) continue;
            const Scalar factor = rows[r][c] / rows[row][c];
            for (std::size_t k = c; k < cols; ++k) rows[r][k] -= factor * rows[row][k];
        }
        ++row;
        ++rank;
    }
    return rank;
}

std::string join(const std::vector<long>& v) {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
    os << '}';
    return os.str();
}

}  // namespace

GenericityResult genericity_probe(const DifferentialOperator& op, const Scalar& t) {
    if (is_ordinary_point(op, t)) throw PreconditionError("t = " + t.str() + " is not a singular point");
    const Backend be = joint_backend(op, t);
    const DifferentialOperator th = to_theta_form(recenter(op.to(be), t.to(be)));
    if (th.irregular_at_zero()) {
        throw PreconditionError("t = " + t.str() + " is an irregular singular point");
    }
    const int m = op.order();
    const auto& P = th.theta_coeffs();
    const std::size_t k = P.size() - 1;
    GenericityResult res;
    const auto roots = nonnegative_integer_roots(P.front());
    res.nonnegative_integer_exponents = roots;

    int dim = 0;
    bool ambiguous = false;
    if (!roots.empty()) {
        const std::size_t params = roots.size();
        const long nmax = roots.back();
        std::vector<std::vector<Scalar>> f;
        std::vector<std::vector<Scalar>> constraints;
        std::size_t next_param = 0;
        for (long n = 0; n <= nmax; ++n) {
            std::vector<Scalar> rhs(params, Scalar::zero(be));
            for (std::size_t i = 1; i <= k && static_cast<long>(i) <= n; ++i) {
                const Scalar c = P[i].evaluate(Scalar(n - static_cast<long>(i), be));
                if (c.is_zero()) continue;
                const auto& prev = f[static_cast<std::size_t>(n) - i];
                for (std::size_t p = 0; p < params; ++p) rhs[p] -= c * prev[p];
            }
            if (std::find(roots.begin(), roots.end(), n) != roots.end()) {
                if (n > 0) {
                    res.resonant_indices.push_back(n);
                    constraints.push_back(rhs);
                }
                std::vector<Scalar> fresh(params, Scalar::zero(be));
                fresh[next_param++] = Scalar::one(be);
                f.push_back(std::move(fresh));
            } else {
                const Scalar pivot = P.front().evaluate(Scalar(n, be));
                for (auto& x : rhs) x /= pivot;
                f.push_back(std::move(rhs));
            }
        }
        dim = static_cast<int>(params) - matrix_rank(constraints, ambiguous);
    }
    res.holomorphic_dimension = ambiguous ? -1 : dim;

    std::ostringstream why;
    why << "nonnegative integer exponents " << join(roots);
    if (!res.resonant_indices.empty()) why << ", resonant pivots at n = " << join(res.resonant_indices);
    if (ambiguous) {
        res.verdict = Genericity::Undetermined;
        why << "; float rank decision inside tolerance band";
    } else if (m == 2 || dim == m - 1) {
        why << "; holomorphic solution space has dimension " << dim << " (generic needs " << (m - 1) << ")";
        res.verdict = dim == m - 1 ? Genericity::Generic : Genericity::NotGeneric;
    } else if (static_cast<int>(roots.size()) < m - 1) {
        why << "; fewer than " << (m - 1) << " nonnegative integer exponents";
        res.verdict = Genericity::NotGeneric;
    } else {
        why << "; series trial gives dimension " << dim << ", order " << m << " resonance case left undetermined";
        res.verdict = Genericity::Undetermined;
    }
    res.explanation = why.str();
    return res;
}

SingularityReport indicial_data(const DifferentialOperator& op, const Scalar& t) {
    const Backend be = joint_backend(op, t);
    const DifferentialOperator th = to_theta_form(recenter(op.to(be), t.to(be)));
    SingularityReport rep;
    rep.point = t;
    rep.indicial_polynomial = th.theta_coeffs().front();
    RootOptions ro;
    ro.precision_bits = be.is_exact() ? 53 : be.precision_bits;
    rep.exponents = expand_multiplicities(find_roots(rep.indicial_polynomial, ro));
    sort_scalars(rep.exponents);
    rep.ordinary = is_ordinary_point(op, t);
    if (rep.ordinary) {
        rep.fuchsian_at_point = true;
        rep.generic_probe = Genericity::NotGeneric;
        rep.explanation = "ordinary point";
        return rep;
    }
    rep.fuchsian_at_point = fuchs_at(to_standard(op), t).fuchsian;
    if (!rep.fuchsian_at_point || th.irregular_at_zero()) {
        rep.generic_probe = Genericity::Undetermined;
        rep.explanation = "irregular singular point";
        return rep;
    }
    GenericityResult g = genericity_probe(op, t);
    rep.generic_probe = g.verdict;
    rep.explanation = g.explanation;
    return rep;
}

// ---------------------------------------------------------------------------
// companion matrix

RationalMatrix companion_matrix(const DifferentialOperator& op) {
    const DifferentialOperator st = to_standard(op);
    const Backend be = st.backend();
    const int m = st.order();
    RationalMatrix a(m, std::vector<RationalFunction>(m, RationalFunction(be)));
    for (int i = 0; i + 1 < m; ++i) a[i][i + 1] = RationalFunction::constant(Scalar::one(be));
    for (int j = 0; j < m; ++j) a[m - 1][j] = st.q()[j];
    return a;
}

RationalMatrix adjoint_matrix(const RationalMatrix& a) {
    const std::size_t m = a.size();
    RationalMatrix out(m, std::vector<RationalFunction>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) out[i][j] = -a[j][i];
    return out;
}

}  // namespace fuchs
