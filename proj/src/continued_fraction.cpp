#include "fuchs/continued_fraction.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

namespace fuchs {

ContinuedFraction::ContinuedFraction(Scalar b0, Provider terms, std::optional<long> length)
    : b0_(std::move(b0)), terms_(std::move(terms)), length_(length) {
    if (length_ && *length_ < 0) throw DomainError("negative continued fraction length");
}

CFTerm ContinuedFraction::term(long n) const {
    if (n < 1 || (length_ && n > *length_)) throw DomainError("continued fraction has no term " + std::to_string(n));
    CFTerm t = terms_(n);
    if (t.a.backend() != b0_.backend() || t.b.backend() != b0_.backend())
        throw BackendMismatch("continued fraction terms use mixed backends");
    return t;
}

std::vector<ConvergentPair> convergents(const ContinuedFraction& cf, long N) {
    if (N < 0) throw DomainError("convergents need N >= 0");
    const Backend be = cf.backend();
    std::vector<ConvergentPair> out;
    out.push_back({-1, Scalar::one(be), Scalar::zero(be)});
    out.push_back({0, cf.b0(), Scalar::one(be)});
    const long last = cf.length() ? std::min(N, *cf.length()) : N;
    for (long n = 1; n <= last; ++n) {
        const CFTerm t = cf.term(n);
        const auto& p1 = out[out.size() - 1];
        const auto& p2 = out[out.size() - 2];
        out.push_back({n, t.b * p1.A + t.a * p2.A, t.b * p1.B + t.a * p2.B});
    }
    return out;
}

const ConvergentPair& pair_at(const std::vector<ConvergentPair>& pairs, long n) {
    const long idx = n + 1;
    if (idx < 0 || idx >= static_cast<long>(pairs.size())) throw DomainError("no convergent with index " + std::to_string(n));
    return pairs[static_cast<std::size_t>(idx)];
}

long determinant_check(const ContinuedFraction& cf, const std::vector<ConvergentPair>& pairs, double rel_tol) {
    const Backend be = cf.backend();
    Scalar prod = Scalar::one(be);
    for (std::size_t i = 1; i < pairs.size(); ++i) {
        const long n = pairs[i].n;
        if (n >= 1) prod *= cf.term(n).a;
        const Scalar lhs = pairs[i].A * pairs[i - 1].B - pairs[i - 1].A * pairs[i].B;
        const Scalar rhs = ((n - 1) % 2 == 0) ? prod : -prod;
        if (be.is_exact()) {
            if (lhs != rhs) return n;
        } else if ((lhs - rhs).abs() > rel_tol * std::max(1.0, rhs.abs())) {
            return n;
        }
    }
    return -1;
}

CFEvaluation evaluate(const ContinuedFraction& cf, double tol, long N_max) {
    const Backend be = cf.backend();
    CFEvaluation ev;
    Scalar A2 = Scalar::one(be), B2 = Scalar::zero(be);
    Scalar A1 = cf.b0(), B1 = Scalar::one(be);
    std::optional<Scalar> prev = A1 / B1;
    ev.value = *prev;
    const long last = cf.length() ? std::min(N_max, *cf.length()) : N_max;
    for (long n = 1; n <= last; ++n) {
        const CFTerm t = cf.term(n);
        if (t.a.is_zero()) {
            ev.terminated_at = n;
            ev.converged = prev.has_value();
            ev.diagnostic = "zero partial numerator a_" + std::to_string(n) + ": the fraction terminates";
            return ev;
        }
        Scalar A = t.b * A1 + t.a * A2;
        Scalar B = t.b * B1 + t.a * B2;
        A2 = std::move(A1);
        B2 = std::move(B1);
        A1 = std::move(A);
        B1 = std::move(B);
        ev.n_used = n;
        if (B1.is_zero()) {
            ev.infinite_at.push_back(n);
            prev.reset();
            continue;
        }
        Scalar v = A1 / B1;
        if (prev) {
            ev.last_gap = (v - *prev).abs();
            if (ev.last_gap < tol) {
                ev.value = v;
                ev.converged = true;
                return ev;
            }
        }
        ev.value = v;
        prev = std::move(v);
    }
    if (cf.length() && last == *cf.length() && prev) {
        ev.converged = true;
        ev.diagnostic = "finite fraction evaluated exactly to its last term";
        return ev;
    }
    std::ostringstream os;
    os << "no convergence by N = " << N_max << " (last gap " << ev.last_gap << ")";
    if (!ev.infinite_at.empty()) os << "; B_n = 0 at " << ev.infinite_at.size() << " indices";
    ev.diagnostic = os.str();
    return ev;
}

Scalar evaluate_tail_truncated(const ContinuedFraction& cf, long N, const Scalar& tail) {
    if (N < 0) throw DomainError("truncation depth must be >= 0");
    Scalar v = (N == 0 ? cf.b0() : cf.term(N).b) + tail;
    for (long k = N - 1; k >= 0; --k) {
        if (v.is_zero()) throw DomainError("division by zero at depth " + std::to_string(k + 1));
        const Scalar a = cf.term(k + 1).a;
        v = (k == 0 ? cf.b0() : cf.term(k).b) + a / v;
    }
    return v;
}

ContinuedFraction from_order2_coefficients(IndexedScalar a1, IndexedScalar a2) {
    const Backend be = a1(0).backend();
    return ContinuedFraction(Scalar::zero(be), [a1, a2, be](long n) {
        return CFTerm{n == 1 ? Scalar::one(be) : a2(n - 2), a1(n - 1)};
    });
}

ContinuedFraction from_recurrence(IndexedScalar a1, IndexedScalar a2) {
    return ContinuedFraction(a1(0), [a1, a2](long n) { return CFTerm{a2(n - 1), a1(n)}; });
}

std::pair<Scalar, Scalar> reconstruct_x0_x1(const std::vector<ConvergentPair>& pairs, long n, const Scalar& a_n,
                                            const Scalar& x_n, const Scalar& x_n1) {
    if (n < 1) throw DomainError("reconstruction needs n >= 1");
    const auto& p1 = pair_at(pairs, n - 1);
    const auto& p2 = pair_at(pairs, n - 2);
    return {p1.A * x_n + a_n * p2.A * x_n1, p1.B * x_n + a_n * p2.B * x_n1};
}

namespace {

bool same(const Scalar& x, const Scalar& y, double rel_tol) {
    if (x.is_exact() && y.is_exact()) return x == y;
    return (x - y).abs() <= rel_tol * std::max(1.0, y.abs());
}

std::optional<Scalar> convergent_value(const std::vector<ConvergentPair>& pairs, long nu, bool a_over_b) {
    if (nu < 0 || nu + 1 >= static_cast<long>(pairs.size())) return std::nullopt;
    const auto& p = pair_at(pairs, nu);
    const Scalar& num = a_over_b ? p.A : p.B;
    const Scalar& den = a_over_b ? p.B : p.A;
    if (den.is_zero()) return std::nullopt;
    return num / den;
}

}  // namespace

CfEquivalenceReport cf_equivalence(const DifferentialOperator& op, const Scalar& z, long n_max, double rel_tol) {
    if (op.order() != 2) throw DomainError("cf_equivalence is defined for order 2");
    if (n_max < 3) throw DomainError("cf_equivalence needs n_max >= 3");
    const Backend be = op.backend().is_exact() && z.is_exact() ? Backend::exact()
                                                                 : (op.backend().is_exact() ? z.backend() : op.backend());
    const DifferentialOperator opb = to_standard(op.to(be));
    const Scalar zb = z.to(be);
    CfEquivalenceReport rep;

    const auto states = chain_run(opb, n_max);
    std::vector<Scalar> chain(static_cast<std::size_t>(n_max) + 1);
    for (long n = 2; n <= n_max; ++n) {
        const Scalar den = states[static_cast<std::size_t>(n)].q[1].evaluate(zb);
        if (den.is_zero()) throw DomainError("q_{1,n}(z) = 0 at n = " + std::to_string(n));
        chain[static_cast<std::size_t>(n)] = -states[static_cast<std::size_t>(n)].q[0].evaluate(zb) / den;
    }

    if (opb.q()[0].is_zero()) {
        rep.trivial = true;
        rep.all_equal = true;
        rep.explanation = "q_0 = 0: the chain ratio vanishes and the distinguished solution is constant";
        for (long n = 2; n <= n_max; ++n) {
            const Scalar& v = chain[static_cast<std::size_t>(n)];
            CfEquivalenceRow row{n, v, Scalar::zero(be), v.is_zero(), v.abs()};
            rep.all_equal = rep.all_equal && row.equal;
            rep.rows.push_back(row);
        }
        return rep;
    }

    IndexedScalar a1, a2;
    try {
        auto rec = std::make_shared<DerivativeRecurrence>(derivative_recurrence(opb, zb));
        a1 = [rec](long n) { return rec->a(1, n); };
        a2 = [rec](long n) { return rec->a(2, n); };
    } catch (const DomainError&) {
        auto table = std::make_shared<std::vector<std::vector<Scalar>>>(
            derivative_recurrence_by_basis(opb, zb, n_max + 4));
        a1 = [table](long n) { return table->at(static_cast<std::size_t>(n))[0]; };
        a2 = [table](long n) { return table->at(static_cast<std::size_t>(n))[1]; };
    }
    const ContinuedFraction cf = from_order2_coefficients(a1, a2);
    const auto pairs = convergents(cf, n_max + 3);

    bool found = false;
    for (bool a_over_b : {true, false}) {
        for (long d = -2; d <= 3 && !found; ++d) {
            bool ok = true;
            for (long n : {2L, 3L}) {
                auto v = convergent_value(pairs, n + d, a_over_b);
                ok = ok && v && same(chain[static_cast<std::size_t>(n)], *v, rel_tol);
            }
            if (ok) {
                found = true;
                rep.offset = d;
                rep.orientation = a_over_b ? "A/B" : "B/A";
            }
        }
        if (found) break;
    }
    if (!found) {
        rep.explanation = "no convergent index matches the chain ratio at n = 2 and 3";
        return rep;
    }
    rep.all_equal = true;
    const bool a_over_b = rep.orientation == "A/B";
    for (long n = 2; n <= n_max; ++n) {
        CfEquivalenceRow row;
        row.n = n;
        row.chain_value = chain[static_cast<std::size_t>(n)];
        auto v = convergent_value(pairs, n + rep.offset, a_over_b);
        if (v) {
            row.cf_value = *v;
            row.equal = same(row.chain_value, *v, rel_tol);
            row.discrepancy = (row.chain_value - *v).abs();
        } else {
            row.discrepancy = std::numeric_limits<double>::infinity();
        }
        rep.all_equal = rep.all_equal && row.equal;
        rep.rows.push_back(std::move(row));
    }
    std::ostringstream os;
    os << "-q_{0,n}/q_{1,n} = " << rep.orientation << " of convergent n" << (rep.offset >= 0 ? "+" : "") << rep.offset;
    rep.explanation = os.str();
    return rep;
}

Scalar monster_ratio_eval(const std::function<Scalar(int, long)>& coeff, int m, long D, const Scalar& tail) {
    if (m < 2) throw DomainError("the generalized fraction needs m >= 2");
    if (D < 1) throw DomainError("depth must be >= 1");
    const Backend be = tail.backend();
    std::vector<Scalar> r(static_cast<std::size_t>(D + m), tail);
    for (long n = D - 1; n >= 0; --n) {
        Scalar denom = coeff(1, n);
        Scalar prod = Scalar::one(be);
        for (int j = 2; j <= m; ++j) {
            prod *= r[static_cast<std::size_t>(n + j - 1)];
            denom += coeff(j, n) * prod;
        }
        if (denom.is_zero()) throw DomainError("division by zero at level " + std::to_string(n));
        r[static_cast<std::size_t>(n)] = Scalar::one(be) / denom;
    }
    return r[0];
}

Scalar monster_ratio_eval(const DerivativeRecurrence& rec, long D, std::optional<Scalar> tail) {
    const Scalar t = tail.value_or(Scalar::zero(rec.backend()));
    return monster_ratio_eval([&rec](int j, long n) { return rec.a(j, n); }, rec.order, D, t);
}

}  // namespace fuchs
