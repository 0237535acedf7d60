#include "fuchs/chain.hpp"

#include <cmath>
#include <sstream>

namespace fuchs {

namespace {

Backend joint_backend(const DifferentialOperator& op, const Scalar& z) {
    if (op.backend().is_exact() && z.is_exact()) return Backend::exact();
    if (!op.backend().is_exact()) return op.backend();
    return z.backend();
}

Scalar factorial(long n, Backend be) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return Scalar::exact(mpq_class(f)).to(be);
}

/// Taylor basis at an ordinary point z: series i has y^(j)(z) = delta_ij.
TaylorStepper taylor_basis(const DifferentialOperator& op, const Scalar& z) {
    if (!is_ordinary_point(op, z)) throw PreconditionError("z = " + z.str() + " is a singular point");
    const Backend be = op.backend();
    const int m = op.order();
    std::vector<std::vector<Scalar>> init(m, std::vector<Scalar>(m, Scalar::zero(be)));
    for (int i = 0; i < m; ++i) init[i][i] = Scalar::one(be) / factorial(i, be);
    return TaylorStepper(to_theta_form(recenter(op, z)), std::move(init));
}

std::string describe_gap(double gap) {
    std::ostringstream os;
    os << gap;
    return os.str();
}

}  // namespace

int ChainState::max_degree() const {
    int d = 0;
    for (const auto& f : q) {
        if (f.is_zero()) continue;
        d = std::max({d, f.numerator().degree(), f.denominator().degree()});
    }
    return d;
}

Scalar ChainState::numerator_ratio(int k, int j, const Scalar& z) const {
    const Scalar den = numerators.at(static_cast<std::size_t>(j)).evaluate(z);
    if (den.is_zero()) throw DomainError("q_{j,n}(z) = 0");
    return numerators.at(static_cast<std::size_t>(k)).evaluate(z) / den;
}

ChainState chain_unit_state(const DifferentialOperator& op, long n) {
    const int m = op.order();
    if (n < 0 || n >= m) throw DomainError("unit states exist for 0 <= n < m");
    const Backend be = op.backend();
    ChainState s;
    s.n = n;
    s.q.assign(m, RationalFunction(be));
    s.q[n] = RationalFunction::constant(Scalar::one(be));
    s.numerators.assign(m, Polynomial(be));
    s.numerators[n] = Polynomial::constant(Scalar::one(be));
    return s;
}

ChainState chain_init(const DifferentialOperator& op) { return chain_unit_state(op, op.order() - 1); }

namespace {

/// N_i' D - k N_i D' + N_{i-1} D - N_{m-1} p_i over D^(k+1).
ChainState step_with(const ChainState& state, const std::vector<Polynomial>& p) {
    const int m = static_cast<int>(p.size()) - 1;
    if (static_cast<int>(state.numerators.size()) != m) throw DomainError("chain state and operator orders differ");
    const Backend be = p[m].backend();
    const Polynomial& D = p[m];
    const Polynomial dD = D.derivative();
    const Scalar k(state.power, be);
    ChainState next;
    next.n = state.n + 1;
    next.power = state.power + 1;
    const Polynomial& top = state.numerators[m - 1];
    Polynomial Dk = Polynomial::constant(Scalar::one(be));
    for (int e = 0; e < next.power; ++e) Dk = Dk * D;
    for (int i = 0; i < m; ++i) {
        const Polynomial& N = state.numerators[i];
        Polynomial v = N.derivative() * D;
        if (!N.is_zero() && state.power != 0) v -= (N * dD).scaled(k);
        if (i > 0) v += state.numerators[i - 1] * D;
        if (!top.is_zero()) v -= top * p[i];
        next.q.emplace_back(v, Dk);
        next.numerators.push_back(std::move(v));
    }
    return next;
}

std::vector<Polynomial> chain_coefficients(const DifferentialOperator& op) {
    return polynomial_coefficients(op.form() == OperatorForm::Standard ? op : to_standard(op));
}

}  // namespace

ChainState chain_step(const ChainState& state, const DifferentialOperator& op) {
    return step_with(state, chain_coefficients(op));
}

std::vector<ChainState> chain_run(const DifferentialOperator& op, long n_max) {
    const auto p = chain_coefficients(op);
    std::vector<ChainState> out;
    const int m = op.order();
    for (long n = 0; n < m && n <= n_max; ++n) out.push_back(chain_unit_state(op, n));
    for (long n = m; n <= n_max; ++n) out.push_back(step_with(out.back(), p));
    return out;
}

Scalar ratio_qkn(const ChainState& state, int k, int j, const Scalar& z) {
    const Scalar den = state.q.at(static_cast<std::size_t>(j)).evaluate(z);
    if (den.is_zero()) throw DomainError("q_{j,n}(z) = 0");
    return state.q.at(static_cast<std::size_t>(k)).evaluate(z) / den;
}

Scalar ChainValues::value(int i, long n) const {
    const Scalar& s = scaled.at(static_cast<std::size_t>(n)).at(static_cast<std::size_t>(i));
    return s * factorial(n, s.backend());
}

ChainValues chain_values(const DifferentialOperator& op, const Scalar& z, long n_max) {
    const Backend be = joint_backend(op, z);
    const DifferentialOperator opb = op.to(be);
    ChainValues out;
    out.z = z.to(be);
    TaylorStepper basis = taylor_basis(opb, out.z);
    basis.extend(n_max);
    const int m = opb.order();
    for (long n = 0; n <= n_max; ++n) {
        std::vector<Scalar> row;
        for (int i = 0; i < m; ++i) row.push_back(basis.series(i)[static_cast<std::size_t>(n)]);
        out.scaled.push_back(std::move(row));
    }
    return out;
}

LogDerivResult logderiv_limit(const DifferentialOperator& op, const Scalar& z, const LogDerivOptions& options) {
    if (op.order() != 2) throw PreconditionError("the logarithmic-derivative limit is defined for order 2");
    const Backend be = joint_backend(op, z);
    const DifferentialOperator opb = to_standard(op.to(be));
    const Scalar zb = z.to(be);
    const SingularSet sites = singular_points(opb);
    if (sites.size() == 0) throw PreconditionError("the operator has no finite singular points");
    RegionQueryResult where;
    try {
        where = classify_point(sites, zb, options.guard_tol);
    } catch (const DomainError& e) {
        throw PreconditionError(e.what());
    }
    if (!region_guard(sites, zb, options.guard_tol)) {
        throw PreconditionError("z = " + zb.str() + " lies on the bisector set A_L (distance " +
                                describe_gap(where.distance_to_AL) + ")");
    }
    LogDerivResult res;
    res.nearest_index = *where.nearest_index;
    res.nearest_site = sites.points[static_cast<std::size_t>(res.nearest_index)];
    if (!options.override_genericity) {
        const GenericityResult g = genericity_probe(opb, res.nearest_site);
        if (g.verdict != Genericity::Generic) {
            throw PreconditionError("nearest singular point " + res.nearest_site.str() + " is " +
                                    to_string(g.verdict) + ": " + g.explanation);
        }
    }

    const int m = 2;
    std::optional<TaylorStepper> basis;
    const bool symbolic_allowed = options.mode != ChainMode::Evaluate;
    std::optional<ChainState> state;
    const auto p = polynomial_coefficients(opb);
    if (symbolic_allowed) state = chain_init(opb);
    int zeros_in_row = 0;
    for (long n = m; n <= options.n_max; ++n) {
        Scalar num, den;
        if (state) {
            state = step_with(*state, p);
            num = state->numerators[0].evaluate(zb);
            den = state->numerators[1].evaluate(zb);
            if (options.mode == ChainMode::Auto && state->max_degree() > options.degree_cap) {
                state.reset();
                res.switched_at = n + 1;
            }
        } else {
            if (!basis) {
                basis.emplace(taylor_basis(opb, zb));
                basis->extend(std::max<long>(n, 64));
            }
            if (basis->last_index() < n) basis->extend(std::min(options.n_max, 2 * n));
            num = basis->series(0)[static_cast<std::size_t>(n)];
            den = basis->series(1)[static_cast<std::size_t>(n)];
        }
        if (den.is_zero()) {
            res.skipped_indices.push_back(n);
            if (++zeros_in_row >= 3) {
                throw ConvergenceError("q_{1,n}(z) vanished at three consecutive indices ending at n = " +
                                       std::to_string(n));
            }
            continue;
        }
        zeros_in_row = 0;
        Scalar v = -num / den;
        if (!res.history.empty()) res.cauchy_gap = (v - res.history.back().second).abs();
        res.history.emplace_back(n, v);
        res.value = v;
        res.n_used = n;
        if (res.history.size() >= 2 && res.cauchy_gap < options.tol) return res;
    }
    throw ConvergenceError("no convergence by n_max = " + std::to_string(options.n_max) + " (last gap " +
                           describe_gap(res.cauchy_gap) + ")");
}

Scalar verify_chain(const DifferentialOperator& op, const SeriesSolution& series, const Scalar& z, long n) {
    if (series.center != z) throw DomainError("series is not centered at z");
    if (static_cast<long>(series.coefficients.size()) <= n)
        throw DomainError("series has too few coefficients for n = " + std::to_string(n));
    if (op.backend() != series.backend()) throw BackendMismatch("series and operator backends differ");
    const Backend be = op.backend();
    const auto states = chain_run(op, n);
    const auto& f = series.coefficients;
    Scalar residual = f[static_cast<std::size_t>(n)] * factorial(n, be);
    for (int i = 0; i < op.order(); ++i)
        residual -= states.back().q[i].evaluate(z) * f[static_cast<std::size_t>(i)] * factorial(i, be);
    return residual;
}

Problem1Result problem1_probe(const DifferentialOperator& op, const std::vector<Scalar>& y1_init,
                              const std::vector<Scalar>& y2_init, const Scalar& z, long n_max, double tol,
                              double decay_tol) {
    const int m = op.order();
    if (static_cast<int>(y1_init.size()) != m || static_cast<int>(y2_init.size()) != m)
        throw DomainError("initial data must hold m derivative values");
    const Backend be = joint_backend(op, z);
    const DifferentialOperator opb = op.to(be);
    const Scalar zb = z.to(be);
    TaylorStepper basis = taylor_basis(opb, zb);
    basis.extend(n_max);
    Problem1Result res;
    for (long n = 0; n <= n_max; ++n) {
        Scalar num = Scalar::zero(be), den = Scalar::zero(be);
        for (int i = 0; i < m; ++i) {
            const Scalar& g = basis.series(i)[static_cast<std::size_t>(n)];
            num += g * y1_init[i].to(be);
            den += g * y2_init[i].to(be);
        }
        if (den.is_zero()) {
            res.zero_denominator_indices.push_back(n);
            continue;
        }
        Scalar r = num / den;
        if (!res.history.empty()) res.last_gap = (r - res.history.back().second).abs();
        res.history.emplace_back(n, r);
    }
    if (res.history.size() >= 2) res.converged = res.last_gap < tol;
    if (!res.history.empty()) res.decays = res.history.back().second.abs() < decay_tol;
    return res;
}

Scalar DerivativeRecurrence::a(int j, long n) const {
    const Backend be = backend();
    const Scalar nn(n, be);
    const Scalar d = denominator.evaluate(nn);
    if (d.is_zero()) throw DomainError("derivative recurrence is singular at n = " + std::to_string(n));
    return numerators.at(static_cast<std::size_t>(j - 1)).evaluate(nn) / d;
}

RecurrenceSystem DerivativeRecurrence::normalized() const {
    std::vector<Polynomial> nums;
    nums.push_back(-denominator);
    for (int j = 1; j < order; ++j) nums.push_back(numerators[static_cast<std::size_t>(j - 1)]);
    return RecurrenceSystem::from_coefficients(std::move(nums), numerators.back());
}

DerivativeRecurrence derivative_recurrence(const DifferentialOperator& op, const Scalar& z) {
    const Backend be = joint_backend(op, z);
    const DifferentialOperator opb = op.to(be);
    const Scalar zb = z.to(be);
    const auto p = polynomial_coefficients(opb);
    const int m = opb.order();
    for (int i = 0; i <= m; ++i) {
        if (!p[i].is_zero() && p[i].degree() > i)
            throw DomainError("derivative recurrence needs deg p_i <= i; p_" + std::to_string(i) + " has degree " +
                              std::to_string(p[i].degree()));
    }
    // derivs[i][s] = p_i^(s)(z) / s!
    std::vector<std::vector<Scalar>> derivs(m + 1);
    for (int i = 0; i <= m; ++i) {
        Polynomial d = p[i];
        for (int s = 0; s <= i; ++s) {
            derivs[i].push_back(d.evaluate(zb) / factorial(s, be));
            d = d.derivative();
        }
    }
    // c_l(n) = sum_{i >= l} C(n, i - l) p_i^(i-l)(z)
    std::vector<Polynomial> c(m + 1, Polynomial(be));
    for (int l = 0; l <= m; ++l) {
        for (int i = l; i <= m; ++i) {
            const int s = i - l;
            if (derivs[i][s].is_zero()) continue;
            c[l] += Polynomial::falling_factorial(static_cast<std::size_t>(s), be).scaled(derivs[i][s]);
        }
    }
    if (c[0].is_zero()) throw DomainError("degenerate derivative recurrence: c_0(n) vanishes identically");
    DerivativeRecurrence rec;
    rec.order = m;
    rec.z = zb;
    rec.denominator = c[0];
    for (int l = 1; l <= m; ++l) {
        // (n+1)...(n+l) = falling factorial of degree l at n + l
        const Polynomial rising = Polynomial::falling_factorial(static_cast<std::size_t>(l), be).shifted(Scalar(l, be));
        rec.numerators.push_back(-(c[l] * rising));
    }
    return rec;
}

namespace {

/// Solves M x = rhs by Gaussian elimination with pivot search.
std::vector<Scalar> solve_linear(std::vector<std::vector<Scalar>> M, std::vector<Scalar> rhs) {
    const std::size_t n = M.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = n;
        double best = -1.0;
        for (std::size_t r = col; r < n; ++r) {
            if (M[r][col].is_zero()) continue;
            const double a = M[r][col].abs();
            if (M[r][col].is_exact()) {
                piv = r;
                break;
            }
            if (a > best) {
                best = a;
                piv = r;
            }
        }
        if (piv == n) throw DomainError("singular linear system");
        std::swap(M[piv], M[col]);
        std::swap(rhs[piv], rhs[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            if (M[r][col].is_zero()) continue;
            const Scalar f = M[r][col] / M[col][col];
            for (std::size_t c = col; c < n; ++c) M[r][c] -= f * M[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<Scalar> x(n);
    for (std::size_t i = n; i-- > 0;) {
        Scalar s = rhs[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= M[i][c] * x[c];
        x[i] = s / M[i][i];
    }
    return x;
}

}  // namespace

std::vector<std::vector<Scalar>> derivative_recurrence_by_basis(const DifferentialOperator& op, const Scalar& z,
                                                                long n_max) {
    const Backend be = joint_backend(op, z);
    const DifferentialOperator opb = op.to(be);
    TaylorStepper basis = taylor_basis(opb, z.to(be));
    const int m = opb.order();
    basis.extend(n_max + m);
    std::vector<std::vector<Scalar>> out;
    for (long n = 0; n <= n_max; ++n) {
        std::vector<std::vector<Scalar>> M(m, std::vector<Scalar>(m));
        std::vector<Scalar> rhs(m);
        for (int i = 0; i < m; ++i) {
            const auto& g = basis.series(i);
            rhs[i] = g[static_cast<std::size_t>(n)];
            for (int j = 0; j < m; ++j) M[i][j] = g[static_cast<std::size_t>(n + j + 1)];
        }
        out.push_back(solve_linear(std::move(M), std::move(rhs)));
    }
    return out;
}

}  // namespace fuchs
