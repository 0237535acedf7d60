#include "fuchs/series.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fuchs {

Scalar RecurrenceSystem::coefficient(int j, long n) const {
    const Backend be = backend();
    const Scalar nn(n, be);
    const Scalar p = pivot.evaluate(nn);
    if (p.is_zero()) throw DomainError("recurrence pivot vanishes at n = " + std::to_string(n));
    return numerators.at(static_cast<std::size_t>(j)).evaluate(nn) / p;
}

RecurrenceSystem RecurrenceSystem::from_coefficients(std::vector<Polynomial> numerators, Polynomial pivot) {
    if (pivot.is_zero()) throw DomainError("recurrence pivot is identically zero");
    RecurrenceSystem rec;
    rec.order = static_cast<int>(numerators.size());
    rec.numerators = std::move(numerators);
    rec.pivot = std::move(pivot);
    const Backend be = rec.pivot.backend();
    for (const auto& num : rec.numerators) {
        if (num.backend() != be) throw BackendMismatch("recurrence coefficients use mixed backends");
        if (num.is_zero() || num.degree() < rec.pivot.degree()) {
            rec.limits.push_back(Scalar::zero(be));
        } else if (num.degree() == rec.pivot.degree()) {
            rec.limits.push_back(num.leading() / rec.pivot.leading());
        } else {
            rec.limits.push_back(Scalar::zero(be));
            rec.limits_finite = false;
        }
    }
    if (rec.pivot.degree() > 0) rec.blocked_indices = nonnegative_integer_roots(rec.pivot);
    return rec;
}

RecurrenceSystem build_recurrence(const DifferentialOperator& theta_op) {
    const DifferentialOperator th = theta_op.form() == OperatorForm::Theta ? theta_op : to_theta_form(theta_op);
    const auto& P = th.theta_coeffs();
    const int k = static_cast<int>(P.size()) - 1;
    const Backend be = th.backend();
    std::vector<Polynomial> nums;
    for (int j = 0; j < k; ++j) nums.push_back(P[k - j].shifted(Scalar(j, be)));
    return RecurrenceSystem::from_coefficients(std::move(nums), P[0].shifted(Scalar(k, be)));
}

TaylorStepper::TaylorStepper(DifferentialOperator theta_at_z0, std::vector<std::vector<Scalar>> initial)
    : theta_(std::move(theta_at_z0)), series_(std::move(initial)) {
    const int m = theta_.order();
    const Backend be = theta_.backend();
    if (series_.empty()) throw DomainError("no initial data");
    for (const auto& init : series_) {
        if (static_cast<int>(init.size()) != m)
            throw DomainError("expected " + std::to_string(m) + " initial values, got " + std::to_string(init.size()));
        for (const auto& v : init)
            if (v.backend() != be) throw BackendMismatch("initial values and operator backends differ");
    }
}

void TaylorStepper::extend(long N) {
    const Backend be = theta_.backend();
    const auto& P = theta_.theta_coeffs();
    const long k = static_cast<long>(P.size()) - 1;
    std::vector<Scalar> weights(static_cast<std::size_t>(k) + 1);
    for (long n = last_index() + 1; n <= N; ++n) {
        const Scalar pivot = P[0].evaluate(Scalar(n, be));
        if (pivot.is_zero()) throw Error("internal: pivot vanished at an ordinary point, n = " + std::to_string(n));
        for (long i = 1; i <= std::min(k, n); ++i) weights[i] = P[i].evaluate(Scalar(n - i, be));
        for (auto& f : series_) {
            Scalar s = Scalar::zero(be);
            for (long i = 1; i <= std::min(k, n); ++i) {
                const Scalar& prev = f[static_cast<std::size_t>(n - i)];
                if (prev.is_zero() || weights[i].is_zero()) continue;
                s += weights[i] * prev;
            }
            f.push_back(-s / pivot);
        }
    }
}

std::vector<Scalar> series_from_theta(const DifferentialOperator& theta_at_z0, const std::vector<Scalar>& initial,
                                      long N) {
    const int m = theta_at_z0.order();
    if (N < m - 1) throw DomainError("series length N must be at least m - 1");
    TaylorStepper stepper(theta_at_z0, {initial});
    stepper.extend(N);
    return stepper.series(0);
}

SeriesSolution solve_series(const DifferentialOperator& op, const Scalar& z0, const std::vector<Scalar>& initial,
                            long N) {
    if (z0.backend() != op.backend()) throw BackendMismatch("expansion point and operator backends differ");
    if (!is_ordinary_point(op, z0)) throw PreconditionError("z0 = " + z0.str() + " is a singular point");
    SeriesSolution sol;
    sol.center = z0;
    sol.coefficients = series_from_theta(to_theta_form(recenter(op, z0)), initial, N);
    sol.singular_set = singular_points(op);
    return sol;
}

long series_residual_valuation(const DifferentialOperator& op, const SeriesSolution& series) {
    if (!series.backend().is_exact() || !op.backend().is_exact())
        throw BackendMismatch("the residual check is exact-only");
    const auto p = polynomial_coefficients(recenter(op, series.center));
    Polynomial y(series.coefficients, Backend::exact());
    Polynomial residual(Backend::exact());
    for (const auto& pi : p) {
        residual += pi * y;
        y = y.derivative();
    }
    if (residual.is_zero()) return -1;
    return static_cast<long>(residual.valuation());
}

namespace {

std::complex<double> ratio_of(const Scalar& num, const Scalar& den) {
    // exact values can exceed the double range; divide in MPFR first
    const Backend wide = Backend::floating(128);
    const Scalar a = num.is_exact() ? num.to(wide) : num;
    const Scalar b = den.is_exact() ? den.to(wide) : den;
    return (a / b).to_complex();
}

}  // namespace

RatioEstimate ratio_limit(const SeriesSolution& series, const RatioOptions& options) {
    const auto& f = series.coefficients;
    const std::size_t window = static_cast<std::size_t>(std::max(options.window, 2));
    if (f.size() < window + 3)
        throw DomainError("ratio_limit needs at least " + std::to_string(window + 3) + " coefficients");
    bool tail_zero = true;
    for (std::size_t i = f.size() - window - 1; i < f.size(); ++i) tail_zero = tail_zero && f[i].is_zero();
    if (tail_zero) throw DomainError("coefficients vanish for large n: the series is eventually zero");

    std::vector<std::pair<long, std::complex<double>>> raw;
    for (std::size_t n = 0; n + 1 < f.size(); ++n) {
        if (f[n].is_zero()) continue;
        raw.emplace_back(static_cast<long>(n), ratio_of(f[n + 1], f[n]));
    }
    RatioEstimate est;
    const bool constant_raw = [&] {
        if (raw.size() < window) return false;
        for (std::size_t i = raw.size() - window; i < raw.size(); ++i)
            if (raw[i].second != raw.back().second) return false;
        return true;
    }();
    if (options.acceleration == Acceleration::Richardson && !constant_raw) {
        est.accelerated = true;
        for (std::size_t i = 0; i + 1 < raw.size(); ++i) {
            const auto [n, r] = raw[i];
            const auto [n1, r1] = raw[i + 1];
            if (n1 != n + 1) continue;
            est.history.emplace_back(n, static_cast<double>(n + 1) * r1 - static_cast<double>(n) * r);
        }
    } else {
        est.history = raw;
    }
    if (est.history.size() < window) throw ConvergenceError("too few nonzero coefficients for a ratio estimate");

    const std::complex<double> last = est.history.back().second;
    double spread = 0.0;
    for (std::size_t i = est.history.size() - window; i < est.history.size(); ++i)
        spread = std::max(spread, std::abs(est.history[i].second - last));
    est.spread = spread / std::max(std::abs(last), 1e-300);
    est.n_used = est.history.back().first + 1;
    est.converged = est.spread <= options.tol;
    if (!est.converged) {
        std::ostringstream os;
        os << "ratio estimates did not settle (relative spread " << est.spread << "); last values:";
        for (std::size_t i = est.history.size() - std::min<std::size_t>(4, est.history.size()); i < est.history.size();
             ++i)
            os << " n=" << est.history[i].first << ':' << est.history[i].second;
        throw ConvergenceError(os.str());
    }

    const Backend fb = Backend::floating(53);
    if (constant_raw && series.backend().is_exact()) {
        const std::size_t n = static_cast<std::size_t>(raw.back().first);
        est.limit = f[n + 1] / f[n];
    } else {
        est.limit = Scalar::from_double(last.real(), last.imag(), fb);
    }
    const double modulus = est.limit.abs();
    if (modulus == 0.0) {
        est.radius = std::numeric_limits<double>::infinity();
        return est;
    }
    est.radius = 1.0 / modulus;
    const Backend lb = est.limit.backend();
    const Scalar center = series.center.to(lb);
    est.implied_singularity = center + Scalar::one(lb) / est.limit;
    const auto implied = est.implied_singularity->to_complex();
    const auto c = series.center.to_complex();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < series.singular_set.points.size(); ++j) {
        const auto t = series.singular_set.points[j].to_complex();
        const double gap = std::abs(t - implied);
        if (gap < best && std::abs(std::abs(t - c) - est.radius) <= options.match_tol * est.radius) {
            best = gap;
            est.matched_singularity = static_cast<int>(j);
        }
    }
    return est;
}

Polynomial characteristic_polynomial(const RecurrenceSystem& rec) {
    if (!rec.limits_finite) throw DomainError("recurrence coefficients have no finite limits");
    std::vector<Scalar> c = rec.limits;
    c.push_back(Scalar::one(rec.backend()));
    return Polynomial(std::move(c), rec.backend());
}

namespace {

std::vector<Scalar> sorted_roots(const Polynomial& p) {
    if (p.degree() <= 0) return {};
    auto r = expand_multiplicities(find_roots(p));
    sort_scalars(r);
    return r;
}

}  // namespace

CharpolyReport charpoly_vs_Q0(const DifferentialOperator& theta_op, double tol) {
    const DifferentialOperator th = theta_op.form() == OperatorForm::Theta ? theta_op : to_theta_form(theta_op);
    CharpolyReport rep;
    const RecurrenceSystem rec = build_recurrence(th);
    rep.q0 = to_delta_poly(th).delta_coeffs().front();
    const Backend be = th.backend();
    const Scalar q00 = rep.q0.evaluate(Scalar::zero(be));
    if (q00.is_zero()) {
        rep.q0_vanishes_at_origin = true;
        rep.explanation = "Q_0(0) = 0: the expansion point is not a regular point of the theta form";
        return rep;
    }
    if (!rec.limits_finite) {
        rep.explanation = "some P_i has larger degree than P_0; the recurrence has no finite limits";
        return rep;
    }
    rep.charpoly = characteristic_polynomial(rec);
    const int k = rec.order;
    rep.zero_roots = k - std::max(rep.q0.degree(), 0);
    if (be.is_exact()) rep.exact_identity = rep.q0.reversed(static_cast<std::size_t>(k)) == rep.charpoly.scaled(q00);

    rep.char_roots = sorted_roots(rep.charpoly);
    for (const auto& t : sorted_roots(rep.q0)) rep.reciprocal_roots.push_back(Scalar::one(t.backend()) / t);
    sort_scalars(rep.reciprocal_roots);

    // greedy matching of reciprocals to characteristic roots, then zero roots
    std::vector<bool> used(rep.char_roots.size(), false);
    double worst = 0.0;
    auto match = [&](std::complex<double> target) {
        std::size_t best = used.size();
        double gap = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < used.size(); ++i) {
            if (used[i]) continue;
            const double g = std::abs(rep.char_roots[i].to_complex() - target) / std::max(1.0, std::abs(target));
            if (g < gap) {
                gap = g;
                best = i;
            }
        }
        if (best == used.size()) return std::numeric_limits<double>::infinity();
        used[best] = true;
        return gap;
    };
    for (const auto& r : rep.reciprocal_roots) worst = std::max(worst, match(r.to_complex()));
    for (int i = 0; i < rep.zero_roots; ++i) worst = std::max(worst, match({0.0, 0.0}));
    if (rep.char_roots.size() != rep.reciprocal_roots.size() + static_cast<std::size_t>(rep.zero_roots))
        worst = std::numeric_limits<double>::infinity();
    rep.max_mismatch = worst;
    rep.passed = worst <= tol && rep.exact_identity.value_or(true);
    std::ostringstream os;
    os << "max root mismatch " << worst << " over " << rep.char_roots.size() << " roots";
    if (rep.zero_roots) os << " (" << rep.zero_roots << " zero roots from deg Q_0 < k)";
    rep.explanation = os.str();
    return rep;
}

ModulusCheck poincare_distinct_modulus_check(const Polynomial& charpoly, double tol) {
    ModulusCheck out;
    for (const auto& r : sorted_roots(charpoly)) out.moduli.push_back(r.abs());
    std::sort(out.moduli.begin(), out.moduli.end());
    for (std::size_t i = 1; i < out.moduli.size(); ++i)
        if (out.moduli[i] - out.moduli[i - 1] <= tol * std::max(1.0, out.moduli[i])) out.distinct = false;
    return out;
}

}  // namespace fuchs
