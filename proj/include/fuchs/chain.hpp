#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fuchs/geometry.hpp"
#include "fuchs/series.hpp"

namespace fuchs {

/// y^(n) = sum_i q[i] y^(i) at step n. Every q[i] is numerators[i] / D^power
/// with D the leading polynomial coefficient of the operator.
struct ChainState {
    long n = 0;
    std::vector<RationalFunction> q;
    std::vector<Polynomial> numerators;
    int power = 0;

    /// numerators[k](z) / numerators[j](z); avoids evaluating D^power.
    Scalar numerator_ratio(int k, int j, const Scalar& z) const;

    /// Largest numerator or denominator degree among the entries.
    int max_degree() const;
};

/// State at n = m - 1 (the last unit vector).
ChainState chain_init(const DifferentialOperator& op);

/// Unit vector e_n for n < m.
ChainState chain_unit_state(const DifferentialOperator& op, long n);

/// q_{i,n+1} = q_{i,n}' + q_{i-1,n} + q_{m-1,n} q_i.
ChainState chain_step(const ChainState& state, const DifferentialOperator& op);

/// States for n = 0..n_max (unit vectors first).
std::vector<ChainState> chain_run(const DifferentialOperator& op, long n_max);

/// q_{k,n}(z) / q_{j,n}(z); DomainError at a pole or a zero denominator value.
Scalar ratio_qkn(const ChainState& state, int k, int j, const Scalar& z);

/// Chain values at a point without symbolic growth: row n holds q_{i,n}(z)/n!,
/// read off the Taylor basis at z (the series with y^(j)(z) = delta_ij).
struct ChainValues {
    Scalar z;
    std::vector<std::vector<Scalar>> scaled;

    /// q_{i,n}(z) itself (exact: exact factorial; float: rounded).
    Scalar value(int i, long n) const;
};

ChainValues chain_values(const DifferentialOperator& op, const Scalar& z, long n_max);

enum class ChainMode { Symbolic, Evaluate, Auto };

struct LogDerivOptions {
    double tol = 1e-12;
    long n_max = 2000;
    /// Skip the genericity requirement at the nearest singular point.
    bool override_genericity = false;
    ChainMode mode = ChainMode::Auto;
    /// Auto mode: symbolic steps while every entry stays within this degree.
    int degree_cap = 64;
    double guard_tol = kDefaultTieTolerance;
};

struct LogDerivResult {
    Scalar value;
    long n_used = 0;
    /// (n, -q_{0,n}(z)/q_{1,n}(z)); skipped indices are absent.
    std::vector<std::pair<long, Scalar>> history;
    double cauchy_gap = 0.0;
    int nearest_index = -1;
    Scalar nearest_site;
    std::vector<long> skipped_indices;
    /// Index where Auto mode left the symbolic chain (-1: never symbolic, or never left).
    long switched_at = -1;
};

/// Limit of -q_{0,n}(z)/q_{1,n}(z): the logarithmic derivative of the solution
/// holomorphic at the singular point nearest z. Order 2 only. Throws
/// PreconditionError when z is on the bisector set or the nearest point is not
/// generic, ConvergenceError when the tolerance is not met by n_max.
LogDerivResult logderiv_limit(const DifferentialOperator& op, const Scalar& z, const LogDerivOptions& options = {});

/// y^(n)(z) - sum_i q_{i,n}(z) y^(i)(z) using the symbolic chain and the
/// derivatives read from a series centered at z.
Scalar verify_chain(const DifferentialOperator& op, const SeriesSolution& series, const Scalar& z, long n);

struct Problem1Result {
    /// (n, y_1^(n)(z) / y_2^(n)(z)); indices with a zero denominator are absent.
    std::vector<std::pair<long, Scalar>> history;
    std::vector<long> zero_denominator_indices;
    bool converged = false;
    double last_gap = 0.0;
    /// |last ratio| below decay_tol (the decay of a solution that extends).
    bool decays = false;
};

/// Ratios of n-th derivatives of two solutions given by derivative values
/// y^(i)(z), i < m, at z. Empirical evidence only.
Problem1Result problem1_probe(const DifferentialOperator& op, const std::vector<Scalar>& y1_init,
                              const std::vector<Scalar>& y2_init, const Scalar& z, long n_max, double tol = 1e-10,
                              double decay_tol = 1e-6);

/// x_n = sum_{j=1..m} a_{j,n} x_{n+j} for x_n = y^(n)(z)/n!, with
/// a_{j,n} = numerators[j-1](n) / denominator(n), polynomials in n.
struct DerivativeRecurrence {
    int order = 0;
    Scalar z;
    std::vector<Polynomial> numerators;
    Polynomial denominator;

    Backend backend() const { return denominator.backend(); }
    /// a_{j,n}, j = 1..m.
    Scalar a(int j, long n) const;
    /// Same recurrence as x_{n+m} + sum_{j<m} alpha_j x_{n+j} = 0.
    RecurrenceSystem normalized() const;
};

/// Coefficients by n-fold Leibniz differentiation of sum p_i y^(i) = 0. Needs
/// deg p_i <= i for the cleared polynomial coefficients (DomainError otherwise).
DerivativeRecurrence derivative_recurrence(const DifferentialOperator& op, const Scalar& z);

/// a_{j,n} for n = 0..n_max by solving the m x m system satisfied by the Taylor
/// basis at z. Works for any operator with z ordinary; rows are [a_{1,n}..a_{m,n}].
std::vector<std::vector<Scalar>> derivative_recurrence_by_basis(const DifferentialOperator& op, const Scalar& z,
                                                                long n_max);

}  // namespace fuchs
