#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fuchs/chain.hpp"

namespace fuchs {

struct CFTerm {
    Scalar a;
    Scalar b;
};

/// b_0 + a_1/(b_1 + a_2/(b_2 + ...)), terms supplied on demand for n >= 1.
class ContinuedFraction {
public:
    using Provider = std::function<CFTerm(long n)>;

    /// length: number of (a_n, b_n) terms for a finite fraction.
    ContinuedFraction(Scalar b0, Provider terms, std::optional<long> length = std::nullopt);

    const Scalar& b0() const { return b0_; }
    CFTerm term(long n) const;
    std::optional<long> length() const { return length_; }
    Backend backend() const { return b0_.backend(); }

private:
    Scalar b0_;
    Provider terms_;
    std::optional<long> length_;
};

struct ConvergentPair {
    long n = 0;
    Scalar A;
    Scalar B;
};

/// Convergent numerators and denominators for n = -1..N (pairs[n + 1] is index n).
std::vector<ConvergentPair> convergents(const ContinuedFraction& cf, long N);

/// Pair with index n from a list produced by convergents().
const ConvergentPair& pair_at(const std::vector<ConvergentPair>& pairs, long n);

/// Checks A_n B_{n-1} - A_{n-1} B_n = (-1)^(n-1) a_1...a_n for every pair;
/// returns the first failing index or -1. Exact backend: exact comparison.
long determinant_check(const ContinuedFraction& cf, const std::vector<ConvergentPair>& pairs, double rel_tol = 1e-10);

struct CFEvaluation {
    Scalar value;
    long n_used = 0;
    bool converged = false;
    double last_gap = 0.0;
    /// Indices with B_n = 0 (the convergent passes through infinity).
    std::vector<long> infinite_at;
    /// Depth at which a zero partial numerator ended the fraction.
    std::optional<long> terminated_at;
    std::string diagnostic;
};

/// First convergent with |A_n/B_n - A_{n-1}/B_{n-1}| < tol. Non-convergence is
/// reported through converged = false and the diagnostic, never thrown.
CFEvaluation evaluate(const ContinuedFraction& cf, double tol, long N_max);

/// b_0 + a_1/(... + a_N/(b_N + tail)) evaluated from the bottom up.
Scalar evaluate_tail_truncated(const ContinuedFraction& cf, long N, const Scalar& tail);

using IndexedScalar = std::function<Scalar(long n)>;

/// 1/(a_{1,0} + a_{2,0}/(a_{1,1} + ...)): b_0 = 0, a_1 = 1, b_n = a_{1,n-1},
/// a_{n+1} = a_{2,n-1}. Converges to x_1/x_0 for the distinguished solution.
ContinuedFraction from_order2_coefficients(IndexedScalar a1, IndexedScalar a2);

/// The fraction attached to x_n = b_n x_{n+1} + a_{n+1} x_{n+2} with
/// b_n = a_{1,n}, a_{n+1} = a_{2,n}; its convergents reconstruct x_0 and x_1.
ContinuedFraction from_recurrence(IndexedScalar a1, IndexedScalar a2);

/// (x_0, x_1) = (A_{n-1} x_n + a_n A_{n-2} x_{n+1}, B_{n-1} x_n + a_n B_{n-2} x_{n+1}), n >= 1.
std::pair<Scalar, Scalar> reconstruct_x0_x1(const std::vector<ConvergentPair>& pairs, long n, const Scalar& a_n,
                                            const Scalar& x_n, const Scalar& x_n1);

struct CfEquivalenceRow {
    long n = 0;
    Scalar chain_value;
    Scalar cf_value;
    bool equal = false;
    double discrepancy = 0.0;
};

struct CfEquivalenceReport {
    /// "A/B" or "B/A" of the order-2 fraction's convergents.
    std::string orientation;
    /// nu - n for the matching convergent index nu.
    long offset = 0;
    std::vector<CfEquivalenceRow> rows;
    bool all_equal = false;
    /// q_0 = 0: both sides vanish identically.
    bool trivial = false;
    std::string explanation;
};

/// Compares -q_{0,n}(z)/q_{1,n}(z) with the convergents of the order-2 fraction
/// built from the derivative recurrence at z, for n = 2..n_max. The convergent
/// index and orientation are fixed at n = 2, 3 and then asserted. Exact
/// backend compares exactly; float uses rel_tol.
CfEquivalenceReport cf_equivalence(const DifferentialOperator& op, const Scalar& z, long n_max,
                                   double rel_tol = 1e-12);

/// Backward evaluation of the order-m generalized fraction for x_1/x_0:
/// r_{D+j} = tail, r_n = 1/(a_{1,n} + sum_j a_{j,n} r_{n+1} ... r_{n+j-1}).
/// coeff(j, n) returns a_{j,n}, j = 1..m.
Scalar monster_ratio_eval(const std::function<Scalar(int, long)>& coeff, int m, long D, const Scalar& tail);

Scalar monster_ratio_eval(const DerivativeRecurrence& rec, long D, std::optional<Scalar> tail = std::nullopt);

}  // namespace fuchs
