#pragma once

#include <optional>
#include <string>

#include "fuchs/continued_fraction.hpp"

namespace fuchs {

/// Parameters of z(1-z) y'' + (c - (a+b+1) z) y' - a b y = 0; none may be an integer.
class HypergeomParams {
public:
    HypergeomParams(Scalar a, Scalar b, Scalar c);

    const Scalar& a() const { return a_; }
    const Scalar& b() const { return b_; }
    const Scalar& c() const { return c_; }
    Backend backend() const { return a_.backend(); }
    HypergeomParams to(Backend target) const { return {a_.to(target), b_.to(target), c_.to(target)}; }

private:
    Scalar a_, b_, c_;
};

struct F21Options {
    /// Absolute bound on the neglected tail.
    double tol = 1e-20;
    /// Working precision for exact input; float input keeps the larger of the two.
    unsigned precision_bits = 113;
    long max_terms = 200000;
};

struct F21Sum {
    Scalar value;
    long terms = 0;
    double tail_bound = 0.0;
};

/// Sum of (a)_n (b)_n / ((c)_n n!) z^n with a geometric tail bound. DomainError
/// for |z| >= 1, ConvergenceError when the bound is not reached in max_terms.
F21Sum f21_sum(const HypergeomParams& params, const Scalar& z, const F21Options& options = {});
Scalar f21(const HypergeomParams& params, const Scalar& z, const F21Options& options = {});

/// F' by the contiguous identity F' = (ab/c) F(a+1, b+1, c+1 | z).
Scalar f21_derivative(const HypergeomParams& params, const Scalar& z, const F21Options& options = {});

/// F' as sum_n (n+1) f_{n+1} z^n over the coefficients of F itself.
Scalar f21_derivative_termwise(const HypergeomParams& params, const Scalar& z, const F21Options& options = {});

/// F'/F; DomainError when |F(z)| is below 1e3 * tol.
Scalar f21_logderiv(const HypergeomParams& params, const Scalar& z, const F21Options& options = {});

/// The Gauss equation in standard form, in the parameters' backend.
DifferentialOperator gauss_operator(const HypergeomParams& params);

/// x_n = a_{1,n} x_{n+1} + a_{2,n} x_{n+2} for x_n = y^(n)(z)/n!:
/// a_{1,n} = (n+1)(c+n-(a+b+2n+1)z) / ((a+n)(b+n)),
/// a_{2,n} = (n+1)(n+2) z(1-z) / ((a+n)(b+n)).
DerivativeRecurrence gauss_recurrence_coefficients(const HypergeomParams& params, const Scalar& z);

/// (a, b, a+b-c+1); the solution is then evaluated at 1 - z.
HypergeomParams kummer_switch(const HypergeomParams& params);

struct DichotomyReport {
    Scalar z;
    /// "left" for Re z < 1/2, "right" for Re z > 1/2.
    std::string side;
    CFEvaluation cf;
    /// F'/F at z (|z| < 1).
    std::optional<Scalar> oracle_left;
    std::optional<double> error_left;
    /// d/dz ln F(a, b, a+b-c+1 | 1-z) (|1-z| < 1).
    std::optional<Scalar> oracle_right;
    std::optional<double> error_right;
    double distance_to_AL = 0.0;
    /// Error against the oracle of the side z lies on (NaN when not applicable).
    double expected_error = 0.0;
};

struct DichotomyOptions {
    double cf_tol = 1e-15;
    long n_max = 300;
    /// Backend of the fraction; the oracles keep F21Options precision.
    Backend backend = Backend::floating(53);
    double guard_tol = kDefaultTieTolerance;
    F21Options oracle;
};

/// Evaluates the fraction 1/(a_{1,0} + a_{2,0}/(a_{1,1} + ...)) and compares it
/// with the oracle of each applicable side. PreconditionError on Re z = 1/2.
DichotomyReport region_dichotomy_check(const HypergeomParams& params, const Scalar& z,
                                       const DichotomyOptions& options = {});

}  // namespace fuchs
