#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fuchs/geometry.hpp"
#include "fuchs/operator.hpp"

namespace fuchs {

/// Linear recurrence f_{n+k} + sum_{j<k} a_{j,n} f_{n+j} = 0 with
/// a_{j,n} = numerators[j](n) / pivot(n), polynomials in n.
struct RecurrenceSystem {
    int order = 0;
    std::vector<Polynomial> numerators;
    Polynomial pivot;
    /// lim a_{j,n}; meaningful only when limits_finite.
    std::vector<Scalar> limits;
    bool limits_finite = true;
    /// n >= 0 with pivot(n) = 0.
    std::vector<long> blocked_indices;

    Backend backend() const { return pivot.backend(); }
    /// a_{j,n}; throws DomainError at a blocked index.
    Scalar coefficient(int j, long n) const;

    /// Fills limits and blocked indices from numerators and pivot.
    static RecurrenceSystem from_coefficients(std::vector<Polynomial> numerators, Polynomial pivot);
};

/// a_{j,n} = P_{k-j}(n+j) / P_0(n+k) from a theta-form operator.
RecurrenceSystem build_recurrence(const DifferentialOperator& theta_op);

enum class SeriesSource { FromRecurrence, FromOracle };

struct SeriesSolution {
    Scalar center;
    std::vector<Scalar> coefficients;
    SeriesSource source = SeriesSource::FromRecurrence;
    /// Finite singular points of the generating operator (unshifted).
    SingularSet singular_set;

    Backend backend() const { return coefficients.front().backend(); }
};

/// Taylor coefficients f_0..f_N at the ordinary point z0; initial values are
/// f_j = y^(j)(z0)/j!. Throws PreconditionError at a singular point.
SeriesSolution solve_series(const DifferentialOperator& op, const Scalar& z0, const std::vector<Scalar>& initial,
                            long N);

/// Incremental Taylor coefficients of several solutions at an ordinary point,
/// sharing the pivot evaluations. The operator must be a theta form at z0.
class TaylorStepper {
public:
    TaylorStepper(DifferentialOperator theta_at_z0, std::vector<std::vector<Scalar>> initial);

    /// Computes coefficients through index n.
    void extend(long n);
    /// Highest computed index.
    long last_index() const { return static_cast<long>(series_.front().size()) - 1; }
    const std::vector<Scalar>& series(std::size_t i) const { return series_.at(i); }
    std::size_t count() const { return series_.size(); }

private:
    DifferentialOperator theta_;
    std::vector<std::vector<Scalar>> series_;
};

/// Same coefficients computed with a prepared theta form at z0 (ordinary point).
std::vector<Scalar> series_from_theta(const DifferentialOperator& theta_at_z0, const std::vector<Scalar>& initial,
                                      long N);

/// Smallest degree with a nonzero coefficient of sum p_i(z) y^(i) for the
/// truncated series (in the local variable z - z0); -1 if the residual vanishes.
long series_residual_valuation(const DifferentialOperator& op, const SeriesSolution& series);

enum class Acceleration { None, Richardson };

struct RatioOptions {
    Acceleration acceleration = Acceleration::Richardson;
    int window = 8;
    /// Relative spread of the last window estimates accepted as converged.
    double tol = 1e-6;
    /// Relative tolerance for matching the radius with |t_j - z0|.
    double match_tol = 1e-4;
};

struct RatioEstimate {
    Scalar limit;
    double radius = 0.0;
    std::optional<int> matched_singularity;
    /// z0 + 1/limit, where the reciprocal interpretation places the singularity.
    std::optional<Scalar> implied_singularity;
    std::vector<std::pair<long, std::complex<double>>> history;
    bool accelerated = false;
    bool converged = false;
    double spread = 0.0;
    long n_used = 0;
};

/// Estimates lim f_{n+1}/f_n. Throws DomainError for an eventually-zero tail
/// and ConvergenceError when the window estimates do not settle.
RatioEstimate ratio_limit(const SeriesSolution& series, const RatioOptions& options = {});

/// lambda^k + sum a_j lambda^j from the limits.
Polynomial characteristic_polynomial(const RecurrenceSystem& rec);

struct CharpolyReport {
    Polynomial charpoly;
    Polynomial q0;
    /// Roots of the characteristic polynomial, sorted.
    std::vector<Scalar> char_roots;
    /// 1/t for the roots t of Q_0, sorted.
    std::vector<Scalar> reciprocal_roots;
    /// Zero roots of the characteristic polynomial (k - deg Q_0).
    int zero_roots = 0;
    double max_mismatch = 0.0;
    /// lambda^k Q_0(1/lambda) = Q_0(0) charpoly as polynomials (exact inputs only).
    std::optional<bool> exact_identity;
    bool q0_vanishes_at_origin = false;
    bool passed = false;
    std::string explanation;
};

/// Checks that the characteristic roots are the reciprocals of the roots of Q_0.
CharpolyReport charpoly_vs_Q0(const DifferentialOperator& theta_op, double tol = 1e-10);

struct ModulusCheck {
    bool distinct = true;
    std::vector<double> moduli;
};

ModulusCheck poincare_distinct_modulus_check(const Polynomial& charpoly, double tol = 1e-9);

}  // namespace fuchs
