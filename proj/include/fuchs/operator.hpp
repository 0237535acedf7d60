#pragma once

#include <string>
#include <variant>
#include <vector>

#include "fuchs/rational_function.hpp"
#include "fuchs/roots.hpp"

namespace fuchs {

enum class OperatorForm { Standard, DeltaPoly, Theta };

std::string to_string(OperatorForm form);

/// y^(m) = sum_{i<m} q_i(z) y^(i)
struct StandardForm {
    std::vector<RationalFunction> q;
};

/// sum_j Q_j(z) delta^(m-j), delta = z d/dz
struct DeltaPolyForm {
    std::vector<Polynomial> Q;
};

/// sum_i z^i P_i(delta); P_i are polynomials in delta.
struct ThetaForm {
    std::vector<Polynomial> P;
};

/// A linear differential operator in one of three equivalent forms. Values are
/// immutable; conversions return new operators.
class DifferentialOperator {
public:
    /// Throws on an empty list or mixed backends.
    static DifferentialOperator standard(std::vector<RationalFunction> q);
    /// Q_0..Q_m; throws when Q_0 = 0 (order undefined) or m = 0.
    static DifferentialOperator delta_poly(std::vector<Polynomial> Q);
    /// P_0..P_k; order is the largest delta-degree. Throws when P_0 = 0.
    static DifferentialOperator theta(std::vector<Polynomial> P);

    int order() const { return order_; }
    OperatorForm form() const;
    Backend backend() const { return backend_; }

    /// Coefficient accessors; each throws if the operator is in another form.
    const std::vector<RationalFunction>& q() const;
    const std::vector<Polynomial>& delta_coeffs() const;
    const std::vector<Polynomial>& theta_coeffs() const;

    /// Theta form with deg P_0 < order: the expansion point is not a regular
    /// singular (or ordinary) point.
    bool irregular_at_zero() const;

    DifferentialOperator to(Backend target) const;

private:
    using Data = std::variant<StandardForm, DeltaPolyForm, ThetaForm>;
    DifferentialOperator(Data data, int order, Backend backend)
        : data_(std::move(data)), order_(order), backend_(backend) {}

    Data data_;
    int order_;
    Backend backend_;
};

DifferentialOperator to_standard(const DifferentialOperator& op);

/// Clears denominators by their least common multiple and rewrites
/// z^j (d/dz)^j as delta(delta-1)...(delta-j+1). Exact results are divided by
/// the gcd of all Q_j and scaled so that Q_0 is monic.
DifferentialOperator to_delta_poly(const DifferentialOperator& op);

/// Regroups by powers of z around 0. The common power of z is removed and
/// P_0 is made monic; P_0 is then the indicial polynomial at 0. An irregular
/// point at 0 (Q_0(0) = 0) is flagged through irregular_at_zero().
DifferentialOperator to_theta_form(const DifferentialOperator& op);

/// Substitutes z -> z + z0; singular points move by -z0. Keeps the input form.
DifferentialOperator recenter(const DifferentialOperator& op, const Scalar& z0);

/// Polynomials p_0..p_m with sum p_i y^(i) = 0 and p_m the least common
/// denominator of the standard-form coefficients.
std::vector<Polynomial> polynomial_coefficients(const DifferentialOperator& op);

struct SingularSet {
    std::vector<Scalar> points;
    double dedup_tolerance = 0.0;
    /// Backward errors of inexact roots (0 for exact ones), aligned with points.
    std::vector<double> residuals;

    std::size_t size() const { return points.size(); }
};

struct SingularOptions {
    unsigned precision_bits = 53;
    /// Negative: default_dedup_tolerance(precision_bits).
    double dedup_tolerance = -1.0;
};

/// Finite singular points: distinct roots of the least common denominator of
/// the standard-form coefficients, sorted by (Re, Im).
SingularSet singular_points(const DifferentialOperator& op, const SingularOptions& options = {});

/// True when t is not a pole of any standard-form coefficient.
bool is_ordinary_point(const DifferentialOperator& op, const Scalar& t);

enum class Genericity { Generic, NotGeneric, Undetermined };

std::string to_string(Genericity g);

struct GenericityResult {
    Genericity verdict = Genericity::Undetermined;
    std::string explanation;
    /// Distinct exponents in {0, 1, 2, ...}.
    std::vector<long> nonnegative_integer_exponents;
    /// Indices n >= 1 where the Frobenius pivot P_0(n) vanishes.
    std::vector<long> resonant_indices;
    /// Dimension of the space of solutions holomorphic at t (-1 if unknown).
    int holomorphic_dimension = -1;
};

/// Decides whether exactly m-1 independent solutions extend holomorphically to
/// the regular singular point t, by a Frobenius power-series trial. Throws
/// PreconditionError when t is ordinary or irregular.
GenericityResult genericity_probe(const DifferentialOperator& op, const Scalar& t);

struct SingularityReport {
    Scalar point;
    Polynomial indicial_polynomial;
    /// Roots of the indicial polynomial with multiplicity, sorted by (Re, Im).
    std::vector<Scalar> exponents;
    bool ordinary = false;
    bool fuchsian_at_point = true;
    Genericity generic_probe = Genericity::Undetermined;
    std::string explanation;
};

SingularityReport indicial_data(const DifferentialOperator& op, const Scalar& t);

struct FuchsianPoint {
    Scalar point;
    bool fuchsian = true;
    /// pole order of q_{m-j} at the point, j = 1..m
    std::vector<int> pole_orders;
};

struct FuchsianReport {
    std::vector<FuchsianPoint> points;
    bool fuchsian = true;
    /// Informational only; the overall flag never depends on infinity.
    bool regular_at_infinity = true;
};

FuchsianReport is_fuchsian(const DifferentialOperator& op);

using RationalMatrix = std::vector<std::vector<RationalFunction>>;

/// Companion matrix of X' = A X: ones on the superdiagonal, last row q_0..q_{m-1}.
RationalMatrix companion_matrix(const DifferentialOperator& op);

/// -A^T, the matrix of the system solved by the inverse fundamental matrix.
RationalMatrix adjoint_matrix(const RationalMatrix& a);

/// Sorts scalars by (Re, Im) of their double approximations.
void sort_scalars(std::vector<Scalar>& values);

}  // namespace fuchs
