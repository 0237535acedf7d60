#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fuchs/polynomial.hpp"

namespace fuchs {

struct Root {
    Scalar value;
    int multiplicity = 1;
    /// True when value is an exact Gaussian rational verified by exact evaluation.
    bool exact = false;
    /// Backward error |p(r)| / sum |c_i| |r|^i of the accepted approximation.
    double residual = 0.0;
};

struct RootOptions {
    /// Precision of float results (and of the iteration for float input).
    unsigned precision_bits = 53;
    /// Negative: use default_dedup_tolerance(precision_bits).
    double dedup_tolerance = -1.0;
    int max_iterations = 600;
    /// Largest denominator tried when snapping an approximation to an exact root.
    std::int64_t max_snap_denominator = 1'000'000;
};

/// Default distance below which float roots are merged: 1e-9 at 53 bits,
/// scaled geometrically with precision.
double default_dedup_tolerance(unsigned precision_bits);

/// All complex roots with multiplicity. Exact input is split into square-free
/// factors first; roots that are Gaussian rationals are returned exactly, the
/// rest as floats of options.precision_bits. Throws ConvergenceError (with the
/// residuals in the message) when the simultaneous iteration fails.
std::vector<Root> find_roots(const Polynomial& p, const RootOptions& options = {});

/// Root values repeated according to multiplicity.
std::vector<Scalar> expand_multiplicities(const std::vector<Root>& roots);

/// Yun's square-free decomposition: p = c * prod f_k^k with squarefree,
/// pairwise coprime monic f_k. Exact backend only; factors of degree 0 are omitted.
std::vector<std::pair<Polynomial, int>> square_free_decomposition(const Polynomial& p);

/// Distinct roots of p among 0, 1, 2, ... (exact: by exact evaluation; float:
/// relative tolerance tol). The scan is bounded by the Cauchy root bound.
std::vector<long> nonnegative_integer_roots(const Polynomial& p, double tol = 1e-10);

}  // namespace fuchs
