#pragma once

#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "fuchs/operator.hpp"

namespace fuchs {

/// Default tie tolerance for equidistance tests (double precision).
inline constexpr double kDefaultTieTolerance = 1e-12;

/// Perpendicular bisector of the segment between two singular points.
struct BisectorLine {
    Scalar midpoint;
    /// Unit vector along the line, perpendicular to t_j - t_i.
    Scalar direction;
    std::pair<int, int> site_pair;
};

struct RegionQueryResult {
    /// Index of the strictly nearest site; empty on a tie (or when r = 0).
    std::optional<int> nearest_index;
    double distance = std::numeric_limits<double>::infinity();
    bool is_tie = false;
    /// Distance to the union of all bisector lines; +inf for r <= 1.
    double distance_to_AL = std::numeric_limits<double>::infinity();
    /// Distance to the bisector of the two nearest sites (+inf for r <= 1).
    double distance_to_cell_boundary = std::numeric_limits<double>::infinity();
};

/// One line per unordered pair (i < j), in lexicographic pair order.
std::vector<BisectorLine> bisector_lines(const SingularSet& sites);

/// Nearest-site query. Distances are compared exactly when both the sites and z
/// are exact. Throws DomainError when z lies within tol of a site.
RegionQueryResult classify_point(const SingularSet& sites, const Scalar& z, double tol = kDefaultTieTolerance);

/// True iff z is farther than tol from every bisector line.
bool region_guard(const SingularSet& sites, const Scalar& z, double tol = kDefaultTieTolerance);

/// Euclidean distance from z to a bisector line.
double distance_to_line(const BisectorLine& line, const Scalar& z);

struct GridCell {
    Scalar z;
    RegionQueryResult result;
    /// Set when z coincided with a site.
    bool at_site = false;
};

/// Row-major grid over [re_min, re_max] x [im_min, im_max] with n_re x n_im
/// points, classified concurrently; output order matches the grid order.
std::vector<GridCell> classify_grid(const SingularSet& sites, double re_min, double re_max, int n_re, double im_min,
                                    double im_max, int n_im, double tol = kDefaultTieTolerance);

}  // namespace fuchs
