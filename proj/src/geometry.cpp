#include "fuchs/geometry.hpp"

#include <cmath>

#include "fuchs/parallel.hpp"

namespace fuchs {

namespace {

/// Backend shared by the sites and z: exact only if everything is exact,
/// otherwise the widest float precision present.
Backend joint_backend(const SingularSet& sites, const Scalar& z) {
    bool exact = z.is_exact();
    unsigned bits = z.is_exact() ? 53 : z.backend().precision_bits;
    for (const auto& t : sites.points) {
        if (!t.is_exact()) {
            exact = false;
            bits = std::max(bits, t.backend().precision_bits);
        }
    }
    return exact ? Backend::exact() : Backend::floating(bits);
}

double to_nonneg_double(const Scalar& real_value) {
    const double v = real_value.to_complex().real();
    return v < 0 ? 0.0 : v;
}

/// Distance from z to the bisector of (ti, tj): |d_i^2 - d_j^2| / (2 |ti - tj|),
/// squared and evaluated in the backend of the inputs before one square root.
double bisector_distance(const Scalar& ti, const Scalar& tj, const Scalar& z) {
    const Scalar diff = (z - ti).norm() - (z - tj).norm();
    const Scalar sep = (ti - tj).norm();
    const Scalar four(4, diff.backend());
    return std::sqrt(to_nonneg_double(diff * diff / (four * sep)));
}

}  // namespace

std::vector<BisectorLine> bisector_lines(const SingularSet& sites) {
    std::vector<BisectorLine> out;
    const auto& t = sites.points;
    for (std::size_t i = 0; i < t.size(); ++i) {
        for (std::size_t j = i + 1; j < t.size(); ++j) {
            const Backend be = t[i].backend();
            const Scalar half = Scalar::one(be) / Scalar(2, be);
            const Scalar mid = (t[i] + t[j]) * half;
            // rotate t_j - t_i by +90 degrees and normalize in floating point
            const unsigned bits = be.is_exact() ? 53 : be.precision_bits;
            const Backend fb = Backend::floating(bits);
            const Scalar d = (t[j] - t[i]).to(fb);
            const Scalar rot = d * Scalar::from_double(0, 1, fb);
            const BigFloat len = BigFloat::hypot(rot.re_float(), rot.im_float());
            const Scalar dir = Scalar::from_bigfloat(rot.re_float() / len, rot.im_float() / len);
            out.push_back({mid, dir, {static_cast<int>(i), static_cast<int>(j)}});
        }
    }
    return out;
}

double distance_to_line(const BisectorLine& line, const Scalar& z) {
    // |Im(conj(direction) (z - midpoint))|
    const std::complex<double> w = std::conj(line.direction.to_complex()) * (z.to_complex() - line.midpoint.to_complex());
    return std::abs(w.imag());
}

RegionQueryResult classify_point(const SingularSet& sites, const Scalar& z, double tol) {
    RegionQueryResult res;
    const std::size_t r = sites.points.size();
    if (r == 0) return res;
    const Backend be = joint_backend(sites, z);
    const Scalar zb = z.to(be);
    std::vector<Scalar> t;
    std::vector<Scalar> d2;
    for (const auto& p : sites.points) {
        t.push_back(p.to(be));
        d2.push_back((zb - t.back()).norm());
    }
    auto less = [](const Scalar& a, const Scalar& b) {
        if (a.is_exact()) return a.re_rational() < b.re_rational();
        return a.re_float() < b.re_float();
    };
    std::size_t best = 0, second = r;
    for (std::size_t i = 1; i < r; ++i) {
        if (less(d2[i], d2[best])) {
            second = best;
            best = i;
        } else if (second == r || less(d2[i], d2[second])) {
            second = i;
        }
    }
    res.distance = std::sqrt(to_nonneg_double(d2[best]));
    if (res.distance <= tol) throw DomainError("z = " + z.str() + " coincides with singular point " + t[best].str());
    if (r == 1) {
        res.nearest_index = 0;
        return res;
    }
    res.distance_to_cell_boundary = bisector_distance(t[best], t[second], zb);
    double dal = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i + 1; j < r; ++j) dal = std::min(dal, bisector_distance(t[i], t[j], zb));
    res.distance_to_AL = dal;
    res.is_tie = res.distance_to_cell_boundary <= tol;
    if (!res.is_tie) res.nearest_index = static_cast<int>(best);
    return res;
}

bool region_guard(const SingularSet& sites, const Scalar& z, double tol) {
    if (sites.points.size() <= 1) return true;
    const Backend be = joint_backend(sites, z);
    const Scalar zb = z.to(be);
    for (std::size_t i = 0; i < sites.points.size(); ++i)
        for (std::size_t j = i + 1; j < sites.points.size(); ++j)
            if (bisector_distance(sites.points[i].to(be), sites.points[j].to(be), zb) <= tol) return false;
    return true;
}

std::vector<GridCell> classify_grid(const SingularSet& sites, double re_min, double re_max, int n_re, double im_min,
                                    double im_max, int n_im, double tol) {
    if (n_re < 1 || n_im < 1) throw DomainError("grid needs at least one point per axis");
    auto coord = [](double lo, double hi, int n, int k) { return n == 1 ? lo : lo + (hi - lo) * k / (n - 1); };
    const std::size_t total = static_cast<std::size_t>(n_re) * static_cast<std::size_t>(n_im);
    return parallel_map(total, [&](std::size_t idx) {
        const int a = static_cast<int>(idx % static_cast<std::size_t>(n_re));
        const int b = static_cast<int>(idx / static_cast<std::size_t>(n_re));
        GridCell cell;
        // exact grid coordinates keep the exact predicates exact
        cell.z = Scalar::exact(BigFloat(coord(re_min, re_max, n_re, a), 53).to_rational(),
                               BigFloat(coord(im_min, im_max, n_im, b), 53).to_rational());
        try {
            cell.result = classify_point(sites, cell.z, tol);
        } catch (const DomainError&) {
            cell.at_site = true;
        }
        return cell;
    });
}

}  // namespace fuchs
