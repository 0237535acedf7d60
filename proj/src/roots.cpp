#include "fuchs/roots.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace fuchs {

double default_dedup_tolerance(unsigned precision_bits) {
    return std::pow(10.0, -9.0 * static_cast<double>(precision_bits) / 53.0);
}

std::vector<Scalar> expand_multiplicities(const std::vector<Root>& roots) {
    std::vector<Scalar> out;
    for (const auto& r : roots) {
        for (int k = 0; k < r.multiplicity; ++k) out.push_back(r.value);
    }
    return out;
}

std::vector<std::pair<Polynomial, int>> square_free_decomposition(const Polynomial& p) {
    if (!p.backend().is_exact()) throw BackendMismatch("square-free decomposition requires the exact backend");
    std::vector<std::pair<Polynomial, int>> out;
    if (p.degree() <= 0) return out;
    const Polynomial f = p.monic();
    const Polynomial fp = f.derivative();
    const Polynomial a0 = gcd(f, fp);
    Polynomial b = divmod(f, a0).first;
    Polynomial c = divmod(fp, a0).first;
    Polynomial d = c - b.derivative();
    int i = 1;
    while (b.degree() > 0) {
        Polynomial a = gcd(b, d);
        if (a.degree() > 0) out.emplace_back(a, i);
        b = divmod(b, a).first;
        c = divmod(d, a).first;
        d = c - b.derivative();
        ++i;
    }
    return out;
}

namespace {

double backward_error(const Polynomial& p, const Scalar& z) {
    double scale = 0.0;
    const double r = z.abs();
    double rp = 1.0;
    for (const auto& c : p.coefficients()) {
        scale += c.abs() * rp;
        rp *= r;
    }
    if (scale == 0.0) return 0.0;
    return p.evaluate(z).abs() / scale;
}

/// Aberth-Ehrlich simultaneous iteration on a float polynomial with p(0) != 0.
std::vector<Scalar> aberth(const Polynomial& p, int max_iterations) {
    const Backend be = p.backend();
    const int n = p.degree();
    std::vector<Scalar> z;
    if (n == 1) {
        z.push_back(-p.coefficient(0) / p.coefficient(1));
        return z;
    }
    const Polynomial dp = p.derivative();
    // initial circle: geometric mean of root moduli
    const double lead = p.leading().abs();
    const double radius = std::pow(p.coefficient(0).abs() / lead, 1.0 / n);
    for (int k = 0; k < n; ++k) {
        const double angle = 2.0 * std::numbers::pi * k / n + 0.4;
        z.push_back(Scalar::from_double(radius * std::cos(angle), radius * std::sin(angle), be));
    }
    const double eps = std::ldexp(1.0, -static_cast<int>(be.precision_bits) + 2);
    std::vector<bool> done(n, false);
    for (int iter = 0; iter < max_iterations; ++iter) {
        bool all_done = true;
        for (int k = 0; k < n; ++k) {
            if (done[k]) continue;
            Scalar pv = p.evaluate(z[k]);
            if (pv.is_zero() || backward_error(p, z[k]) <= eps) {
                done[k] = true;
                continue;
            }
            all_done = false;
            Scalar dv = dp.evaluate(z[k]);
            Scalar sum = Scalar::zero(be);
            for (int j = 0; j < n; ++j) {
                if (j == k) continue;
                Scalar diff = z[k] - z[j];
                if (!diff.is_zero()) sum += Scalar::one(be) / diff;
            }
            Scalar w;
            if (dv.is_zero()) {
                w = Scalar::one(be) / sum;
            } else {
                Scalar ratio = pv / dv;
                Scalar denom = Scalar::one(be) - ratio * sum;
                w = denom.is_zero() ? ratio : ratio / denom;
            }
            z[k] -= w;
            if (w.abs() <= eps * std::max(1.0, z[k].abs())) done[k] = true;
        }
        if (all_done) break;
    }
    std::vector<double> residuals;
    bool ok = true;
    for (const auto& r : z) {
        residuals.push_back(backward_error(p, r));
        // clustered (multiple) roots only reach about eps^(1/k)
        if (residuals.back() > std::sqrt(eps)) ok = false;
    }
    if (!ok) {
        std::ostringstream os;
        os << "Aberth iteration did not converge; backward errors:";
        for (double r : residuals) os << ' ' << r;
        throw ConvergenceError(os.str());
    }
    return z;
}

/// Rational approximations of x by continued-fraction convergents, smallest
/// denominators first.
std::vector<mpq_class> convergent_candidates(const BigFloat& x, std::int64_t max_den, double rel_tol) {
    std::vector<mpq_class> out;
    if (x.is_zero()) {
        out.emplace_back(0);
        return out;
    }
    mpq_class value = x.to_rational();
    mpz_class h_prev = 1, h_prev2 = 0, k_prev = 0, k_prev2 = 1;
    mpq_class rest = value;
    const double target = std::fabs(x.to_double());
    for (int guard = 0; guard < 64; ++guard) {
        mpz_class a;
        mpz_fdiv_q(a.get_mpz_t(), rest.get_num_mpz_t(), rest.get_den_mpz_t());
        mpz_class h = a * h_prev + h_prev2;
        mpz_class k = a * k_prev + k_prev2;
        if (k > max_den) break;
        mpq_class approx(h, k);
        approx.canonicalize();
        const double err = std::fabs(mpq_class(approx - value).get_d());
        if (err <= rel_tol * std::max(1.0, target)) out.push_back(approx);
        mpq_class frac = rest - mpq_class(a);
        if (sgn(frac) == 0) break;
        rest = 1 / frac;
        h_prev2 = h_prev;
        h_prev = h;
        k_prev2 = k_prev;
        k_prev = k;
    }
    return out;
}

std::vector<Root> dedup(std::vector<Root> roots, double tol) {
    std::vector<Root> out;
    for (auto& r : roots) {
        bool merged = false;
        for (auto& o : out) {
            if (o.exact || r.exact) continue;
            if (std::abs(o.value.to_complex() - r.value.to_complex()) <= tol) {
                const Backend be = o.value.backend();
                Scalar total = Scalar(o.multiplicity + r.multiplicity, be);
                o.value = (o.value * Scalar(o.multiplicity, be) + r.value * Scalar(r.multiplicity, be)) / total;
                o.multiplicity += r.multiplicity;
                o.residual = std::max(o.residual, r.residual);
                merged = true;
                break;
            }
        }
        if (!merged) out.push_back(std::move(r));
    }
    return out;
}

/// Float polynomial: Aberth plus clustering of nearly coincident roots that the
/// derivative test confirms to be multiple.
std::vector<Root> float_roots(const Polynomial& p, const RootOptions& opt, double tol) {
    std::vector<Root> out;
    const Backend be = p.backend();
    std::size_t v = p.valuation();
    if (v > 0) out.push_back({Scalar::zero(be), static_cast<int>(v), false, 0.0});
    Polynomial q = p.divided_by_power(v);
    if (q.degree() <= 0) return out;
    std::vector<Root> raw;
    for (auto& z : aberth(q, opt.max_iterations)) {
        double res = backward_error(q, z);
        raw.push_back({std::move(z), 1, false, res});
    }
    raw = dedup(std::move(raw), tol);
    // second pass: merge clusters that are genuine multiple roots
    std::vector<Root> merged;
    for (auto& r : raw) {
        bool done = false;
        for (auto& o : merged) {
            const double gap = std::abs(o.value.to_complex() - r.value.to_complex());
            if (gap > 1e-4 * std::max(1.0, o.value.abs())) continue;
            const Backend mbe = o.value.backend();
            const int total = o.multiplicity + r.multiplicity;
            Scalar centroid = (o.value * Scalar(o.multiplicity, mbe) + r.value * Scalar(r.multiplicity, mbe)) /
                              Scalar(total, mbe);
            if (root_multiplicity(q, centroid, 1e-6) >= total) {
                o.value = centroid;
                o.multiplicity = total;
                o.residual = backward_error(q, centroid);
                done = true;
                break;
            }
        }
        if (!done) merged.push_back(std::move(r));
    }
    for (auto& r : merged) out.push_back(std::move(r));
    return out;
}

}  // namespace

std::vector<Root> find_roots(const Polynomial& p, const RootOptions& options) {
    if (p.is_zero()) throw DomainError("roots of the zero polynomial are undefined");
    const double tol =
        options.dedup_tolerance >= 0 ? options.dedup_tolerance : default_dedup_tolerance(options.precision_bits);
    if (p.degree() == 0) return {};
    if (!p.backend().is_exact()) {
        RootOptions o = options;
        o.precision_bits = p.backend().precision_bits;
        return float_roots(p, o, tol);
    }

    const Backend out_be = Backend::floating(options.precision_bits);
    const unsigned work_bits = std::max(options.precision_bits, 113u);
    const Backend work_be = Backend::floating(work_bits);
    std::vector<Root> out;
    for (auto [factor, mult] : square_free_decomposition(p)) {
        Polynomial f = factor;
        std::size_t v = f.valuation();
        if (v > 0) {
            out.push_back({Scalar::zero(Backend::exact()), mult, true, 0.0});
            f = f.divided_by_power(v);
        }
        if (f.degree() <= 0) continue;
        std::vector<Scalar> approx = aberth(f.to(work_be), options.max_iterations);
        Polynomial remaining = f;
        std::vector<Root> inexact;
        for (const auto& a : approx) {
            bool snapped = false;
            if (remaining.degree() >= 1) {
                const double rel = 1e-20;
                auto re_c = convergent_candidates(a.re_float(), options.max_snap_denominator, rel);
                auto im_c = convergent_candidates(a.im_float(), options.max_snap_denominator, rel);
                for (std::size_t i = 0; i < re_c.size() && i < 4 && !snapped; ++i) {
                    for (std::size_t j = 0; j < im_c.size() && j < 4 && !snapped; ++j) {
                        Scalar cand = Scalar::exact(re_c[i], im_c[j]);
                        if (remaining.evaluate(cand).is_zero()) {
                            remaining = divmod(remaining, Polynomial::linear(cand)).first;
                            out.push_back({cand, mult, true, 0.0});
                            snapped = true;
                        }
                    }
                }
            }
            if (!snapped) inexact.push_back({a.to(out_be), mult, false, backward_error(f.to(work_be), a)});
        }
        for (auto& r : inexact) out.push_back(std::move(r));
    }
    return out;
}

std::vector<long> nonnegative_integer_roots(const Polynomial& p, double tol) {
    if (p.is_zero()) throw DomainError("integer roots of the zero polynomial are undefined");
    std::vector<long> out;
    if (p.degree() == 0) return out;
    double bound = 0.0;
    const double lead = p.leading().abs();
    for (int i = 0; i < p.degree(); ++i) bound = std::max(bound, p.coefficient(i).abs() / lead);
    bound += 1.0;
    if (bound > 1e7) throw DomainError("integer root scan bound too large");
    const long limit = static_cast<long>(std::floor(bound));
    const Backend be = p.backend();
    for (long n = 0; n <= limit; ++n) {
        Scalar x(n, be);
        if (be.is_exact()) {
            if (p.evaluate(x).is_zero()) out.push_back(n);
        } else {
            double scale = 0.0, np = 1.0;
            for (const auto& c : p.coefficients()) {
                scale += c.abs() * np;
                np *= static_cast<double>(n);
            }
            if (p.evaluate(x).abs() <= tol * scale) out.push_back(n);
        }
    }
    return out;
}

}  // namespace fuchs
