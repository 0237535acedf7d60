#include "fuchs/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace fuchs::io {

namespace {

Json component(const Scalar& s, bool real) {
    if (s.is_exact()) return (real ? s.re_rational() : s.im_rational()).get_str();
    const BigFloat v = real ? s.re_float() : s.im_float();
    if (v.precision() <= 53) return v.to_double();
    const int digits = static_cast<int>(std::ceil(v.precision() * 0.30103)) + 2;
    return v.to_string(digits);
}

std::string describe(const Json& j) {
    std::string text = j.dump();
    if (text.size() > 60) text = text.substr(0, 57) + "...";
    return text;
}

BigFloat float_component(const Json& j, unsigned bits) {
    if (j.is_number()) return BigFloat(j.get<double>(), bits);
    if (j.is_string()) {
        const std::string text = j.get<std::string>();
        if (text.find('/') != std::string::npos) return BigFloat(parse_rational(text), bits);
        try {
            return BigFloat(text, bits);
        } catch (const std::exception&) {
            throw ParseError("not a number: '" + text + "'");
        }
    }
    throw ParseError("expected a number or string, got " + describe(j));
}

mpq_class exact_component(const Json& j) {
    if (j.is_number_integer()) return mpq_class(j.get<long>());
    if (j.is_number()) {
        // decimals written as JSON numbers are taken at their shortest text form
        return parse_rational(j.dump());
    }
    if (j.is_string()) return parse_rational(j.get<std::string>());
    throw ParseError("expected a number or string, got " + describe(j));
}

const Json& member(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing key '") + key + "'");
    return j.at(key);
}

}  // namespace

Json to_json(const Scalar& s) { return Json::array({component(s, true), component(s, false)}); }

Scalar scalar_from_json(const Json& j, Backend backend) {
    Json re = j, im = 0;
    if (j.is_array()) {
        if (j.empty() || j.size() > 2) throw ParseError("scalar must be [re] or [re, im], got " + describe(j));
        re = j[0];
        im = j.size() == 2 ? j[1] : Json(0);
    }
    if (backend.is_exact()) return Scalar::exact(exact_component(re), exact_component(im));
    return Scalar::from_bigfloat(float_component(re, backend.precision_bits),
                                 float_component(im, backend.precision_bits));
}

Json to_json(const Polynomial& p) {
    Json out = Json::array();
    for (const auto& c : p.coefficients()) out.push_back(to_json(c));
    return out;
}

Polynomial polynomial_from_json(const Json& j, Backend backend) {
    if (!j.is_array()) throw ParseError("polynomial must be an array of coefficients, got " + describe(j));
    std::vector<Scalar> c;
    for (const auto& e : j) c.push_back(scalar_from_json(e, backend));
    return Polynomial(std::move(c), backend);
}

Json to_json(const RationalFunction& f) {
    if (f.is_polynomial()) return to_json(f.numerator());
    return Json{{"num", to_json(f.numerator())}, {"den", to_json(f.denominator())}};
}

RationalFunction rational_from_json(const Json& j, Backend backend) {
    if (j.is_array()) return RationalFunction(polynomial_from_json(j, backend));
    Polynomial num = polynomial_from_json(member(j, "num"), backend);
    Polynomial den = polynomial_from_json(member(j, "den"), backend);
    if (den.is_zero()) throw ParseError("zero denominator in rational coefficient");
    return RationalFunction(std::move(num), std::move(den));
}

Json backend_json(Backend be) {
    return Json{{"backend", be.is_exact() ? "exact" : "float"}, {"precision_bits", be.is_exact() ? 0 : be.precision_bits}};
}

Json to_json(const DifferentialOperator& op) {
    Json out;
    Json coeffs = Json::array();
    switch (op.form()) {
        case OperatorForm::Standard:
            out["form"] = "standard";
            for (const auto& q : op.q()) coeffs.push_back(to_json(q));
            break;
        case OperatorForm::DeltaPoly:
            out["form"] = "delta_poly";
            for (const auto& p : op.delta_coeffs()) coeffs.push_back(to_json(p));
            break;
        case OperatorForm::Theta:
            out["form"] = "theta";
            for (const auto& p : op.theta_coeffs()) coeffs.push_back(to_json(p));
            break;
    }
    out["order"] = op.order();
    out["coeffs"] = coeffs;
    const Json be = backend_json(op.backend());
    out["backend"] = be["backend"];
    out["precision_bits"] = op.backend().is_exact() ? 53 : op.backend().precision_bits;
    return out;
}

DifferentialOperator operator_from_json(const Json& j) {
    if (!j.is_object()) throw ParseError("operator document must be an object");
    const std::string form = member(j, "form").get<std::string>();
    const std::string backend = j.value("backend", std::string("exact"));
    long bits = j.value("precision_bits", 53L);
    if (bits < 2 || bits > 100000) throw ParseError("precision_bits out of range: " + std::to_string(bits));
    Backend be;
    if (backend == "exact") be = Backend::exact();
    else if (backend == "float") be = Backend::floating(static_cast<unsigned>(bits));
    else throw ParseError("backend must be 'exact' or 'float', got '" + backend + "'");
    const Json& coeffs = member(j, "coeffs");
    if (!coeffs.is_array() || coeffs.empty()) throw ParseError("'coeffs' must be a non-empty array");
    std::optional<DifferentialOperator> op;
    try {
        if (form == "standard") {
            std::vector<RationalFunction> q;
            for (const auto& c : coeffs) q.push_back(rational_from_json(c, be));
            op = DifferentialOperator::standard(std::move(q));
        } else if (form == "delta_poly" || form == "theta") {
            std::vector<Polynomial> p;
            for (const auto& c : coeffs) p.push_back(polynomial_from_json(c, be));
            op = form == "theta" ? DifferentialOperator::theta(std::move(p))
                                 : DifferentialOperator::delta_poly(std::move(p));
        } else {
            throw ParseError("form must be 'standard', 'delta_poly' or 'theta', got '" + form + "'");
        }
    } catch (const DomainError& e) {
        throw ParseError(std::string("invalid operator: ") + e.what());
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid operator: ") + e.what());
    }
    if (j.contains("order") && j.at("order").get<long>() != op->order()) {
        throw ParseError("declared order " + j.at("order").dump() + " differs from the coefficients' order " +
                         std::to_string(op->order()));
    }
    return *op;
}

Json parse_text(const std::string& text, const std::string& origin) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(origin + ": malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

DifferentialOperator load_operator(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open operator file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return operator_from_json(parse_text(buf.str(), path));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

Json singular_report(const DifferentialOperator& op) {
    const SingularSet set = singular_points(op);
    const FuchsianReport fr = is_fuchsian(op);
    Json points = Json::array();
    for (std::size_t i = 0; i < set.size(); ++i) {
        const Scalar& t = set.points[i];
        Json p;
        p["index"] = i;
        p["t"] = to_json(t);
        p["residual"] = set.residuals[i];
        for (const auto& fp : fr.points) {
            if ((fp.point - t.to(fp.point.backend())).abs() <= set.dedup_tolerance) {
                p["fuchsian"] = fp.fuchsian;
                p["pole_orders"] = fp.pole_orders;
            }
        }
        try {
            const SingularityReport rep = indicial_data(op, t);
            p["indicial_polynomial"] = to_json(rep.indicial_polynomial);
            Json ex = Json::array();
            for (const auto& e : rep.exponents) ex.push_back(to_json(e));
            p["exponents"] = ex;
            p["genericity"] = to_string(rep.generic_probe);
            p["explanation"] = rep.explanation;
        } catch (const Error& e) {
            p["genericity"] = to_string(Genericity::Undetermined);
            p["explanation"] = e.what();
        }
        points.push_back(p);
    }
    Json out;
    out["order"] = op.order();
    out["dedup_tolerance"] = set.dedup_tolerance;
    out["points"] = points;
    out["fuchsian"] = fr.fuchsian;
    out["regular_at_infinity"] = fr.regular_at_infinity;
    return out;
}

Json regions_report(const SingularSet& sites) {
    Json s = Json::array();
    for (const auto& t : sites.points) s.push_back(to_json(t));
    Json lines = Json::array();
    for (const auto& l : bisector_lines(sites)) {
        lines.push_back(Json{{"midpoint", to_json(l.midpoint)},
                             {"direction", to_json(l.direction)},
                             {"pair", Json::array({l.site_pair.first, l.site_pair.second})}});
    }
    return Json{{"sites", s}, {"lines", lines}};
}

namespace {

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json to_json(const GridCell& cell) {
    Json out;
    out["z"] = to_json(cell.z);
    out["nearest"] = cell.result.nearest_index ? Json(*cell.result.nearest_index) : Json(nullptr);
    out["is_tie"] = cell.result.is_tie;
    out["at_site"] = cell.at_site;
    out["distance"] = finite_or_null(cell.result.distance);
    out["distance_to_AL"] = finite_or_null(cell.result.distance_to_AL);
    return out;
}

Json to_json(const RatioEstimate& r, std::size_t history_tail) {
    Json out;
    out["limit"] = to_json(r.limit);
    out["radius"] = finite_or_null(r.radius);
    out["matched_singularity"] = r.matched_singularity ? Json(*r.matched_singularity) : Json(nullptr);
    out["implied_singularity"] = r.implied_singularity ? to_json(*r.implied_singularity) : Json(nullptr);
    out["accelerated"] = r.accelerated;
    out["converged"] = r.converged;
    out["spread"] = finite_or_null(r.spread);
    out["n_used"] = r.n_used;
    Json h = Json::array();
    const std::size_t start = r.history.size() > history_tail ? r.history.size() - history_tail : 0;
    for (std::size_t i = start; i < r.history.size(); ++i)
        h.push_back(Json::array({r.history[i].first, r.history[i].second.real(), r.history[i].second.imag()}));
    out["history_tail"] = h;
    return out;
}

Json to_json(const LogDerivResult& r) {
    Json out;
    out["value"] = to_json(r.value);
    out["n_used"] = r.n_used;
    out["cauchy_gap"] = r.cauchy_gap;
    out["nearest_index"] = r.nearest_index;
    out["nearest_site"] = to_json(r.nearest_site);
    out["skipped_indices"] = r.skipped_indices;
    out["switched_at"] = r.switched_at;
    Json h = Json::array();
    for (const auto& [n, v] : r.history) {
        const auto c = v.to_complex();
        h.push_back(Json::array({n, c.real(), c.imag()}));
    }
    out["history"] = h;
    return out;
}

Json to_json(const CFEvaluation& ev) {
    Json out;
    out["value"] = to_json(ev.value);
    out["n_used"] = ev.n_used;
    out["converged"] = ev.converged;
    out["last_gap"] = finite_or_null(ev.last_gap);
    out["infinite_at"] = ev.infinite_at;
    out["terminated_at"] = ev.terminated_at ? Json(*ev.terminated_at) : Json(nullptr);
    out["diagnostic"] = ev.diagnostic;
    return out;
}

Json to_json(const CfEquivalenceReport& rep) {
    Json out;
    out["orientation"] = rep.orientation;
    out["offset"] = rep.offset;
    out["all_equal"] = rep.all_equal;
    out["trivial"] = rep.trivial;
    out["explanation"] = rep.explanation;
    Json rows = Json::array();
    for (const auto& r : rep.rows) {
        rows.push_back(Json{{"n", r.n},
                            {"chain", to_json(r.chain_value)},
                            {"cf", to_json(r.cf_value)},
                            {"equal", r.equal},
                            {"discrepancy", finite_or_null(r.discrepancy)}});
    }
    out["rows"] = rows;
    return out;
}

Json to_json(const DichotomyReport& rep) {
    Json out;
    out["z"] = to_json(rep.z);
    out["side"] = rep.side;
    out["cf"] = to_json(rep.cf);
    out["oracle_left"] = rep.oracle_left ? to_json(*rep.oracle_left) : Json(nullptr);
    out["error_left"] = rep.error_left ? Json(*rep.error_left) : Json(nullptr);
    out["oracle_right"] = rep.oracle_right ? to_json(*rep.oracle_right) : Json(nullptr);
    out["error_right"] = rep.error_right ? Json(*rep.error_right) : Json(nullptr);
    out["distance_to_AL"] = finite_or_null(rep.distance_to_AL);
    out["expected_error"] = finite_or_null(rep.expected_error);
    return out;
}

Json error_report(const std::string& kind, const std::string& reason, int exit_code) {
    return Json{{"error", kind}, {"reason", reason}, {"exit_code", exit_code}};
}

}  // namespace fuchs::io
