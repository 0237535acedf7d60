#include "fuchs/cli.hpp"

#include <fstream>
#include <memory>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

namespace fuchs::cli {

using io::Json;

namespace {

const char* const kCommands[] = {"singular", "regions", "series-ratio", "logderiv", "cf", "hypergeom-check",
                                 "chain-verify"};

const char* const kDescriptions[] = {
    "Singular points, exponents, Fuchs check and genericity",
    "Bisector lines between singular points and optional grid classification",
    "Taylor series at --z and the limit of coefficient ratios",
    "Limit of -q_{0,n}/q_{1,n} at --z",
    "Continued fraction for y'/y at --z and its agreement with the chain",
    "2F1 fraction against the oracle on each side of Re z = 1/2",
    "Residual of the derivative chain against a series at --z",
};

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!text.empty() && text.back() == sep) out.emplace_back();
    return out;
}

Scalar parse_point(const std::string& text, Backend be, const char* flag) {
    if (text.empty()) throw ParseError(std::string("missing ") + flag);
    const auto parts = split(text, ',');
    if (parts.size() > 2) throw ParseError(std::string(flag) + " expects re[,im], got '" + text + "'");
    const mpq_class re = parse_rational(parts[0]);
    const mpq_class im = parts.size() == 2 ? parse_rational(parts[1]) : mpq_class(0);
    return Scalar::exact(re, im).to(be);
}

std::vector<Scalar> parse_init(const std::string& text, int m, Backend be, long fill) {
    std::vector<Scalar> out;
    if (text.empty()) {
        for (int i = 0; i < m; ++i) out.push_back(Scalar(i == 0 ? 1 : fill, be));
        return out;
    }
    for (const auto& part : split(text, ';')) out.push_back(parse_point(part, be, "--init"));
    if (static_cast<int>(out.size()) != m)
        throw ParseError("--init needs " + std::to_string(m) + " values, got " + std::to_string(out.size()));
    return out;
}

DifferentialOperator load(const RunConfig& cfg) {
    if (cfg.op_path.empty()) throw ParseError("missing --op");
    DifferentialOperator op = io::load_operator(cfg.op_path);
    if (cfg.backend == "exact") return op.to(Backend::exact());
    if (cfg.backend == "float") return op.to(Backend::floating(cfg.precision_bits));
    return op;
}

void write(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

std::string num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::string csv_scalar(const Scalar& s) {
    const auto c = s.to_complex();
    return num(c.real()) + "," + num(c.imag());
}

Json header(const RunConfig& cfg, Backend be) {
    Json j;
    j["command"] = cfg.subcommand;
    const Json b = io::backend_json(be);
    j["backend"] = b["backend"];
    j["precision_bits"] = b["precision_bits"];
    return j;
}

int cmd_singular(const RunConfig& cfg, std::ostream& out) {
    const DifferentialOperator op = load(cfg);
    Json rep = io::singular_report(op);
    if (cfg.out == "csv") {
        out << "index,t_re,t_im,residual,genericity\n";
        for (const auto& p : rep["points"]) {
            out << p["index"].get<long>() << ',' << csv_scalar(io::scalar_from_json(p["t"], Backend::floating(53)))
                << ',' << num(p["residual"].get<double>()) << ',' << p["genericity"].get<std::string>() << '\n';
        }
        return kOk;
    }
    Json j = header(cfg, op.backend());
    j["operator"] = io::to_json(op);
    j.update(rep);
    write(out, j);
    return kOk;
}

int cmd_regions(const RunConfig& cfg, std::ostream& out) {
    const DifferentialOperator op = load(cfg);
    const SingularSet sites = singular_points(op);
    Json j = header(cfg, op.backend());
    j.update(io::regions_report(sites));
    std::vector<GridCell> cells;
    if (!cfg.grid.empty()) {
        const auto g = split(cfg.grid, ',');
        if (g.size() != 6) throw ParseError("--grid expects re_min,re_max,n_re,im_min,im_max,n_im");
        try {
            cells = classify_grid(sites, std::stod(g[0]), std::stod(g[1]), std::stoi(g[2]), std::stod(g[3]),
                                  std::stod(g[4]), std::stoi(g[5]), cfg.guard_tol);
        } catch (const std::invalid_argument&) {
            throw ParseError("--grid has a non-numeric entry: '" + cfg.grid + "'");
        }
    }
    if (cfg.out == "csv") {
        if (cells.empty()) {
            out << "i,j,midpoint_re,midpoint_im,direction_re,direction_im\n";
            for (const auto& l : bisector_lines(sites)) {
                out << l.site_pair.first << ',' << l.site_pair.second << ',' << csv_scalar(l.midpoint) << ','
                    << csv_scalar(l.direction) << '\n';
            }
        } else {
            out << "re,im,nearest,is_tie,at_site,distance,distance_to_AL\n";
            for (const auto& c : cells) {
                out << csv_scalar(c.z) << ',' << (c.result.nearest_index ? std::to_string(*c.result.nearest_index) : "")
                    << ',' << c.result.is_tie << ',' << c.at_site << ',' << num(c.result.distance) << ','
                    << num(c.result.distance_to_AL) << '\n';
            }
        }
        return kOk;
    }
    if (!cells.empty()) {
        Json grid = Json::array();
        for (const auto& c : cells) grid.push_back(io::to_json(c));
        j["grid"] = grid;
    }
    write(out, j);
    return kOk;
}

int cmd_series_ratio(const RunConfig& cfg, std::ostream& out) {
    const DifferentialOperator op = load(cfg);
    const Backend be = op.backend();
    const Scalar z0 = parse_point(cfg.z.empty() ? "0" : cfg.z, be, "--z");
    const auto init = parse_init(cfg.init, op.order(), be, 0);
    const SeriesSolution series = solve_series(op, z0, init, cfg.n_max);
    RatioOptions ro;
    ro.acceleration = cfg.richardson ? Acceleration::Richardson : Acceleration::None;
    ro.window = cfg.window;
    ro.tol = cfg.ratio_tol;
    ro.match_tol = cfg.match_tol;
    const RatioEstimate est = ratio_limit(series, ro);
    if (cfg.out == "csv") {
        out << "n,ratio_re,ratio_im\n";
        for (const auto& [n, r] : est.history) out << n << ',' << num(r.real()) << ',' << num(r.imag()) << '\n';
        return kOk;
    }
    Json j = header(cfg, be);
    j["z0"] = io::to_json(z0);
    Json sites = Json::array();
    for (const auto& t : series.singular_set.points) sites.push_back(io::to_json(t));
    j["singular_points"] = sites;
    j["estimate"] = io::to_json(est, static_cast<std::size_t>(std::max(cfg.window, 1)));
    write(out, j);
    return kOk;
}

ChainMode parse_mode(const std::string& m) {
    if (m == "auto") return ChainMode::Auto;
    if (m == "symbolic") return ChainMode::Symbolic;
    if (m == "evaluate") return ChainMode::Evaluate;
    throw ParseError("--mode must be auto, symbolic or evaluate");
}

int cmd_logderiv(const RunConfig& cfg, std::ostream& out) {
    const DifferentialOperator op = load(cfg);
    const Scalar z = parse_point(cfg.z, op.backend(), "--z");
    LogDerivOptions lo;
    lo.tol = cfg.tol;
    lo.n_max = cfg.n_max;
    lo.override_genericity = cfg.override_genericity;
    lo.mode = parse_mode(cfg.mode);
    lo.guard_tol = cfg.guard_tol;
    const LogDerivResult res = logderiv_limit(op, z, lo);
    if (cfg.out == "csv") {
        out << "n,value_re,value_im\n";
        for (const auto& [n, v] : res.history) out << n << ',' << csv_scalar(v) << '\n';
        return kOk;
    }
    Json j = header(cfg, res.value.backend());
    j["z"] = io::to_json(z);
    j["result"] = io::to_json(res);
    write(out, j);
    return kOk;
}

void emit_convergents(std::ostream& os, const std::vector<ConvergentPair>& pairs) {
    os << "n,A_re,A_im,B_re,B_im,value_re,value_im\n";
    for (const auto& p : pairs) {
        os << p.n << ',' << csv_scalar(p.A) << ',' << csv_scalar(p.B) << ',';
        if (p.B.is_zero()) os << ",\n";
        else os << csv_scalar(p.A / p.B) << '\n';
    }
}

int cmd_cf(const RunConfig& cfg, std::ostream& out) {
    const DifferentialOperator op = load(cfg);
    const Scalar z = parse_point(cfg.z, op.backend(), "--z");
    if (!is_ordinary_point(op, z)) throw PreconditionError("z = " + z.str() + " is a singular point");
    Json j = header(cfg, op.backend());
    j["z"] = io::to_json(z);
    j["order"] = op.order();
    if (op.order() != 2) {
        const DerivativeRecurrence rec = derivative_recurrence(op, z);
        Json m;
        m["depth"] = cfg.depth;
        m["value"] = io::to_json(monster_ratio_eval(rec, cfg.depth));
        j["monster"] = m;
        write(out, j);
        return kOk;
    }
    IndexedScalar a1, a2;
    std::string route = "leibniz";
    try {
        auto rec = std::make_shared<DerivativeRecurrence>(derivative_recurrence(op, z));
        a1 = [rec](long n) { return rec->a(1, n); };
        a2 = [rec](long n) { return rec->a(2, n); };
    } catch (const DomainError& leibniz) {
        route = "taylor_basis";
        std::shared_ptr<std::vector<std::vector<Scalar>>> rows;
        try {
            rows = std::make_shared<std::vector<std::vector<Scalar>>>(
                derivative_recurrence_by_basis(op, z, cfg.depth + 2));
        } catch (const DomainError& basis) {
            throw DomainError(std::string("no derivative recurrence at z: ") + leibniz.what() + "; Taylor basis: " +
                              basis.what());
        }
        a1 = [rows](long n) { return rows->at(static_cast<std::size_t>(n))[0]; };
        a2 = [rows](long n) { return rows->at(static_cast<std::size_t>(n))[1]; };
    }
    const ContinuedFraction cf = from_order2_coefficients(a1, a2);
    const CFEvaluation ev = evaluate(cf, cfg.tol, cfg.depth);
    if (!cfg.emit_convergents.empty()) {
        const auto pairs = convergents(cf, std::max<long>(ev.n_used, 1));
        if (cfg.emit_convergents == "csv") {
            emit_convergents(out, pairs);
            return kOk;
        }
        std::ofstream file(cfg.emit_convergents);
        if (!file) throw ParseError("cannot write '" + cfg.emit_convergents + "'");
        emit_convergents(file, pairs);
    }
    if (cfg.out == "csv") {
        out << "value_re,value_im,n_used,converged,last_gap\n"
            << csv_scalar(ev.value) << ',' << ev.n_used << ',' << ev.converged << ',' << num(ev.last_gap) << '\n';
        return kOk;
    }
    j["coefficient_route"] = route;
    j["evaluation"] = io::to_json(ev);
    try {
        j["equivalence"] = io::to_json(cf_equivalence(op, z, std::max<long>(cfg.equiv_n, 3)));
    } catch (const DomainError& e) {
        j["equivalence"] = Json{{"error", e.what()}};
    }
    write(out, j);
    return kOk;
}

int cmd_hypergeom(const RunConfig& cfg, std::ostream& out) {
    if (cfg.a.empty() || cfg.b.empty() || cfg.c.empty()) throw ParseError("hypergeom-check needs --a, --b and --c");
    const Backend ex = Backend::exact();
    const HypergeomParams params(parse_point(cfg.a, ex, "--a"), parse_point(cfg.b, ex, "--b"),
                                 parse_point(cfg.c, ex, "--c"));
    const Scalar z = parse_point(cfg.z, ex, "--z");
    DichotomyOptions d;
    d.backend = cfg.backend == "exact" ? ex : Backend::floating(cfg.precision_bits);
    d.n_max = cfg.depth;
    d.cf_tol = cfg.cf_tol;
    d.guard_tol = cfg.guard_tol;
    const DichotomyReport rep = region_dichotomy_check(params, z, d);
    if (cfg.out == "csv") {
        out << "side,cf_re,cf_im,n_used,error_left,error_right\n"
            << rep.side << ',' << csv_scalar(rep.cf.value) << ',' << rep.cf.n_used << ','
            << (rep.error_left ? num(*rep.error_left) : "") << ',' << (rep.error_right ? num(*rep.error_right) : "")
            << '\n';
        return kOk;
    }
    Json j = header(cfg, d.backend);
    j["params"] = Json{{"a", io::to_json(params.a())}, {"b", io::to_json(params.b())}, {"c", io::to_json(params.c())}};
    try {
        j["switched_c"] = io::to_json(kummer_switch(params).c());
    } catch (const DomainError&) {
        j["switched_c"] = nullptr;
    }
    j["report"] = io::to_json(rep);
    write(out, j);
    return kOk;
}

int cmd_chain_verify(const RunConfig& cfg, std::ostream& out) {
    const DifferentialOperator op = load(cfg);
    const Backend be = op.backend();
    const Scalar z = parse_point(cfg.z, be, "--z");
    const int m = op.order();
    const auto init = parse_init(cfg.init, m, be, 1);
    const SeriesSolution series = solve_series(op, z, init, cfg.verify_n + 1);
    Json rows = Json::array();
    double worst = 0.0;
    Scalar fact = Scalar::one(be);
    for (long n = 1; n < m; ++n) fact = fact * Scalar(n, be);
    if (cfg.out == "csv") out << "n,residual_re,residual_im,relative\n";
    for (long n = m; n <= cfg.verify_n; ++n) {
        fact = fact * Scalar(n, be);
        const Scalar r = verify_chain(op, series, z, n);
        const double scale = std::max(1.0, (series.coefficients[static_cast<std::size_t>(n)] * fact).abs());
        const double rel = r.abs() / scale;
        worst = std::max(worst, rel);
        if (cfg.out == "csv") out << n << ',' << csv_scalar(r) << ',' << num(rel) << '\n';
        rows.push_back(Json{{"n", n}, {"residual", io::to_json(r)}, {"relative", rel}, {"zero", r.is_zero()}});
    }
    if (cfg.out == "csv") return kOk;
    Json j = header(cfg, be);
    j["z"] = io::to_json(z);
    j["rows"] = rows;
    j["max_relative"] = worst;
    write(out, j);
    return kOk;
}

int dispatch(const RunConfig& cfg, std::ostream& out) {
    if (cfg.out != "json" && cfg.out != "csv") throw ParseError("--out must be json or csv");
    if (!cfg.backend.empty() && cfg.backend != "exact" && cfg.backend != "float")
        throw ParseError("--backend must be exact or float");
    const std::string& s = cfg.subcommand;
    if (s == "singular") return cmd_singular(cfg, out);
    if (s == "regions") return cmd_regions(cfg, out);
    if (s == "series-ratio") return cmd_series_ratio(cfg, out);
    if (s == "logderiv") return cmd_logderiv(cfg, out);
    if (s == "cf") return cmd_cf(cfg, out);
    if (s == "hypergeom-check") return cmd_hypergeom(cfg, out);
    if (s == "chain-verify") return cmd_chain_verify(cfg, out);
    throw ParseError("unknown subcommand '" + s + "'");
}

int fail(std::ostream& out, std::ostream& err, const std::string& kind, const std::string& reason, int code) {
    err << "error (" << kind << "): " << reason << '\n';
    write(out, io::error_report(kind, reason, code));
    return code;
}

}  // namespace

Json to_json(const RunConfig& c) {
    Json j;
    j["subcommand"] = c.subcommand;
    j["op"] = c.op_path;
    j["z"] = c.z;
    j["grid"] = c.grid;
    j["init"] = c.init;
    j["tol"] = c.tol;
    j["n_max"] = c.n_max;
    j["depth"] = c.depth;
    j["verify_n"] = c.verify_n;
    j["equiv_n"] = c.equiv_n;
    j["backend"] = c.backend;
    j["precision_bits"] = c.precision_bits;
    j["out"] = c.out;
    j["mode"] = c.mode;
    j["override_genericity"] = c.override_genericity;
    j["window"] = c.window;
    j["richardson"] = c.richardson;
    j["ratio_tol"] = c.ratio_tol;
    j["match_tol"] = c.match_tol;
    j["guard_tol"] = c.guard_tol;
    j["cf_tol"] = c.cf_tol;
    j["a"] = c.a;
    j["b"] = c.b;
    j["c"] = c.c;
    j["emit_convergents"] = c.emit_convergents;
    return j;
}

RunConfig config_from_json(const Json& j) {
    if (!j.is_object()) throw ParseError("run configuration must be an object");
    const Json defaults = to_json(RunConfig{});
    for (const auto& [key, value] : j.items()) {
        if (!defaults.contains(key)) throw ParseError("unknown configuration key '" + key + "'");
        if (defaults[key].type() != value.type() &&
            !(defaults[key].is_number() && value.is_number())) {
            throw ParseError("configuration key '" + key + "' has the wrong type");
        }
    }
    RunConfig c;
    auto get = [&j](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("subcommand", c.subcommand);
    get("op", c.op_path);
    get("z", c.z);
    get("grid", c.grid);
    get("init", c.init);
    get("tol", c.tol);
    get("n_max", c.n_max);
    get("depth", c.depth);
    get("verify_n", c.verify_n);
    get("equiv_n", c.equiv_n);
    get("backend", c.backend);
    get("precision_bits", c.precision_bits);
    get("out", c.out);
    get("mode", c.mode);
    get("override_genericity", c.override_genericity);
    get("window", c.window);
    get("richardson", c.richardson);
    get("ratio_tol", c.ratio_tol);
    get("match_tol", c.match_tol);
    get("guard_tol", c.guard_tol);
    get("cf_tol", c.cf_tol);
    get("a", c.a);
    get("b", c.b);
    get("c", c.c);
    get("emit_convergents", c.emit_convergents);
    return c;
}

int run_config(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        return dispatch(cfg, out);
    } catch (const ParseError& e) {
        return fail(out, err, "parse", e.what(), kParseError);
    } catch (const BackendMismatch& e) {
        return fail(out, err, "parse", e.what(), kParseError);
    } catch (const PreconditionError& e) {
        return fail(out, err, "precondition", e.what(), kRefused);
    } catch (const DomainError& e) {
        return fail(out, err, "domain", e.what(), kRefused);
    } catch (const ConvergenceError& e) {
        return fail(out, err, "convergence", e.what(), kNoConvergence);
    } catch (const nlohmann::json::exception& e) {
        return fail(out, err, "parse", e.what(), kParseError);
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    // a configuration file supplies the starting values; explicit flags override it
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                std::ifstream in(argv[i + 1]);
                if (!in) throw ParseError(std::string("cannot open configuration '") + argv[i + 1] + "'");
                std::stringstream buf;
                buf << in.rdbuf();
                cfg = config_from_json(io::parse_text(buf.str(), argv[i + 1]));
            } catch (const Error& e) {
                return fail(out, err, "parse", e.what(), kParseError);
            } catch (const nlohmann::json::exception& e) {
                return fail(out, err, "parse", e.what(), kParseError);
            }
        }
    }

    CLI::App app{"Continued fractions and derivative chains for Fuchsian equations"};
    app.set_version_flag("--version", std::string("fuchs 1.0"));
    std::string schema_name;
    bool dump_config = false;
    std::string config_path;
    app.add_option("--schema", schema_name, "Print a report schema (\"all\" lists every schema)")
        ->expected(0, 1)
        ->default_str("all");
    app.add_option("--config", config_path, "Load a run configuration (flags override it)");
    app.add_flag("--dump-config", dump_config, "Print the effective configuration and exit");
    app.require_subcommand(0, 1);

    const std::string prior = cfg.subcommand;
    for (std::size_t c = 0; c < std::size(kCommands); ++c) {
        const char* name = kCommands[c];
        CLI::App* sub = app.add_subcommand(name, kDescriptions[c]);
        sub->add_option("--op", cfg.op_path, "Operator JSON file");
        sub->add_option("--z,--z0", cfg.z, "Point re[,im]; components p/q or decimal");
        sub->add_option("--backend", cfg.backend, "exact | float (default: operator file)");
        sub->add_option("--precision-bits", cfg.precision_bits, "Float precision (default 53)");
        sub->add_option("--out", cfg.out, "json | csv (default json)");
        sub->add_option("--tol", cfg.tol, "Convergence tolerance (default 1e-10)");
        sub->add_option("--guard-tol", cfg.guard_tol, "Bisector guard tolerance (default 1e-12)");
        sub->add_option("--init", cfg.init, "Initial Taylor coefficients v0;v1;...");
        const std::string n(name);
        if (n == "regions") sub->add_option("--grid", cfg.grid, "re_min,re_max,n_re,im_min,im_max,n_im");
        if (n == "series-ratio" || n == "logderiv")
            sub->add_option("--n-max", cfg.n_max, "Largest index (default 2000)");
        if (n == "series-ratio") {
            sub->add_option("--window", cfg.window, "Window of settled estimates (default 8)");
            sub->add_flag("!--no-richardson", cfg.richardson, "Disable Richardson acceleration");
            sub->add_option("--ratio-tol", cfg.ratio_tol, "Window spread tolerance (default 1e-6)");
            sub->add_option("--match-tol", cfg.match_tol, "Radius match tolerance (default 1e-4)");
        }
        if (n == "logderiv") {
            sub->add_option("--mode", cfg.mode, "auto | symbolic | evaluate (default auto)");
            sub->add_flag("--override-genericity", cfg.override_genericity, "Skip the genericity requirement");
        }
        if (n == "cf" || n == "hypergeom-check") sub->add_option("--depth", cfg.depth, "Largest depth (default 300)");
        if (n == "cf") {
            sub->add_option("--emit-convergents", cfg.emit_convergents, "csv (to stdout) or a file path");
            sub->add_option("--equiv-n", cfg.equiv_n, "Last index of the equivalence table (default 12)");
        }
        if (n == "hypergeom-check") {
            sub->add_option("--a", cfg.a, "Parameter a (p/q)");
            sub->add_option("--b", cfg.b, "Parameter b (p/q)");
            sub->add_option("--c", cfg.c, "Parameter c (p/q)");
            sub->add_option("--cf-tol", cfg.cf_tol, "Fraction stopping gap (default 1e-15)");
        }
        if (n == "chain-verify") sub->add_option("--verify-n", cfg.verify_n, "Largest n (default 10)");
        sub->add_flag("--dump-config", dump_config, "Print the effective configuration and exit");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << "fuchs 1.0\n";
        return kOk;
    } catch (const CLI::ParseError& e) {
        return fail(out, err, "parse", e.what(), kParseError);
    }

    if (app.count("--schema") > 0) {
        const auto& schemas = embedded_schemas();
        // "--schema logderiv" parses as the bare flag followed by a subcommand
        if ((schema_name.empty() || schema_name == "all") && !app.get_subcommands().empty())
            schema_name = app.get_subcommands().front()->get_name();
        if (schema_name.empty() || schema_name == "all") {
            Json all = Json::object();
            for (const auto& [name, text] : schemas) all[name] = Json::parse(text);
            write(out, all);
            return kOk;
        }
        for (const auto& [name, text] : schemas) {
            if (name == schema_name) {
                out << text;
                if (text.empty() || text.back() != '\n') out << '\n';
                return kOk;
            }
        }
        return fail(out, err, "parse", "no schema named '" + schema_name + "'", kParseError);
    }
    const auto subs = app.get_subcommands();
    if (!subs.empty()) cfg.subcommand = subs.front()->get_name();
    else cfg.subcommand = prior;
    if (dump_config) {
        write(out, to_json(cfg));
        return kOk;
    }
    if (cfg.subcommand.empty()) {
        out << app.help();
        return kParseError;
    }
    return run_config(cfg, out, err);
}

}  // namespace fuchs::cli
