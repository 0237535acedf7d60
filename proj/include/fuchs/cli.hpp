#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "fuchs/io.hpp"

namespace fuchs::cli {

enum ExitCode { kOk = 0, kParseError = 2, kRefused = 3, kNoConvergence = 4 };

/// Every flag of every subcommand, with its default.
struct RunConfig {
    std::string subcommand;
    std::string op_path;
    /// Evaluation point "re,im" (series-ratio: the expansion center).
    std::string z;
    /// "re_min,re_max,n_re,im_min,im_max,n_im" for regions.
    std::string grid;
    /// Initial data "v0;v1;..." with each entry "re,im".
    std::string init;
    double tol = 1e-10;
    long n_max = 2000;
    long depth = 300;
    long verify_n = 10;
    long equiv_n = 12;
    /// Empty: keep the operator file's backend.
    std::string backend;
    unsigned precision_bits = 53;
    std::string out = "json";
    std::string mode = "auto";
    bool override_genericity = false;
    int window = 8;
    bool richardson = true;
    double ratio_tol = 1e-6;
    double match_tol = 1e-4;
    double guard_tol = 1e-12;
    double cf_tol = 1e-15;
    std::string a, b, c;
    std::string emit_convergents;
};

io::Json to_json(const RunConfig& cfg);
/// Missing keys keep their defaults; unknown keys are a ParseError.
RunConfig config_from_json(const io::Json& j);

/// (name, schema text) for every report, sorted by name.
const std::vector<std::pair<std::string, std::string>>& embedded_schemas();

/// Runs one command line. Reports go to out, diagnostics to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Runs a parsed configuration.
int run_config(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace fuchs::cli
