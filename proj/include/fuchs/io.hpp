#pragma once

#include <string>

#include "fuchs/continued_fraction.hpp"
#include "fuchs/hypergeometric.hpp"
#include "json.hpp"

namespace fuchs::io {

using Json = nlohmann::ordered_json;

/// [re, im]: "p/q" strings for exact values, numbers up to 53 bits, decimal
/// strings beyond.
Json to_json(const Scalar& s);
/// Accepts [re, im], a single component, numbers or strings ("p/q", decimals).
Scalar scalar_from_json(const Json& j, Backend backend);

Json to_json(const Polynomial& p);
Polynomial polynomial_from_json(const Json& j, Backend backend);

/// {"num": [...], "den": [...]}; a bare array is a polynomial.
Json to_json(const RationalFunction& f);
RationalFunction rational_from_json(const Json& j, Backend backend);

Json to_json(const DifferentialOperator& op);
/// ParseError on a malformed document, with the offending key in the message.
DifferentialOperator operator_from_json(const Json& j);
/// ParseError with the byte position for invalid JSON text.
DifferentialOperator load_operator(const std::string& path);
Json parse_text(const std::string& text, const std::string& origin);

Json backend_json(Backend be);

Json singular_report(const DifferentialOperator& op);
Json regions_report(const SingularSet& sites);
Json to_json(const GridCell& cell);
Json to_json(const RatioEstimate& r, std::size_t history_tail);
Json to_json(const LogDerivResult& r);
Json to_json(const CFEvaluation& ev);
Json to_json(const CfEquivalenceReport& rep);
Json to_json(const DichotomyReport& rep);

/// {"error": kind, "reason": message, "exit_code": code}.
Json error_report(const std::string& kind, const std::string& reason, int exit_code);

}  // namespace fuchs::io
