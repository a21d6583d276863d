#pragma once

#include <iosfwd>
#include <memory>
#include <string>

#include <json.hpp>

#include "weilgap/analytic.hpp"

namespace weilgap {

using json = nlohmann::ordered_json;

/// [a, b, c, d]; entries are numbers when they fit in 64 bits, else strings.
json mat_to_json(const Mat2& m);
/// Throws std::invalid_argument on malformed input or det != 1.
Mat2 mat_from_json(const json& j);
/// Parses "a,b,c,d".
Mat2 parse_matrix(const std::string& text);

json integer_to_json(const Integer& x);
Integer integer_from_json(const json& j);

/// [{"gen": "S"|"T", "exp": n}, ...]
json word_to_json(const STWord& w);
/// [{"gen": label, "exp": n}, ...] over the Rademacher generators.
json word_to_json(const GammaWord& w, const GenSet& gens);

json generators_to_json(const GenSet& gens);

/// {p, angles: [{label, rational: "n/d", irrational: "n/d"}]}
json multiplier_to_json(const MultiplierSystem& u);
/// Labels must match the generators of `gens`.
MultiplierSystem multiplier_from_json(const json& j, std::shared_ptr<const GenSet> gens);

/// Header {label, weight, level, sigma, M, error_bound} followed by one
/// {"m", "re", "im"} line per coefficient; exact coefficients are integer
/// strings, others carry an "err" field when nonzero.
void write_coeffs(std::ostream& os, const CoeffSeries& f);
/// Throws std::runtime_error with the offending line number.
CoeffSeries read_coeffs(std::istream& is);
CoeffSeries read_coeffs_file(const std::string& path);

json certificate_to_json(const Certificate& c);
json fe_report_to_json(const FEReport& r);
json lambda_to_json(const LambdaValue& v);
json cplx_to_json(cplx z);
/// Parses "re,im" or "re".
cplx parse_complex(const std::string& text);

/// Resolved parameters of one CLI run.
struct ExperimentConfig {
    std::string command;
    json params = json::object();
    std::string output;
    std::uint64_t seed = 0;

    bool operator==(const ExperimentConfig&) const = default;
};

json config_to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const json& j);

} // namespace weilgap
