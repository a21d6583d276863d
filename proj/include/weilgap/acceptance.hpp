#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "weilgap/io.hpp"

namespace weilgap {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double wall_seconds = 0;
    json detail = json::object();
};

constexpr int kCriteria = 10;

/// Runs acceptance criterion `id` (1..10); randomized parts draw from `seed`.
CriterionResult run_criterion(int id, std::uint64_t seed = 20240601);

std::vector<CriterionResult> run_all(std::uint64_t seed = 20240601);

/// Infinite-order multiplier form E_u * Delta at p = 29, Q = 1: reported, not gated.
json infinite_order_experiment();

json criterion_to_json(const CriterionResult& r);
/// One line: "criterion N: PASS|FAIL  name  (t s)".
std::string criterion_line(const CriterionResult& r);

} // namespace weilgap
