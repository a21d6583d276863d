#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "weilgap/arith.hpp"

namespace weilgap {

/**
 * Dirichlet character modulo any q >= 1, stored as the angle of psi(x) for
 * every residue x (empty for gcd(x, q) > 1).
 */
class ModCharacter {
public:
    ModCharacter(std::int64_t q, std::vector<std::optional<Rational>> angles);

    static ModCharacter trivial(std::int64_t q);
    /// Legendre symbol modulo an odd prime.
    static ModCharacter quadratic(std::int64_t q);

    std::int64_t modulus() const { return q_; }
    std::optional<Rational> angle(std::int64_t x) const;
    cplx value(std::int64_t x) const;
    ModCharacter conj() const;
    bool is_primitive() const;
    std::int64_t conductor() const;
    bool is_even() const;
    std::string to_string() const;

private:
    std::int64_t q_;
    std::vector<std::optional<Rational>> angles_;
};

/// All phi(q) characters modulo q, built from the CRT decomposition of (Z/q)^x.
std::vector<ModCharacter> all_characters(std::int64_t q);

std::vector<ModCharacter> primitive_characters(std::int64_t q);

/// tau(psi) = sum_{a mod q} psi(a) e(a/q).
cplx gauss_sum(const ModCharacter& psi);

} // namespace weilgap
