#pragma once

#include <cstdint>
#include <vector>

#include <gmpxx.h>

namespace weilgap {

using Integer = mpz_class;
using Rational = mpq_class;

// Small-integer helpers. Moduli in this library are at most a few thousand,
// so machine integers suffice here; group elements use Integer.

bool is_prime(std::int64_t n);

std::int64_t gcd(std::int64_t a, std::int64_t b);

/// Nonnegative residue of a modulo m (m > 0).
std::int64_t mod(std::int64_t a, std::int64_t m);

/// Inverse of a modulo m; throws std::domain_error if gcd(a, m) != 1.
std::int64_t inverse_mod(std::int64_t a, std::int64_t m);

std::int64_t euler_phi(std::int64_t n);

int moebius_mu(std::int64_t n);

std::vector<std::int64_t> divisors(std::int64_t n);

/// Prime factorisation as (prime, exponent) pairs in increasing order.
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n);

/// Smallest primitive root modulo an odd prime power or 2, 4.
std::int64_t primitive_root(std::int64_t n);

/// Bezout: returns g = gcd(a, b) >= 0 and sets x, y with a x + b y = g.
Integer extended_gcd(const Integer& a, const Integer& b, Integer& x, Integer& y);

/// Floor division and nonnegative remainder for arbitrary-precision integers.
Integer floor_div(const Integer& a, const Integer& b);
Integer floor_mod(const Integer& a, const Integer& b);

/// Rational number reduced into [0, 1).
Rational frac(const Rational& r);

} // namespace weilgap
