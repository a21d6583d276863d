#include "weilgap/number_theory.hpp"

#include <stdexcept>
#include <string>

namespace weilgap {

bool is_prime(std::int64_t n)
{
    if (n < 2)
        return false;
    if (n < 4)
        return true;
    if (n % 2 == 0 || n % 3 == 0)
        return false;
    for (std::int64_t i = 5; i * i <= n; i += 6)
        if (n % i == 0 || n % (i + 2) == 0)
            return false;
    return true;
}

std::int64_t gcd(std::int64_t a, std::int64_t b)
{
    if (a < 0)
        a = -a;
    if (b < 0)
        b = -b;
    while (b != 0) {
        std::int64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::int64_t mod(std::int64_t a, std::int64_t m)
{
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t m)
{
    std::int64_t r0 = mod(a, m), r1 = m;
    std::int64_t s0 = 1, s1 = 0;
    while (r1 != 0) {
        std::int64_t q = r0 / r1;
        std::int64_t t = r0 - q * r1;
        r0 = r1;
        r1 = t;
        t = s0 - q * s1;
        s0 = s1;
        s1 = t;
    }
    if (r0 != 1)
        throw std::domain_error(std::to_string(a) + " is not invertible modulo " + std::to_string(m));
    return mod(s0, m);
}

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n)
{
    std::vector<std::pair<std::int64_t, int>> out;
    for (std::int64_t d = 2; d * d <= n; ++d) {
        if (n % d != 0)
            continue;
        int e = 0;
        while (n % d == 0) {
            n /= d;
            ++e;
        }
        out.emplace_back(d, e);
    }
    if (n > 1)
        out.emplace_back(n, 1);
    return out;
}

std::int64_t euler_phi(std::int64_t n)
{
    std::int64_t r = n;
    for (auto [q, e] : factorize(n))
        r = r / q * (q - 1);
    return r;
}

int moebius_mu(std::int64_t n)
{
    int mu = 1;
    for (auto [q, e] : factorize(n)) {
        if (e > 1)
            return 0;
        mu = -mu;
    }
    return mu;
}

std::vector<std::int64_t> divisors(std::int64_t n)
{
    std::vector<std::int64_t> lo, hi;
    for (std::int64_t d = 1; d * d <= n; ++d) {
        if (n % d != 0)
            continue;
        lo.push_back(d);
        if (d * d != n)
            hi.push_back(n / d);
    }
    lo.insert(lo.end(), hi.rbegin(), hi.rend());
    return lo;
}

std::int64_t primitive_root(std::int64_t n)
{
    if (n == 2)
        return 1;
    if (n == 4)
        return 3;
    const std::int64_t phi = euler_phi(n);
    const auto fs = factorize(phi);
    for (std::int64_t g = 2; g < n; ++g) {
        if (gcd(g, n) != 1)
            continue;
        bool ok = true;
        for (auto [q, e] : fs) {
            std::int64_t x = 1, base = g, ex = phi / q;
            while (ex > 0) {
                if (ex & 1)
                    x = x * base % n;
                base = base * base % n;
                ex >>= 1;
            }
            if (x == 1) {
                ok = false;
                break;
            }
        }
        if (ok)
            return g;
    }
    throw std::domain_error("no primitive root modulo " + std::to_string(n));
}

Integer extended_gcd(const Integer& a, const Integer& b, Integer& x, Integer& y)
{
    Integer g;
    mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

Integer floor_div(const Integer& a, const Integer& b)
{
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

Integer floor_mod(const Integer& a, const Integer& b)
{
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (r < 0)
        r += abs(b);
    return r;
}

Rational frac(const Rational& r)
{
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    Rational out = r - Rational(q);
    out.canonicalize();
    return out;
}

} // namespace weilgap
