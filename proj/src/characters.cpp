#include "weilgap/characters.hpp"

#include <numbers>
#include <stdexcept>

namespace weilgap {

namespace {

struct CyclicFactor {
    std::int64_t modulus; // prime power
    std::int64_t gen;     // generator of the cyclic piece (mod modulus)
    std::int64_t order;
    std::vector<std::int64_t> log; // log[x mod modulus], -1 if not in the subgroup
};

// (Z/p^e)^x as a list of cyclic factors with discrete-log tables.
std::vector<CyclicFactor> cyclic_factors(std::int64_t pe, std::int64_t p)
{
    std::vector<CyclicFactor> out;
    auto table = [pe](std::int64_t g, std::int64_t order) {
        std::vector<std::int64_t> log(static_cast<std::size_t>(pe), -1);
        std::int64_t x = 1;
        for (std::int64_t k = 0; k < order; ++k) {
            log[static_cast<std::size_t>(x)] = k;
            x = x * g % pe;
        }
        return log;
    };
    if (p != 2) {
        const std::int64_t g = primitive_root(pe);
        const std::int64_t n = euler_phi(pe);
        out.push_back({pe, g, n, table(g, n)});
    } else if (pe == 4) {
        out.push_back({4, 3, 2, table(3, 2)});
    } else if (pe >= 8) {
        // <-1> x <5>
        out.push_back({pe, pe - 1, 2, {}});
        out.push_back({pe, 5, pe / 4, table(5, pe / 4)});
    }
    return out;
}

} // namespace

ModCharacter::ModCharacter(std::int64_t q, std::vector<std::optional<Rational>> angles)
    : q_(q), angles_(std::move(angles))
{
    if (q < 1)
        throw std::invalid_argument("character modulus must be positive");
    if (angles_.size() != static_cast<std::size_t>(q))
        throw std::invalid_argument("character table has the wrong size");
}

ModCharacter ModCharacter::trivial(std::int64_t q)
{
    std::vector<std::optional<Rational>> a(static_cast<std::size_t>(q));
    for (std::int64_t x = 0; x < q; ++x)
        if (gcd(x, q) == 1)
            a[static_cast<std::size_t>(x)] = Rational(0);
    return {q, std::move(a)};
}

ModCharacter ModCharacter::quadratic(std::int64_t q)
{
    if (q < 3 || !is_prime(q))
        throw std::invalid_argument("quadratic character needs an odd prime modulus");
    std::vector<std::optional<Rational>> a(static_cast<std::size_t>(q));
    std::vector<bool> square(static_cast<std::size_t>(q), false);
    for (std::int64_t x = 1; x < q; ++x)
        square[static_cast<std::size_t>(x * x % q)] = true;
    for (std::int64_t x = 1; x < q; ++x)
        a[static_cast<std::size_t>(x)] = square[static_cast<std::size_t>(x)] ? Rational(0) : Rational(1, 2);
    return {q, std::move(a)};
}

std::optional<Rational> ModCharacter::angle(std::int64_t x) const
{
    return angles_[static_cast<std::size_t>(mod(x, q_))];
}

cplx ModCharacter::value(std::int64_t x) const
{
    const auto a = angle(x);
    if (!a)
        return 0.0;
    return std::polar(1.0, 2 * std::numbers::pi * a->get_d());
}

ModCharacter ModCharacter::conj() const
{
    auto a = angles_;
    for (auto& x : a)
        if (x)
            x = frac(-*x);
    return {q_, std::move(a)};
}

std::int64_t ModCharacter::conductor() const
{
    for (auto d : divisors(q_)) {
        bool induced = true;
        for (std::int64_t x = 1; x < q_ && induced; ++x)
            if (gcd(x, q_) == 1 && x % d == 1 % d && *angle(x) != 0)
                induced = false;
        if (induced)
            return d;
    }
    return q_;
}

bool ModCharacter::is_primitive() const
{
    return conductor() == q_;
}

bool ModCharacter::is_even() const
{
    return q_ <= 2 || *angle(-1) == 0;
}

std::string ModCharacter::to_string() const
{
    std::string out = "chi mod " + std::to_string(q_) + " [";
    bool first = true;
    for (std::int64_t x = 0; x < q_; ++x) {
        if (!angles_[static_cast<std::size_t>(x)])
            continue;
        out += (first ? "" : ", ") + std::to_string(x) + ":" + angles_[static_cast<std::size_t>(x)]->get_str();
        first = false;
    }
    return out + "]";
}

std::vector<ModCharacter> all_characters(std::int64_t q)
{
    if (q < 1)
        throw std::invalid_argument("character modulus must be positive");
    std::vector<CyclicFactor> facs;
    for (auto [p, e] : factorize(q)) {
        std::int64_t pe = 1;
        for (int i = 0; i < e; ++i)
            pe *= p;
        for (auto& f : cyclic_factors(pe, p))
            facs.push_back(std::move(f));
    }
    // log of x in each factor
    auto logs = [&](std::int64_t x) {
        std::vector<std::int64_t> out;
        for (const auto& f : facs) {
            const std::int64_t r = x % f.modulus;
            if (f.log.empty()) {
                // 2-power modulus >= 8: the <-1> coordinate is r = 3 mod 4
                out.push_back(r % 4 == 3 ? 1 : 0);
            } else if (f.modulus % 2 == 0 && f.order == f.modulus / 4) {
                const std::int64_t s = r % 4 == 3 ? f.modulus - r : r;
                out.push_back(f.log[static_cast<std::size_t>(s)]);
            } else {
                out.push_back(f.log[static_cast<std::size_t>(r)]);
            }
        }
        return out;
    };
    std::vector<std::vector<std::int64_t>> table(static_cast<std::size_t>(q));
    for (std::int64_t x = 0; x < q; ++x)
        if (gcd(x, q) == 1)
            table[static_cast<std::size_t>(x)] = logs(x);

    std::vector<ModCharacter> out;
    std::vector<std::int64_t> k(facs.size(), 0);
    for (;;) {
        std::vector<std::optional<Rational>> a(static_cast<std::size_t>(q));
        for (std::int64_t x = 0; x < q; ++x) {
            if (gcd(x, q) != 1)
                continue;
            Rational s = 0;
            for (std::size_t i = 0; i < facs.size(); ++i)
                s += Rational(k[i] * table[static_cast<std::size_t>(x)][i], facs[i].order);
            a[static_cast<std::size_t>(x)] = frac(s);
        }
        out.emplace_back(q, std::move(a));
        std::size_t i = 0;
        while (i < facs.size() && ++k[i] == facs[i].order)
            k[i++] = 0;
        if (i == facs.size())
            break;
    }
    return out;
}

std::vector<ModCharacter> primitive_characters(std::int64_t q)
{
    std::vector<ModCharacter> out;
    for (auto& c : all_characters(q))
        if (c.is_primitive())
            out.push_back(std::move(c));
    return out;
}

cplx gauss_sum(const ModCharacter& psi)
{
    const std::int64_t q = psi.modulus();
    cplx s = 0;
    for (std::int64_t a = 0; a < q; ++a)
        s += psi.value(a) * std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(a) / q);
    return s;
}

} // namespace weilgap
