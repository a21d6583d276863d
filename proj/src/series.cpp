#include "weilgap/series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace weilgap {

namespace {

constexpr double kPi = std::numbers::pi;

cplx e_of(double x)
{
    return std::polar(1.0, 2 * kPi * x);
}

double log_factorial(int n)
{
    return std::lgamma(n + 1.0);
}

} // namespace

double CoeffSeries::error_bound() const
{
    double e = 0;
    for (double x : err)
        e = std::max(e, x);
    return e;
}

void CoeffSeries::update_growth()
{
    growth_C = 0;
    for (std::size_t m = 1; m <= M(); ++m) {
        const double bound = std::abs(a[m]) + (err.empty() ? 0.0 : err[m]);
        growth_C = std::max(growth_C, bound / std::pow(static_cast<double>(m), sigma));
    }
}

bool CoeffSeries::growth_holds() const
{
    for (std::size_t m = 1; m <= M(); ++m)
        if (std::abs(a[m]) > growth_C * std::pow(static_cast<double>(m), sigma) * (1 + 1e-12))
            return false;
    return true;
}

CoeffSeries CoeffSeries::from_integers(std::string label, int weight, std::int64_t level, double sigma,
                                       std::vector<Integer> coeffs)
{
    CoeffSeries s;
    s.label = std::move(label);
    s.weight = weight;
    s.level = level;
    s.sigma = sigma;
    s.a.reserve(coeffs.size());
    for (const auto& x : coeffs)
        s.a.emplace_back(x.get_d(), 0.0);
    s.err.assign(coeffs.size(), 0.0);
    s.exact = std::move(coeffs);
    s.update_growth();
    return s;
}

CoeffSeries CoeffSeries::from_complex(std::string label, int weight, std::int64_t level, double sigma,
                                      std::vector<cplx> coeffs, std::vector<double> errs)
{
    CoeffSeries s;
    s.label = std::move(label);
    s.weight = weight;
    s.level = level;
    s.sigma = sigma;
    if (errs.empty())
        errs.assign(coeffs.size(), 0.0);
    if (errs.size() != coeffs.size())
        throw std::invalid_argument("error vector length mismatch");
    s.a = std::move(coeffs);
    s.err = std::move(errs);
    s.update_growth();
    return s;
}

CoeffSeries one_series(std::size_t M)
{
    std::vector<Integer> c(M + 1, Integer(0));
    c[0] = 1;
    return CoeffSeries::from_integers("one", 0, 1, 0, std::move(c));
}

CoeffSeries delta_coeffs(std::size_t M)
{
    if (M < 1)
        throw std::invalid_argument("delta_coeffs needs M >= 1");
    // P = prod (1 - x^n) via pentagonal numbers
    std::vector<std::pair<std::size_t, int>> pent;
    for (std::int64_t k = 1;; ++k) {
        const std::int64_t g1 = k * (3 * k - 1) / 2, g2 = k * (3 * k + 1) / 2;
        if (static_cast<std::size_t>(g1) > M)
            break;
        const int sg = k % 2 ? -1 : 1;
        pent.emplace_back(g1, sg);
        if (static_cast<std::size_t>(g2) <= M)
            pent.emplace_back(g2, sg);
    }
    // F = P^24 by the J.C.P. Miller recurrence
    const int alpha = 24;
    std::vector<Integer> F(M, Integer(0));
    F[0] = 1;
    for (std::size_t n = 1; n < M; ++n) {
        Integer acc = 0;
        for (auto [i, sg] : pent) {
            if (i > n)
                break;
            acc += Integer(sg) * ((alpha + 1) * static_cast<long>(i) - static_cast<long>(n)) * F[n - i];
        }
        mpz_divexact_ui(acc.get_mpz_t(), acc.get_mpz_t(), n);
        F[n] = acc;
    }
    std::vector<Integer> tau(M + 1, Integer(0));
    for (std::size_t m = 1; m <= M; ++m)
        tau[m] = F[m - 1];
    return CoeffSeries::from_integers("delta", 12, 1, 6.0, std::move(tau));
}

CoeffSeries eisenstein_level1(int k, std::size_t M)
{
    long factor = 0;
    switch (k) {
    case 4: factor = 240; break;
    case 6: factor = -504; break;
    case 8: factor = 480; break;
    case 10: factor = -264; break;
    case 14: factor = -24; break;
    default: throw std::invalid_argument("unsupported Eisenstein weight " + std::to_string(k));
    }
    std::vector<Integer> c(M + 1, Integer(0));
    c[0] = 1;
    for (std::size_t n = 1; n <= M; ++n) {
        Integer s = 0;
        for (auto d : divisors(static_cast<std::int64_t>(n))) {
            Integer t;
            mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(k - 1));
            s += t;
        }
        c[n] = factor * s;
    }
    return CoeffSeries::from_integers("E" + std::to_string(k), k, 1, k - 1.0, std::move(c));
}

SeriesPair delta_delta_p(std::int64_t p, std::size_t M)
{
    if (!is_prime(p))
        throw std::invalid_argument(std::to_string(p) + " is not prime");
    const CoeffSeries d = delta_coeffs(M);
    const auto& tau = *d.exact;
    std::vector<Integer> c(M + 1, Integer(0));
    for (std::size_t m = 1; m <= M; ++m)
        for (std::size_t j = 1; static_cast<std::int64_t>(j) * p < static_cast<std::int64_t>(m); ++j)
            c[m] += tau[m - j * p] * tau[j];
    CoeffSeries f = CoeffSeries::from_integers("delta_delta_" + std::to_string(p), 24, p, 12.0, std::move(c));
    return {f, f};
}

CoeffSeries multiply(const CoeffSeries& f, const CoeffSeries& g)
{
    const std::size_t M = std::min(f.M(), g.M());
    const std::string label = f.label + "*" + g.label;
    const int weight = f.weight + g.weight;
    const std::int64_t level = std::max(f.level, g.level);
    const double sigma = f.sigma + g.sigma + 1;
    if (f.exact && g.exact) {
        std::vector<Integer> c(M + 1, Integer(0));
        for (std::size_t i = 0; i <= M; ++i)
            for (std::size_t j = 0; i + j <= M; ++j)
                c[i + j] += (*f.exact)[i] * (*g.exact)[j];
        return CoeffSeries::from_integers(label, weight, level, sigma, std::move(c));
    }
    std::vector<cplx> c(M + 1, 0.0);
    std::vector<double> e(M + 1, 0.0);
    for (std::size_t i = 0; i <= M; ++i) {
        for (std::size_t j = 0; i + j <= M; ++j) {
            c[i + j] += f.a[i] * g.a[j];
            const double ef = f.err.empty() ? 0 : f.err[i], eg = g.err.empty() ? 0 : g.err[j];
            e[i + j] += std::abs(f.a[i]) * eg + ef * std::abs(g.a[j]) + ef * eg;
        }
    }
    return CoeffSeries::from_complex(label, weight, level, sigma, std::move(c), std::move(e));
}

CoeffSeries add(const CoeffSeries& f, const CoeffSeries& g)
{
    if (f.weight != g.weight)
        throw std::invalid_argument("adding series of different weight");
    const std::size_t M = std::min(f.M(), g.M());
    const std::string label = f.label + "+" + g.label;
    const double sigma = std::max(f.sigma, g.sigma);
    if (f.exact && g.exact) {
        std::vector<Integer> c(M + 1);
        for (std::size_t m = 0; m <= M; ++m)
            c[m] = (*f.exact)[m] + (*g.exact)[m];
        return CoeffSeries::from_integers(label, f.weight, std::max(f.level, g.level), sigma, std::move(c));
    }
    std::vector<cplx> c(M + 1);
    std::vector<double> e(M + 1);
    for (std::size_t m = 0; m <= M; ++m) {
        c[m] = f.a[m] + g.a[m];
        e[m] = (f.err.empty() ? 0 : f.err[m]) + (g.err.empty() ? 0 : g.err[m]);
    }
    return CoeffSeries::from_complex(label, f.weight, std::max(f.level, g.level), sigma, std::move(c), std::move(e));
}

CoeffSeries scale(const CoeffSeries& f, cplx c)
{
    std::vector<cplx> a(f.a.size());
    std::vector<double> e(f.a.size());
    for (std::size_t m = 0; m < a.size(); ++m) {
        a[m] = c * f.a[m];
        e[m] = std::abs(c) * (f.err.empty() ? 0 : f.err[m]);
    }
    return CoeffSeries::from_complex(f.label, f.weight, f.level, f.sigma, std::move(a), std::move(e));
}

CoeffSeries twist(const CoeffSeries& f, std::int64_t a, std::int64_t q)
{
    std::vector<cplx> c(f.a.size());
    for (std::size_t m = 0; m < c.size(); ++m)
        c[m] = f.a[m] * e_of(static_cast<double>(mod(a * static_cast<std::int64_t>(m), q)) / q);
    return CoeffSeries::from_complex(f.label + "@" + std::to_string(a) + "/" + std::to_string(q), f.weight, f.level,
                                     f.sigma, std::move(c), f.err);
}

Integer ramanujan_sum(std::int64_t c, std::int64_t m)
{
    const std::int64_t g = gcd(c, m == 0 ? c : m);
    Integer s = 0;
    for (auto d : divisors(g))
        s += Integer(d) * moebius_mu(c / d);
    return s;
}

TwistedKloosterman::TwistedKloosterman(std::int64_t p, std::optional<MultiplierSystem> u, bool force_lifts)
    : p_(p), u_(std::move(u)), force_(force_lifts)
{
    if (u_) {
        if (u_->p() != p)
            throw std::invalid_argument("multiplier level differs from p");
        if (!(u_->evaluate(Mat2::S()) == Angle()))
            throw std::invalid_argument("Kloosterman sum ill-defined: u(S) != 1");
    }
    if (force_ && !u_)
        throw std::invalid_argument("forced lifts need a multiplier system");
}

const std::vector<std::pair<std::int64_t, cplx>>& TwistedKloosterman::phases(std::int64_t c)
{
    auto it = memo_.find(c);
    if (it != memo_.end())
        return it->second;
    std::vector<std::pair<std::int64_t, cplx>> ph;
    for (std::int64_t d = 1; d <= c; ++d) {
        if (gcd(d, c) != 1)
            continue;
        Integer x, y;
        extended_gcd(Integer(d), Integer(c), x, y);
        const Mat2 g(x, -y, c, d);
        ph.emplace_back(d, std::conj(u_->evaluate(g).phase()));
    }
    return memo_.emplace(c, std::move(ph)).first->second;
}

std::vector<cplx> TwistedKloosterman::row(std::int64_t c, std::size_t M)
{
    if (c <= 0 || c % p_ != 0)
        throw std::invalid_argument("Kloosterman modulus must be a positive multiple of p");
    std::vector<cplx> out(M + 1, 0.0);
    if (exact()) {
        for (std::size_t m = 0; m <= M; ++m)
            out[m] = ramanujan_sum(c, static_cast<std::int64_t>(m)).get_d();
        return out;
    }
    std::vector<cplx> roots(static_cast<std::size_t>(c));
    for (std::int64_t k = 0; k < c; ++k)
        roots[static_cast<std::size_t>(k)] = e_of(static_cast<double>(k) / c);
    for (const auto& [d, ph] : phases(c)) {
        std::int64_t idx = 0;
        for (std::size_t m = 0; m <= M; ++m) {
            out[m] += ph * roots[static_cast<std::size_t>(idx)];
            idx += d;
            if (idx >= c)
                idx -= c;
        }
    }
    return out;
}

cplx TwistedKloosterman::operator()(std::int64_t m, std::int64_t c)
{
    if (m < 0)
        throw std::invalid_argument("negative frequency");
    if (exact()) {
        if (c <= 0 || c % p_ != 0)
            throw std::invalid_argument("Kloosterman modulus must be a positive multiple of p");
        return ramanujan_sum(c, m).get_d();
    }
    return row(c, static_cast<std::size_t>(m)).back();
}

cplx twisted_kloosterman(std::int64_t p, const MultiplierSystem& u, std::int64_t m, std::int64_t c)
{
    TwistedKloosterman k(p, u.is_trivial() ? std::nullopt : std::optional<MultiplierSystem>(u));
    return k(m, c);
}

cplx kloosterman_brute_force(const MultiplierSystem& u, std::int64_t m, std::int64_t c)
{
    cplx s = 0;
    for (std::int64_t d = 0; d < c; ++d) {
        if (gcd(d, c) != 1)
            continue;
        // a different lift: solve a d = 1 mod c directly, then b = (a d - 1)/c
        const std::int64_t a = c == 1 ? 1 : inverse_mod(d, c);
        const Mat2 g(a, (Integer(a) * d - 1) / c, c, d);
        s += std::conj(u.evaluate(g).phase()) * std::exp(cplx(0, 2 * kPi * static_cast<double>(m) * d / c));
    }
    return s;
}

double eisenstein_tail_bound(std::int64_t p, int w, std::int64_t m, std::int64_t c_max)
{
    const std::int64_t cm = c_max / p * p;
    const double logpref = w * std::log(2 * kPi) + (w - 1) * std::log(static_cast<double>(m)) - log_factorial(w - 1);
    return std::exp(logpref + (2 - w) * std::log(static_cast<double>(cm))) / (static_cast<double>(p) * (w - 2));
}

CoeffSeries eisenstein_multiplier_coeffs(std::int64_t p, const std::optional<MultiplierSystem>& u, int w,
                                         std::size_t M, std::int64_t c_max)
{
    if (w < 3)
        throw std::invalid_argument("Eisenstein series diverges for weight " + std::to_string(w));
    if (w % 2 != 0)
        throw std::invalid_argument("odd weight " + std::to_string(w) + " is not supported");
    if (c_max < p)
        throw std::invalid_argument("C_max must be at least p");
    const bool trivial = !u || u->is_trivial();
    TwistedKloosterman kl(p, trivial ? std::nullopt : u);

    std::vector<cplx> sums(M + 1, 0.0);
    for (std::int64_t c = p; c <= c_max; c += p) {
        const std::vector<cplx> r = kl.row(c, M);
        const double cw = std::pow(static_cast<double>(c), -w);
        for (std::size_t m = 1; m <= M; ++m)
            sums[m] += cw * r[m];
    }
    std::vector<cplx> a(M + 1, 0.0);
    std::vector<double> e(M + 1, 0.0);
    a[0] = 1;
    const double sign = (w / 2) % 2 ? -1.0 : 1.0; // (-i)^w
    for (std::size_t m = 1; m <= M; ++m) {
        const double logpref =
            w * std::log(2 * kPi) + (w - 1) * std::log(static_cast<double>(m)) - log_factorial(w - 1);
        a[m] = sign * std::exp(logpref) * sums[m];
        e[m] = eisenstein_tail_bound(p, w, static_cast<std::int64_t>(m), c_max);
    }
    return CoeffSeries::from_complex("eis" + std::to_string(w) + "_p" + std::to_string(p), w, p, w - 1.0,
                                     std::move(a), std::move(e));
}

SeriesValue<double> evaluate_series(const CoeffSeries& f, cplx z)
{
    return evaluate_series<double>(f, z);
}

ResidualReport modularity_residual(const CoeffSeries& f, const Mat2& g, const Angle& phase, cplx z)
{
    const cplx gz = mobius(g, z);
    const cplx j = cocycle(g, z);
    const auto at_gz = evaluate_series(f, gz);
    const auto at_z = evaluate_series(f, z);
    const cplx jk = std::pow(j, -f.weight);
    const cplx lhs = jk * at_gz.value;
    const cplx rhs = phase.phase() * at_z.value;
    return {std::abs(lhs - rhs), std::abs(jk) * at_gz.error + at_z.error};
}

} // namespace weilgap
