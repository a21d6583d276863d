#include "weilgap/special.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace weilgap {

namespace {

template <typename R>
using C = std::complex<R>;

template <typename R>
constexpr R kPi = std::numbers::pi_v<R>;

template <typename R>
bool is_nonpositive_integer(C<R> s)
{
    return s.imag() == 0 && s.real() <= 0 && s.real() == std::floor(s.real());
}

// Stirling series valid for Re z >= 20
template <typename R>
C<R> stirling(C<R> z)
{
    static constexpr std::array<R, 10> b2n{R(1) / 6,        R(-1) / 30,        R(1) / 42,   R(-1) / 30,
                                           R(5) / 66,       R(-691) / 2730,    R(7) / 6,    R(-3617) / 510,
                                           R(43867) / 798,  R(-174611) / 330};
    C<R> acc = (z - R(0.5)) * std::log(z) - z + R(0.5) * std::log(2 * kPi<R>);
    const C<R> z2 = z * z;
    C<R> zp = z;
    for (std::size_t n = 1; n <= b2n.size(); ++n) {
        acc += b2n[n - 1] / (R(2 * n * (2 * n - 1)) * zp);
        zp *= z2;
    }
    return acc;
}

template <typename R>
C<R> continued_fraction(C<R> s, R x, bool& converged)
{
    const R tiny = R(1e-300);
    const R eps = std::numeric_limits<R>::epsilon();
    C<R> b = x + R(1) - s;
    C<R> c = R(1) / tiny;
    C<R> d = R(1) / b;
    C<R> h = d;
    converged = false;
    for (int i = 1; i < 5000; ++i) {
        const C<R> an = -R(i) * (R(i) - s);
        b += R(2);
        d = an * d + b;
        if (std::abs(d) < tiny)
            d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny)
            c = tiny;
        d = R(1) / d;
        const C<R> del = d * c;
        h *= del;
        if (std::abs(del - R(1)) < eps) {
            converged = true;
            break;
        }
    }
    return std::exp(-x + s * std::log(x)) * h;
}

// gamma(s, x) = x^s e^-x sum x^n / (s (s+1) ... (s+n))
template <typename R>
C<R> lower_series(C<R> s, R x)
{
    const R eps = std::numeric_limits<R>::epsilon();
    C<R> term = R(1) / s;
    C<R> sum = term;
    for (int n = 1; n < 100000; ++n) {
        term *= x / (s + R(n));
        sum += term;
        if (std::abs(term) < eps / 8 * std::abs(sum))
            break;
    }
    return std::exp(-x + s * std::log(x)) * sum;
}

template <typename R>
R exp_integral_e1(R x)
{
    if (x >= 1) {
        bool ok = false;
        const C<R> v = continued_fraction(C<R>(0), x, ok);
        if (ok)
            return v.real();
    }
    const R eps = std::numeric_limits<R>::epsilon();
    R sum = 0, term = 1;
    for (int n = 1; n < 1000; ++n) {
        term *= -x / R(n);
        sum += term / R(n);
        if (std::abs(term / R(n)) < eps / 8 * std::abs(sum))
            break;
    }
    return -std::numbers::egamma_v<R> - std::log(x) - sum;
}

template <typename R>
C<R> lgamma_impl(C<R> s)
{
    if (is_nonpositive_integer(s))
        throw std::domain_error("Gamma has a pole at a nonpositive integer");
    if (s.real() < R(0.5)) {
        // reflection: Gamma(s) Gamma(1 - s) = pi / sin(pi s)
        return std::log(kPi<R>) - std::log(std::sin(kPi<R> * s)) - lgamma_impl(R(1) - s);
    }
    C<R> z = s;
    C<R> prod = 1;
    C<R> shift = 0;
    while (z.real() < 20) {
        prod *= z;
        if (std::abs(prod) > R(1e250)) {
            shift += std::log(prod);
            prod = 1;
        }
        z += R(1);
    }
    return stirling(z) - shift - std::log(prod);
}

template <typename R>
C<R> gamma_impl(C<R> s)
{
    if (s.imag() == 0 && s.real() > 0 && s.real() < 170 && s.real() == std::floor(s.real())) {
        R f = 1;
        for (int i = 2; i < static_cast<int>(s.real()); ++i)
            f *= R(i);
        return f;
    }
    return std::exp(lgamma_impl(s));
}

template <typename R>
C<R> upper_impl(C<R> s, R x)
{
    if (!(x > 0))
        throw std::domain_error("incomplete Gamma needs x > 0");
    if (x > std::max(R(1), s.real() + R(1))) {
        bool ok = false;
        const C<R> v = continued_fraction(s, x, ok);
        if (ok)
            return v;
    }
    if (is_nonpositive_integer(s)) {
        C<R> g = exp_integral_e1(x);
        for (int j = -1; j >= static_cast<int>(s.real()); --j)
            g = (g - std::exp(-x + R(j) * std::log(x))) / R(j);
        return g;
    }
    if (s.real() < R(0.5)) {
        const int n = static_cast<int>(std::ceil(R(0.5) - s.real()));
        C<R> g = upper_impl(s + R(n), x);
        for (int j = n - 1; j >= 0; --j) {
            const C<R> sj = s + R(j);
            g = (g - std::exp(-x + sj * std::log(x))) / sj;
        }
        return g;
    }
    const C<R> v = gamma_impl(s) - lower_series(s, x);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw std::overflow_error("incomplete Gamma not representable");
    return v;
}

} // namespace

cplx clgamma(cplx s)
{
    return lgamma_impl(s);
}

cplx cgamma(cplx s)
{
    return gamma_impl(s);
}

cplx upper_incomplete_gamma(cplx s, double x)
{
    return upper_impl(s, x);
}

cplx_ld clgamma_ld(cplx_ld s)
{
    return lgamma_impl(s);
}

cplx_ld cgamma_ld(cplx_ld s)
{
    return gamma_impl(s);
}

cplx_ld upper_incomplete_gamma_ld(cplx_ld s, long double x)
{
    return upper_impl(s, x);
}

} // namespace weilgap
