#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "weilgap/multiplier.hpp"

namespace weilgap {

/**
 * Fourier prefix a_0, ..., a_M of a q-expansion sum a_m e(m z).
 *
 * `exact` is present when every coefficient is a rational integer.
 * `err[m]` bounds |true a_m - a[m]|.
 */
struct CoeffSeries {
    std::string label;
    int weight = 0;
    std::int64_t level = 1;
    std::vector<cplx> a;
    std::optional<std::vector<Integer>> exact;
    std::vector<double> err;
    double sigma = 0;
    /// Smallest C with |a_m| <= C m^sigma on the stored prefix (m >= 1).
    double growth_C = 0;

    std::size_t M() const { return a.empty() ? 0 : a.size() - 1; }
    double error_bound() const;
    void update_growth();
    bool growth_holds() const;

    static CoeffSeries from_integers(std::string label, int weight, std::int64_t level, double sigma,
                                     std::vector<Integer> coeffs);
    static CoeffSeries from_complex(std::string label, int weight, std::int64_t level, double sigma,
                                    std::vector<cplx> coeffs, std::vector<double> errs = {});
};

CoeffSeries one_series(std::size_t M);

/// Ramanujan tau(1..M) from the 24th power of prod (1 - q^n).
CoeffSeries delta_coeffs(std::size_t M);

/// Normalized level-1 Eisenstein series E_k, k in {4, 6, 8, 10, 14}.
CoeffSeries eisenstein_level1(int k, std::size_t M);

struct SeriesPair {
    CoeffSeries f, g;
};

/// Delta(z) Delta(p z); Fricke self-dual, so g = f.
SeriesPair delta_delta_p(std::int64_t p, std::size_t M);

/// Cauchy product, truncated to the shorter prefix.
CoeffSeries multiply(const CoeffSeries& f, const CoeffSeries& g);
CoeffSeries add(const CoeffSeries& f, const CoeffSeries& g);
CoeffSeries scale(const CoeffSeries& f, cplx c);
/// Coefficient sequence shifted: a_m -> a_m * e^(2 pi i m r) for rational r.
CoeffSeries twist(const CoeffSeries& f, std::int64_t a, std::int64_t q);

/// Exact Ramanujan sum sum_{d mod c, (d,c)=1} e(m d / c).
Integer ramanujan_sum(std::int64_t c, std::int64_t m);

/**
 * Multiplier-twisted Kloosterman sums
 *   K(m, c) = sum_{d mod c, (d,c)=1} conj(u(gamma_{c,d})) e(m d / c)
 * with gamma_{c,d} any lift in Gamma0(p). Lift values are memoized per c.
 */
class TwistedKloosterman {
public:
    /// `u` empty means the trivial multiplier, handled by Ramanujan sums
    /// unless `force_lifts` is set.
    TwistedKloosterman(std::int64_t p, std::optional<MultiplierSystem> u, bool force_lifts = false);

    std::int64_t p() const { return p_; }
    cplx operator()(std::int64_t m, std::int64_t c);
    /// K(m, c) for m = 0..M.
    std::vector<cplx> row(std::int64_t c, std::size_t M);
    /// Exactness tag: the trivial shortcut returns integers.
    bool exact() const { return !u_ && !force_; }

private:
    const std::vector<std::pair<std::int64_t, cplx>>& phases(std::int64_t c);

    std::int64_t p_;
    std::optional<MultiplierSystem> u_;
    bool force_;
    std::map<std::int64_t, std::vector<std::pair<std::int64_t, cplx>>> memo_;
};

cplx twisted_kloosterman(std::int64_t p, const MultiplierSystem& u, std::int64_t m, std::int64_t c);

/// Brute-force reference: direct sum with a fresh lift per d.
cplx kloosterman_brute_force(const MultiplierSystem& u, std::int64_t m, std::int64_t c);

/// (2 pi)^w m^(w-1)/(w-1)! * C^(2-w) / (p (w-2)), bounding the c > C tail.
double eisenstein_tail_bound(std::int64_t p, int w, std::int64_t m, std::int64_t c_max);

/**
 * Eisenstein series at infinity for Gamma0(p) with multiplier u (u(S) = 1):
 * a_0 = 1, a_m = (-2 pi i)^w m^(w-1)/(w-1)! sum_{p | c <= C} c^-w K(m, c).
 * Per-coefficient tail bounds go to `err`.
 */
CoeffSeries eisenstein_multiplier_coeffs(std::int64_t p, const std::optional<MultiplierSystem>& u, int w,
                                         std::size_t M, std::int64_t c_max);

template <typename Real>
struct SeriesValue {
    std::complex<Real> value;
    double error = 0;
};

template <typename Real>
Real to_real(const Integer& x)
{
    if (x.fits_slong_p())
        return Real(x.get_si());
    const Integer ax = abs(x);
    Integer hi = ax >> 62;
    Integer lo = ax - (hi << 62);
    Real r = to_real<Real>(hi) * Real(std::int64_t(1) << 62) + Real(lo.get_si());
    return sgn(x) < 0 ? -r : r;
}

template <typename Real>
Real pi_of()
{
    using std::acos;
    return acos(Real(-1));
}

template <typename Real>
std::complex<Real> expi(Real theta)
{
    using std::cos;
    using std::sin;
    return {cos(theta), sin(theta)};
}

/**
 * sum a_m e(m z) over the stored prefix, with an error estimate made of
 * coefficient errors, a growth-based tail bound past M, and rounding.
 */
template <typename Real>
SeriesValue<Real> evaluate_series(const CoeffSeries& f, std::complex<Real> z)
{
    using std::exp;
    using std::pow;
    const Real pi = pi_of<Real>();
    const Real y = z.imag();
    if (!(y > 0))
        throw std::domain_error("series evaluated off the upper half-plane");
    const std::complex<Real> qz = expi<Real>(2 * pi * z.real()) * exp(-2 * pi * y);
    const double rq = static_cast<double>(exp(-2 * pi * y));

    std::complex<Real> acc(Real(0), Real(0)), qm(Real(1), Real(0));
    double coeff_err = 0, mag = 0, rm = 1;
    for (std::size_t m = 0; m <= f.M(); ++m) {
        const std::complex<Real> am =
            f.exact ? std::complex<Real>(to_real<Real>((*f.exact)[m]), 0)
                    : std::complex<Real>(Real(f.a[m].real()), Real(f.a[m].imag()));
        acc += am * qm;
        qm *= qz;
        coeff_err += f.err.empty() ? 0.0 : f.err[m] * rm;
        mag += std::abs(f.a[m]) * rm;
        rm *= rq;
    }
    SeriesValue<Real> out{acc, 0.0};
    // tail: C sum_{m > M} m^sigma r^m, ratio bounded by ((M+2)/(M+1))^sigma r
    const double M1 = static_cast<double>(f.M() + 1);
    const double ratio = std::pow((M1 + 1) / M1, f.sigma) * rq;
    double tail = std::numeric_limits<double>::infinity();
    if (ratio < 1) {
        const double logt = std::log(std::max(f.growth_C, 1e-300)) + f.sigma * std::log(M1) + M1 * std::log(rq);
        tail = std::exp(logt) / (1 - ratio);
    }
    const double eps = static_cast<double>(std::numeric_limits<Real>::epsilon());
    out.error = coeff_err + tail + 8 * eps * mag;
    return out;
}

SeriesValue<double> evaluate_series(const CoeffSeries& f, cplx z);

/// (f |_k W)(z) with W = W_p, or T when p = 1, plus propagated error.
template <typename Real>
SeriesValue<Real> fricke_slash(const CoeffSeries& f, std::int64_t p, int k, std::complex<Real> z)
{
    using std::sqrt;
    const Real rp = sqrt(Real(p));
    const std::complex<Real> w = Real(-1) / (Real(p) * z);
    const std::complex<Real> j = rp * z;
    std::complex<Real> jk(Real(1), Real(0));
    for (int i = 0; i < k; ++i)
        jk *= j;
    const SeriesValue<Real> fv = evaluate_series<Real>(f, w);
    const double absjk = static_cast<double>(sqrt(jk.real() * jk.real() + jk.imag() * jk.imag()));
    return {fv.value / jk, fv.error / absjk};
}

template <typename Real>
using SeriesEvaluator = std::function<SeriesValue<Real>(std::complex<Real>)>;

/**
 * b_m = e^(2 pi m y) int_0^1 g(x + i y) e(-m x) dx by the N-point trapezoid
 * rule (N >= 4M). The error combines evaluator error, rounding and the
 * aliasing term `aliasing_C (m+N)^sigma e^(-2 pi N y)`; throws
 * std::runtime_error when any estimate exceeds `tol`.
 */
template <typename Real>
CoeffSeries coeffs_via_fourier_extraction(const SeriesEvaluator<Real>& g, int k, Real y, std::size_t M,
                                          double tol, double sigma, double aliasing_C, std::size_t N = 0)
{
    using std::exp;
    if (N == 0)
        N = 4 * M + 8;
    if (N < 4 * M)
        throw std::invalid_argument("quadrature needs at least 4M nodes");
    const Real pi = pi_of<Real>();
    std::vector<std::complex<Real>> vals(N);
    double eval_err = 0, gmax = 0;
    for (std::size_t j = 0; j < N; ++j) {
        const Real x = Real(j) / Real(N);
        const SeriesValue<Real> v = g(std::complex<Real>(x, y));
        vals[j] = v.value;
        eval_err = std::max(eval_err, v.error);
        gmax = std::max(gmax, std::abs(cplx(static_cast<double>(v.value.real()), static_cast<double>(v.value.imag()))));
    }
    const double eps = static_cast<double>(std::numeric_limits<Real>::epsilon());
    const double yd = static_cast<double>(y);
    std::vector<cplx> b(M + 1);
    std::vector<double> err(M + 1);
    for (std::size_t m = 0; m <= M; ++m) {
        std::complex<Real> s(Real(0), Real(0));
        for (std::size_t j = 0; j < N; ++j) {
            const std::size_t idx = (m * j) % N;
            s += vals[j] * expi<Real>(-2 * pi * Real(idx) / Real(N));
        }
        s /= Real(N);
        const Real grow = exp(2 * pi * Real(m) * y);
        s *= grow;
        b[m] = {static_cast<double>(s.real()), static_cast<double>(s.imag())};
        const double gd = static_cast<double>(grow);
        const double alias =
            aliasing_C * std::pow(static_cast<double>(m + N), sigma) * std::exp(-2 * std::numbers::pi * N * yd);
        err[m] = (eval_err + 8 * eps * gmax * std::sqrt(static_cast<double>(N))) * gd + alias;
        if (!(err[m] <= tol))
            throw std::runtime_error("Fourier extraction error " + std::to_string(err[m]) + " at m = "
                                     + std::to_string(m) + " exceeds tolerance");
    }
    return CoeffSeries::from_complex("extracted", k, 1, sigma, std::move(b), std::move(err));
}

struct ResidualReport {
    double residual = 0;
    double error = 0;
};

/// |(F |_k g)(z) - e(phase) F(z)| with the propagated evaluation error.
ResidualReport modularity_residual(const CoeffSeries& f, const Mat2& g, const Angle& phase, cplx z);

} // namespace weilgap
