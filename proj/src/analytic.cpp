#include "weilgap/analytic.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace weilgap {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGammaRel = 1e-13;   // working accuracy of the double Gamma routines
constexpr double kGammaRelLd = 1e-16; // same for the long double ones
constexpr double kEps = std::numeric_limits<double>::epsilon();
// past this, e^-x is below the long double range and every term is negligible
constexpr long double kUnderflowX = 11000;
const cplx kI(0, 1);

cplx e_of(double x)
{
    return std::polar(1.0, 2 * kPi * x);
}

cplx i_pow(int k)
{
    static const cplx table[4] = {1.0, kI, -1.0, -kI};
    return table[((k % 4) + 4) % 4];
}

void require_cusp_form(const CoeffSeries& f)
{
    if (f.M() < 1)
        throw std::runtime_error("series " + f.label + " has no coefficients");
    if (std::abs(f.a[0]) > 1e-12)
        throw std::invalid_argument("series " + f.label + " has a nonzero constant term");
}

struct PartialSum {
    cplx value;
    double error;
};

// sum_{m>=1} a_m e(num m / den) (2 pi m)^-s Gamma(s, 2 pi m h), accumulated in
// long double; the cancellation at small h costs several digits
PartialSum incomplete_sum(const CoeffSeries& f, std::int64_t num, std::int64_t den, cplx s, double h)
{
    using ld = long double;
    const ld two_pi = 2 * std::numbers::pi_v<ld>;
    const cplx_ld sl(s.real(), s.imag());
    cplx_ld acc = 0;
    ld mag = 0;
    double coeff_err = 0;
    std::size_t last = 0;
    for (std::size_t m = 1; m <= f.M(); ++m) {
        const ld x = two_pi * static_cast<ld>(m) * h;
        if (x > kUnderflowX)
            break;
        const cplx_ld w = std::exp(-sl * std::log(two_pi * static_cast<ld>(m))) * upper_incomplete_gamma_ld(sl, x);
        const ld aw = std::abs(w);
        const ld r = static_cast<ld>(mod(num * static_cast<std::int64_t>(m), den)) / static_cast<ld>(den);
        const cplx_ld tw = std::polar(ld(1), two_pi * r);
        const cplx_ld am = f.exact ? cplx_ld(to_real<ld>((*f.exact)[m]), 0) : cplx_ld(f.a[m].real(), f.a[m].imag());
        acc += am * tw * w;
        mag += std::abs(am) * aw;
        coeff_err += (f.err.empty() ? 0.0 : f.err[m]) * static_cast<double>(aw);
        last = m;
    }
    double tail = 0;
    if (last == f.M()) {
        const ld M1 = static_cast<ld>(f.M() + 1);
        const ld x = two_pi * M1 * h;
        const double w = static_cast<double>(std::abs(std::exp(-sl * std::log(two_pi * M1)) * upper_incomplete_gamma_ld(sl, x)));
        const double rho = std::pow(static_cast<double>((M1 + 1) / M1), f.sigma + std::abs(s.real()) + 1)
                           * std::exp(-2 * kPi * h);
        if (rho >= 1)
            throw std::runtime_error("prefix of " + f.label + " too short for the requested split");
        tail = f.growth_C * std::pow(static_cast<double>(M1), f.sigma) * w / (1 - rho);
    }
    const cplx value(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
    const double rounding = kGammaRelLd * static_cast<double>(mag) + kEps * std::abs(value);
    return {value, coeff_err + tail + rounding};
}

struct SplitInput {
    const CoeffSeries* F;
    std::int64_t f_num, den;
    const CoeffSeries* G;
    std::int64_t g_num;
    cplx phase;
    double X;
    int k;
};

LambdaSplit split(const SplitInput& in, cplx s, double y0)
{
    if (!(y0 > 0))
        throw std::invalid_argument("split height must be positive");
    require_cusp_form(*in.F);
    require_cusp_form(*in.G);
    const PartialSum a = incomplete_sum(*in.F, in.f_num, in.den, s, y0);
    const cplx kk(static_cast<double>(in.k), 0);
    const PartialSum b = incomplete_sum(*in.G, in.g_num, in.den, kk - s, 1 / (in.X * y0));
    const cplx factor = i_pow(in.k) * std::exp((kk / 2.0 - s) * std::log(in.X));
    const cplx dual = factor * b.value;
    return {a.value, dual, a.error, std::abs(factor) * b.error + 4 * kEps * std::abs(dual)};
}

std::int64_t neg_B_mod(const FEStatement& fe)
{
    return Integer(floor_mod(-fe.B, Integer(fe.q))).get_si();
}

SplitInput forward_input(const CoeffSeries& f, const CoeffSeries& g, const FEStatement& fe)
{
    return {&f, fe.a, fe.q, &g, neg_B_mod(fe), fe.phase.phase(), fe.X().get_d(), fe.k};
}

SplitInput dual_input(const CoeffSeries& f, const CoeffSeries& g, const FEStatement& fe)
{
    return {&g, neg_B_mod(fe), fe.q, &f, fe.a, std::conj(fe.phase.phase()), fe.X().get_d(), fe.k};
}

double rel_residual(cplx l, cplx r)
{
    const double scale = std::max(std::abs(l), std::abs(r));
    return scale == 0 ? 0.0 : std::abs(l - r) / scale;
}

double rel_error(double err, cplx l, cplx r)
{
    const double scale = std::max(std::abs(l), std::abs(r));
    return scale == 0 ? (err == 0 ? 0.0 : std::numeric_limits<double>::infinity()) : err / scale;
}

} // namespace

AdditiveTwist::AdditiveTwist(std::int64_t a_, std::int64_t q_) : a(a_), q(q_)
{
    if (q < 1)
        throw std::invalid_argument("twist denominator must be positive");
    if (gcd(a, q) != 1)
        throw std::invalid_argument("twist " + std::to_string(a) + "/" + std::to_string(q) + " is not reduced");
}

FEStatement FEStatement::for_twist(std::int64_t p, int k, std::int64_t a, std::int64_t q, Angle phase)
{
    const TwistMatrix t = twist_matrix(p, a, q);
    FEStatement fe{p, k, a, q, t.B, t.D, std::move(phase)};
    fe.validate();
    return fe;
}

FEStatement FEStatement::generator_tuple(std::int64_t p, int k, std::int64_t q, Angle phase)
{
    FEStatement fe;
    fe.p = p;
    fe.k = k;
    fe.a = -1;
    fe.q = q;
    fe.phase = std::move(phase);
    if (q == 1) {
        fe.B = -1;
        fe.D = 1 - p;
    } else {
        const std::int64_t qs = v_partner(p, q);
        fe.B = -(Integer(q) * qs + 1) / p;
        fe.D = -qs;
    }
    fe.validate();
    return fe;
}

Mat2 FEStatement::matrix() const
{
    return Mat2(D, a, -Integer(p) * B, q);
}

double FEStatement::balance_height() const
{
    return 1 / (static_cast<double>(q) * std::sqrt(static_cast<double>(p)));
}

void FEStatement::validate() const
{
    if (p < 1 || q < 1)
        throw std::invalid_argument("level and denominator must be positive");
    if (gcd(p, q) != 1)
        throw std::invalid_argument("denominator shares a factor with the level");
    if (Integer(q) * D + Integer(a) * p * B != 1)
        throw std::invalid_argument("twist data violate q D + a p B = 1");
    if (k % 2 != 0)
        throw std::invalid_argument("odd weight is not supported");
}

LambdaSplit lambda_split(const CoeffSeries& f, const CoeffSeries& g, const FEStatement& fe, cplx s, double y0)
{
    fe.validate();
    return split(forward_input(f, g, fe), s, y0);
}

LambdaValue lambda_additive(const CoeffSeries& f, const CoeffSeries& g, const FEStatement& fe, cplx s, double y0)
{
    if (y0 == 0)
        y0 = fe.balance_height();
    const LambdaSplit sp = lambda_split(f, g, fe, s, y0);
    return {sp.direct + fe.phase.phase() * sp.dual, sp.direct_error + sp.dual_error, s, fe.a, fe.q, y0,
            std::min(f.M(), g.M())};
}

LambdaValue lambda_additive_dual(const CoeffSeries& f, const CoeffSeries& g, const FEStatement& fe, cplx s,
                                 double y0)
{
    fe.validate();
    if (y0 == 0)
        y0 = fe.balance_height();
    const SplitInput in = dual_input(f, g, fe);
    const LambdaSplit sp = split(in, s, y0);
    return {sp.direct + in.phase * sp.dual, sp.direct_error + sp.dual_error, s, neg_B_mod(fe), fe.q, y0,
            std::min(f.M(), g.M())};
}

LambdaValue lambda_direct(const CoeffSeries& f, const AdditiveTwist& t, cplx s)
{
    require_cusp_form(f);
    if (!(s.real() > f.sigma + 1))
        throw std::domain_error("direct summation needs Re s > sigma + 1");
    cplx acc = 0;
    double err = 0;
    for (std::size_t m = 1; m <= f.M(); ++m) {
        const cplx w = std::exp(-s * std::log(2 * kPi * static_cast<double>(m)));
        acc += f.a[m] * e_of(static_cast<double>(mod(t.a * static_cast<std::int64_t>(m), t.q)) / t.q) * w;
        err += (f.err.empty() ? 0.0 : f.err[m]) * std::abs(w);
    }
    const cplx G = cgamma(s);
    const double M = static_cast<double>(f.M());
    const double tail = f.growth_C * std::pow(2 * kPi, -s.real()) * std::pow(M, f.sigma - s.real() + 1)
                        / (s.real() - f.sigma - 1);
    return {G * acc, std::abs(G) * (err + tail) + kGammaRel * std::abs(G * acc), s, t.a, t.q, 0, f.M()};
}

ModularResidual check_modular_relation(const CoeffSeries& f, const CoeffSeries& g, const FEStatement& fe, cplx z)
{
    fe.validate();
    if (!(z.imag() > 0))
        throw std::domain_error("modular relation needs Im z > 0");
    const double X = fe.X().get_d();
    const auto lv = evaluate_series(f, z + static_cast<double>(fe.a) / static_cast<double>(fe.q));
    const cplx w = -fe.B.get_d() / static_cast<double>(fe.q) - 1.0 / (X * z);
    const auto rv = evaluate_series(g, w);
    const cplx factor = fe.phase.phase() * std::pow(X, -fe.k / 2.0) * std::pow(z, -fe.k);
    ModularResidual r;
    r.lhs = lv.value;
    r.rhs = factor * rv.value;
    r.abs_residual = std::abs(r.lhs - r.rhs);
    r.residual = rel_residual(r.lhs, r.rhs);
    r.error = rel_error(lv.error + std::abs(factor) * rv.error, r.lhs, r.rhs);
    return r;
}

bool Tolerance::passes(double residual, double error) const
{
    return error <= tol && residual <= std::max(tol, error_factor * error);
}

std::vector<cplx> default_s_grid(int k, double sigma)
{
    const double c = k / 2.0;
    return {cplx(c, 0), cplx(c, 1), cplx(c + 1.5, 0), cplx(sigma + 2, 0)};
}

FEReport check_fe_additive(const CoeffSeries& f, const CoeffSeries& g, const FEStatement& fe,
                           const std::vector<cplx>& s_samples, Tolerance tol)
{
    const double b = fe.balance_height();
    const cplx kk(static_cast<double>(fe.k), 0);
    const double X = fe.X().get_d();
    FEReport rep;
    rep.pass = true;
    for (const cplx& s : s_samples) {
        FESample smp;
        smp.s = s;
        const LambdaValue L = lambda_additive(f, g, fe, s, b);
        const LambdaValue Rg = lambda_additive_dual(f, g, fe, kk - s, 3 * b);
        const cplx factor = fe.phase.phase() * i_pow(fe.k) * std::exp((kk / 2.0 - s) * std::log(X));
        smp.lhs = L.value;
        smp.rhs = factor * Rg.value;
        smp.residual = rel_residual(smp.lhs, smp.rhs);
        smp.error = rel_error(L.error + std::abs(factor) * Rg.error, smp.lhs, smp.rhs);

        const LambdaValue lo = lambda_additive(f, g, fe, s, 0.3 * b);
        const LambdaValue hi = lambda_additive(f, g, fe, s, 3 * b);
        smp.y0_residual = rel_residual(lo.value, hi.value);
        smp.y0_error = rel_error(lo.error + hi.error, lo.value, hi.value);
        smp.pass = tol.passes(smp.residual, smp.error) && tol.passes(smp.y0_residual, smp.y0_error);
        rep.pass = rep.pass && smp.pass;
        rep.samples.push_back(smp);
    }
    return rep;
}

cplx fit_phase(const CoeffSeries& f, const CoeffSeries& g, const FEStatement& fe, cplx s)
{
    const double b = fe.balance_height();
    const LambdaSplit p1 = lambda_split(f, g, fe, s, b / 2);
    const LambdaSplit p2 = lambda_split(f, g, fe, s, 2 * b);
    return (p1.direct - p2.direct) / (p2.dual - p1.dual);
}

PhaseFn trivial_phase()
{
    return [](std::int64_t, std::int64_t) { return Angle(); };
}

PhaseFn character_phase(const DirichletChar& chi)
{
    return [chi](std::int64_t, std::int64_t q) { return Angle(chi.angle(q)); };
}

PhaseFn multiplier_phase(const MultiplierSystem& u)
{
    return [u](std::int64_t a, std::int64_t q) { return u.evaluate(twist_matrix(u.p(), a, q).matrix); };
}

namespace {

void require_primitive(const ModCharacter& psi, std::int64_t p)
{
    if (!psi.is_primitive())
        throw std::invalid_argument("character " + psi.to_string() + " is not primitive");
    if (gcd(psi.modulus(), p) != 1)
        throw std::invalid_argument("character modulus shares a factor with the level");
}

} // namespace

LambdaValue lambda_multiplicative(const CoeffSeries& f, const CoeffSeries& g, const MultiplicativeContext& ctx,
                                  const ModCharacter& psi, cplx s, double y0_scale)
{
    require_primitive(psi, ctx.p);
    const std::int64_t q = psi.modulus();
    cplx acc = 0;
    double err = 0, y0 = 0;
    for (std::int64_t a = 0; a < q; ++a) {
        if (gcd(a, q) != 1)
            continue;
        const FEStatement fe = FEStatement::for_twist(ctx.p, ctx.k, a, q, ctx.phase(a, q));
        y0 = y0_scale * fe.balance_height();
        const LambdaValue L = lambda_additive(f, g, fe, s, y0);
        acc += std::conj(psi.value(a)) * L.value;
        err += L.error;
    }
    const cplx tau = gauss_sum(psi.conj());
    return {acc / tau, err / std::abs(tau), s, 0, q, y0, std::min(f.M(), g.M())};
}

LambdaValue lambda_multiplicative_dual(const CoeffSeries& f, const CoeffSeries& g,
                                       const MultiplicativeContext& ctx, const ModCharacter& psi, cplx s,
                                       double y0_scale)
{
    require_primitive(psi, ctx.p);
    const std::int64_t q = psi.modulus();
    cplx acc = 0;
    double err = 0, y0 = 0;
    for (std::int64_t b = 0; b < q; ++b) {
        if (gcd(b, q) != 1)
            continue;
        // g twisted by b/q pairs with f twisted by a/q, a = -(b p)^-1 mod q
        const std::int64_t a = q == 1 ? 0 : mod(-inverse_mod(mod(b * ctx.p, q), q), q);
        const FEStatement fe = FEStatement::for_twist(ctx.p, ctx.k, a, q, ctx.phase(a, q));
        if (neg_B_mod(fe) != b)
            throw std::logic_error("dual twist bookkeeping failed");
        y0 = y0_scale * fe.balance_height();
        const LambdaValue L = lambda_additive_dual(f, g, fe, s, y0);
        acc += std::conj(psi.value(b)) * L.value;
        err += L.error;
    }
    const cplx tau = gauss_sum(psi.conj());
    return {acc / tau, err / std::abs(tau), s, 0, q, y0, std::min(f.M(), g.M())};
}

LambdaValue lambda_multiplicative_direct(const CoeffSeries& f, const ModCharacter& psi, cplx s)
{
    require_cusp_form(f);
    if (!(s.real() > f.sigma + 1))
        throw std::domain_error("direct summation needs Re s > sigma + 1");
    cplx acc = 0;
    for (std::size_t m = 1; m <= f.M(); ++m)
        acc += f.a[m] * psi.value(static_cast<std::int64_t>(m))
               * std::exp(-s * std::log(2 * kPi * static_cast<double>(m)));
    const cplx G = cgamma(s);
    const double M = static_cast<double>(f.M());
    const double tail = f.growth_C * std::pow(2 * kPi, -s.real()) * std::pow(M, f.sigma - s.real() + 1)
                        / (s.real() - f.sigma - 1);
    return {G * acc, std::abs(G) * tail + kGammaRel * std::abs(G * acc), s, 0, psi.modulus(), 0, f.M()};
}

std::pair<cplx, cplx> gauss_assembly_sides(const ModCharacter& psi, std::int64_t p, const std::vector<cplx>& X)
{
    const std::int64_t q = psi.modulus();
    if (X.size() != static_cast<std::size_t>(q))
        throw std::invalid_argument("test vector must have one entry per residue");
    cplx lhs = 0, rhs = 0;
    for (std::int64_t a = 0; a < q; ++a) {
        if (gcd(a, q) != 1)
            continue;
        const std::int64_t idx = q == 1 ? 0 : mod(-inverse_mod(mod(a * p, q), q), q);
        lhs += std::conj(psi.value(a)) * X[static_cast<std::size_t>(idx)];
        rhs += psi.value(a) * X[static_cast<std::size_t>(a)];
    }
    const cplx tau = gauss_sum(psi);
    lhs /= gauss_sum(psi.conj());
    rhs *= psi.value(p) * tau * tau / static_cast<double>(q) / tau;
    return {lhs, rhs};
}

FEReport check_fe_multiplicative(const CoeffSeries& f, const CoeffSeries& g, const MultiplicativeContext& ctx,
                                 const Angle& chi_q, const ModCharacter& psi, const std::vector<cplx>& s_samples,
                                 Tolerance tol)
{
    require_primitive(psi, ctx.p);
    const std::int64_t q = psi.modulus();
    const double X = static_cast<double>(ctx.p) * q * q;
    const cplx kk(static_cast<double>(ctx.k), 0);
    const cplx tau = gauss_sum(psi);
    const cplx root = i_pow(ctx.k) * chi_q.phase() * psi.value(ctx.p) * tau * tau / static_cast<double>(q);
    FEReport rep;
    rep.pass = true;
    for (const cplx& s : s_samples) {
        FESample smp;
        smp.s = s;
        const LambdaValue L = lambda_multiplicative(f, g, ctx, psi, s, 1);
        const LambdaValue Rg = lambda_multiplicative_dual(f, g, ctx, psi.conj(), kk - s, 3);
        const cplx factor = root * std::exp((kk / 2.0 - s) * std::log(X));
        smp.lhs = L.value;
        smp.rhs = factor * Rg.value;
        smp.residual = rel_residual(smp.lhs, smp.rhs);
        smp.error = rel_error(L.error + std::abs(factor) * Rg.error, smp.lhs, smp.rhs);
        const LambdaValue lo = lambda_multiplicative(f, g, ctx, psi, s, 0.3);
        const LambdaValue hi = lambda_multiplicative(f, g, ctx, psi, s, 3);
        smp.y0_residual = rel_residual(lo.value, hi.value);
        smp.y0_error = rel_error(lo.error + hi.error, lo.value, hi.value);
        smp.pass = tol.passes(smp.residual, smp.error) && tol.passes(smp.y0_residual, smp.y0_error);
        rep.pass = rep.pass && smp.pass;
        rep.samples.push_back(smp);
    }
    return rep;
}

Certificate certify_modularity(const CoeffSeries& f, const CoeffSeries& g, std::int64_t p, int k,
                               const DirichletChar& chi, double tolerance)
{
    if (chi.modulus() != p)
        throw std::invalid_argument("character modulus differs from the level");
    Certificate cert;
    cert.p = p;
    cert.k = k;
    cert.chi = chi.to_string();
    cert.Q = compute_Q(p);
    const Tolerance tol{tolerance, 10};

    cert.per_generator.push_back({0, "S", 0.0, 0.0, true});
    const cplx zeta[] = {{0.2, 0.9}, {-0.3, 1.1}, {0.1, 0.7}};
    cert.verdict = true;
    std::string failing;
    for (std::int64_t q : cert.Q) {
        const Angle phase = q == 1 ? Angle() : Angle(chi.angle(q));
        const FEStatement fe = FEStatement::generator_tuple(p, k, q, phase);
        GeneratorCheck gc;
        gc.q = q;
        gc.label = q == 1 ? "W_" + std::to_string(p) : "V_" + std::to_string(q);
        const double b = fe.balance_height();
        for (const cplx& zt : zeta) {
            const ModularResidual r = check_modular_relation(f, g, fe, b * zt);
            gc.residual = std::max(gc.residual, r.residual);
            gc.error = std::max(gc.error, r.error);
        }
        gc.pass = tol.passes(gc.residual, gc.error);
        if (!gc.pass && failing.empty())
            failing = gc.label;
        cert.verdict = cert.verdict && gc.pass;
        cert.per_generator.push_back(gc);
    }
    std::ostringstream os;
    if (cert.verdict) {
        os << "coefficients are consistent with a weight-" << k << ", character-" << cert.chi
           << " cusp form on Gamma0(" << p << ") at tolerance " << tolerance;
    } else {
        os << "generator " << failing << " fails the modular relation at tolerance " << tolerance;
    }
    cert.conclusion = os.str();
    return cert;
}

CoeffSeries fricke_dual_of_level_one(const CoeffSeries& f, std::int64_t p)
{
    if (f.level != 1)
        throw std::invalid_argument("series is not of level one");
    const std::size_t M = f.M();
    std::vector<Integer> c(M + 1, Integer(0));
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(f.weight / 2));
    if (!f.exact)
        throw std::invalid_argument("level-one dual needs exact coefficients");
    for (std::size_t m = 0; m * p <= M; ++m)
        c[m * p] = scale * (*f.exact)[m];
    return CoeffSeries::from_integers(f.label + "|W_" + std::to_string(p), f.weight, p, f.sigma, std::move(c));
}

} // namespace weilgap
