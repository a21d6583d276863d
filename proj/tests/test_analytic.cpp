#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "weilgap/analytic.hpp"

using namespace weilgap;

namespace {

CoeffSeries corrupted(const CoeffSeries& f, std::size_t m, long delta)
{
    std::vector<Integer> c = *f.exact;
    c[m] += delta;
    return CoeffSeries::from_integers(f.label + "*", f.weight, f.level, f.sigma, std::move(c));
}

} // namespace

TEST_CASE("character tables")
{
    const std::vector<std::size_t> primitive{1, 0, 1, 1, 3, 0, 5, 2, 4, 0, 9, 1};
    for (std::int64_t q = 1; q <= 12; ++q) {
        CHECK(static_cast<std::int64_t>(all_characters(q).size()) == euler_phi(q));
        CHECK(primitive_characters(q).size() == primitive[q - 1]);
    }
    for (std::int64_t q = 1; q <= 8; ++q)
        for (const ModCharacter& psi : primitive_characters(q))
            CHECK(std::norm(gauss_sum(psi)) == doctest::Approx(static_cast<double>(q)).epsilon(1e-12));
    CHECK(std::abs(gauss_sum(ModCharacter::quadratic(5)) - std::sqrt(5.0)) < 1e-12);
    CHECK(std::abs(gauss_sum(ModCharacter::trivial(1)) - 1.0) < 1e-15);
    CHECK(ModCharacter::quadratic(3).value(2).real() == doctest::Approx(-1));
    CHECK_FALSE(ModCharacter::quadratic(3).is_even());
}

TEST_CASE("Gauss-sum assembly identity")
{
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    for (std::int64_t q = 1; q <= 8; ++q)
        for (const ModCharacter& psi : primitive_characters(q))
            for (std::int64_t p : {5, 7, 11, 13}) {
                if (gcd(p, q) != 1)
                    continue;
                std::vector<cplx> X(static_cast<std::size_t>(q));
                for (auto& x : X)
                    x = {nd(rng), nd(rng)};
                const auto [l, r] = gauss_assembly_sides(psi, p, X);
                CHECK(std::abs(l - r) < 1e-10 * std::max(1.0, std::abs(l)));
            }
}

TEST_CASE("Hecke functional equation for Delta")
{
    const CoeffSeries d = delta_coeffs(2000);
    const FEStatement fe = FEStatement::for_twist(1, 12, 0, 1);
    CHECK(fe.B == 1);
    CHECK(fe.X() == 1);
    const LambdaValue l6 = lambda_additive(d, d, fe, cplx(6, 0));
    CHECK(std::abs(l6.value.imag()) < 1e-10 * std::abs(l6.value));
    for (const cplx s : {cplx(6, 0), cplx(7, 1)}) {
        const LambdaValue a = lambda_additive(d, d, fe, s);
        const LambdaValue b = lambda_additive(d, d, fe, cplx(12, 0) - s);
        CHECK(std::abs(a.value - b.value) / std::abs(a.value) < 1e-8);
        CHECK(a.error < 1e-8 * std::abs(a.value));
    }
    const LambdaValue split = lambda_additive(d, d, fe, cplx(14, 0));
    const LambdaValue direct = lambda_direct(d, AdditiveTwist(0, 1), cplx(14, 0));
    CHECK(std::abs(split.value - direct.value) < 1e-9 * std::abs(direct.value));
    CHECK_THROWS_AS(lambda_direct(d, AdditiveTwist(0, 1), cplx(6, 0)), std::domain_error);
    CHECK_THROWS_AS(lambda_additive(eisenstein_level1(4, 50), eisenstein_level1(4, 50), FEStatement::for_twist(1, 4, 0, 1),
                                    cplx(2, 0)),
                    std::invalid_argument);
}

TEST_CASE("modular relation of Delta(z) Delta(5z)")
{
    const auto [f, g] = delta_delta_p(5, 600);
    const FEStatement fe = FEStatement::for_twist(5, 24, 0, 1);
    const ModularResidual r = check_modular_relation(f, g, fe, cplx(0.2, 0.9));
    CHECK(r.residual < 1e-8);
    CHECK(r.error < 1e-8);
    const CoeffSeries bad = corrupted(f, 6, 1);
    CHECK(check_modular_relation(bad, bad, fe, cplx(0.2, 0.9)).residual > 1e-3);
    const FEStatement v = FEStatement::generator_tuple(5, 24, 1);
    CHECK(v.matrix() == Mat2(1 - 5, -1, 5, 1));
    CHECK(check_modular_relation(f, g, v, cplx(0.05, 0.3)).residual < 1e-8);
}

TEST_CASE("additive twisted functional equation")
{
    const auto [f, g] = delta_delta_p(11, 1200);
    const FEStatement fe = FEStatement::for_twist(11, 24, 1, 3);
    CHECK(fe.B == 2);
    const std::vector<cplx> grid{cplx(12, 0), cplx(12, 1), cplx(13.5, 0)};
    const FEReport rep = check_fe_additive(f, g, fe, grid, Tolerance{1e-6, 10});
    CHECK(rep.pass);
    for (const FESample& s : rep.samples) {
        CHECK(s.residual < 1e-8);
        CHECK(s.y0_residual < 1e-8);
    }
    const cplx eps = fit_phase(f, g, fe, cplx(12, 1));
    CHECK(std::abs(eps - 1.0) < 1e-8);

    const FEStatement wrong = FEStatement::for_twist(11, 24, 1, 3, Angle(Rational(1, 7)));
    const FEReport bad = check_fe_additive(f, g, wrong, grid, Tolerance{1e-6, 10});
    CHECK_FALSE(bad.pass);
    CHECK(bad.samples[0].residual > 1e-3);
}

TEST_CASE("multiplicative twisted functional equation")
{
    const auto [f, g] = delta_delta_p(11, 1200);
    const MultiplicativeContext ctx{11, 24, trivial_phase()};
    const ModCharacter psi = ModCharacter::quadratic(3);
    const std::vector<cplx> grid{cplx(12, 0), cplx(12.5, 1)};
    const FEReport rep = check_fe_multiplicative(f, g, ctx, Angle(), psi, grid);
    CHECK(rep.pass);
    for (const FESample& s : rep.samples)
        CHECK(s.residual < 1e-8);
    const FEReport flipped = check_fe_multiplicative(f, g, ctx, Angle(Rational(1, 2)), psi, grid);
    CHECK_FALSE(flipped.pass);
    CHECK_THROWS_AS(check_fe_multiplicative(f, g, ctx, Angle(), ModCharacter::trivial(3), grid), std::invalid_argument);
}

TEST_CASE("multiplicative twist of Delta against direct summation")
{
    const CoeffSeries d = delta_coeffs(2000);
    const MultiplicativeContext ctx{1, 12, trivial_phase()};
    const ModCharacter psi = ModCharacter::quadratic(5);
    const LambdaValue split = lambda_multiplicative(d, d, ctx, psi, cplx(14, 0));
    const LambdaValue direct = lambda_multiplicative_direct(d, psi, cplx(14, 0));
    CHECK(std::abs(split.value - direct.value) < 1e-9 * std::abs(direct.value));
    const FEReport rep = check_fe_multiplicative(d, d, ctx, Angle(), psi, {cplx(6, 0), cplx(7, 1)});
    CHECK(rep.pass);
}

TEST_CASE("modularity certificate")
{
    const auto [f, g] = delta_delta_p(5, 600);
    const Certificate cert = certify_modularity(f, g, 5, 24, DirichletChar::trivial(5), 1e-7);
    CHECK(cert.verdict);
    CHECK(cert.per_generator.size() == cert.Q.size() + 1);
    CHECK(cert.conclusion.find("Gamma0(5)") != std::string::npos);

    const CoeffSeries d = delta_coeffs(600);
    const CoeffSeries dw = fricke_dual_of_level_one(d, 5);
    CHECK((*dw.exact)[5] == 15625);
    CHECK((*dw.exact)[6] == 0);
    CHECK(certify_modularity(d, dw, 5, 12, DirichletChar::trivial(5), 1e-7).verdict);

    const CoeffSeries bad = corrupted(f, 7, 1);
    const Certificate c2 = certify_modularity(bad, bad, 5, 24, DirichletChar::trivial(5), 1e-7);
    CHECK_FALSE(c2.verdict);
    CHECK(c2.conclusion.find("fails") != std::string::npos);
    CHECK_THROWS_AS(certify_modularity(f, g, 5, 24, DirichletChar::trivial(7), 1e-7), std::invalid_argument);
}

TEST_CASE("Fricke tuple and swapped roles")
{
    const auto [f, g] = delta_delta_p(5, 600);
    const FEStatement fe = FEStatement::generator_tuple(5, 24, 1);
    const cplx z(0.2, 0.9);
    const ModularResidual r = check_modular_relation(f, g, fe, z);
    CHECK(r.residual < 1e-8);
    const cplx w = -fe.B.get_d() - 1.0 / (5.0 * z);
    // inverse relation: g(z' + 1) against f(-1 - 1/(5 z')), tuple (1, 1, 1, -4)
    FEStatement back{5, 24, 1, 1, Integer(1), Integer(-4), Angle()};
    back.validate();
    const ModularResidual r2 = check_modular_relation(g, f, back, w - 1.0);
    CHECK(r2.residual < 1e-8);
    CHECK(std::abs(r.residual - r2.residual) < 1e-8);
}

TEST_CASE("y0 independence over random configurations")
{
    std::mt19937_64 rng(11);
    for (std::int64_t p : {5, 11}) {
        const auto [f, g] = delta_delta_p(p, 1500);
        std::uniform_int_distribution<std::int64_t> qd(1, 5);
        std::uniform_real_distribution<double> sd(-1.5, 1.5), td(-2, 2);
        int done = 0;
        while (done < 20) {
            const std::int64_t q = qd(rng);
            if (gcd(q, p) != 1)
                continue;
            std::int64_t a = std::uniform_int_distribution<std::int64_t>(0, q - 1)(rng);
            if (gcd(a, q) != 1)
                continue;
            const FEStatement fe = FEStatement::for_twist(p, 24, a, q);
            const cplx s(12 + sd(rng), td(rng));
            const double b = fe.balance_height();
            const LambdaValue v1 = lambda_additive(f, g, fe, s, 0.3 * b);
            const LambdaValue v2 = lambda_additive(f, g, fe, s, b);
            const LambdaValue v3 = lambda_additive(f, g, fe, s, 3 * b);
            const double scale = std::abs(v2.value);
            CHECK(std::abs(v1.value - v2.value) <= std::max(1e-9 * scale, 10 * (v1.error + v2.error)));
            CHECK(std::abs(v3.value - v2.value) <= std::max(1e-9 * scale, 10 * (v3.error + v2.error)));
            ++done;
        }
    }
}

TEST_CASE("error estimate nonincreasing in M")
{
    const FEStatement fe = FEStatement::for_twist(11, 24, 1, 3);
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t M : {300, 400, 600, 900, 1200}) {
        const auto [f, g] = delta_delta_p(11, M);
        const LambdaValue v = lambda_additive(f, g, fe, cplx(12, 1));
        CHECK(v.error <= prev);
        prev = v.error;
    }
    const auto [f, g] = delta_delta_p(11, 40);
    CHECK_THROWS_AS(lambda_additive(f, g, fe, cplx(12, 0), 0.3 * fe.balance_height()), std::runtime_error);
}

TEST_CASE("fitted phase matches the multiplier")
{
    const auto [f, g] = delta_delta_p(11, 1200);
    for (std::int64_t q : {1, 2, 3, 4, 5})
        for (std::int64_t a = 0; a < q; ++a) {
            if (gcd(a, q) != 1)
                continue;
            const FEStatement fe = FEStatement::for_twist(11, 24, a, q);
            CHECK(std::abs(fit_phase(f, g, fe, cplx(12.5, 0.5)) - fe.phase.phase()) < 1e-6);
        }
}
