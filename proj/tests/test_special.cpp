#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <numbers>
#include <random>

#include "weilgap/special.hpp"

using namespace weilgap;

namespace {

double rel(cplx a, cplx b)
{
    return std::abs(a - b) / std::abs(b);
}

struct Ref {
    cplx s;
    double x;
    cplx value;
};

// reference values from mpmath at 40 digits
const Ref kIncomplete[] = {
    {{1, 0}, 0.5, {0.6065306597126334, 0.0}},
    {{0.5, 0}, 2.0, {0.08064711796031769, 0.0}},
    {{6, 0}, 6.283185307179586, {48.15957166045422, 0.0}},
    {{12, 1}, 3.0, {-29292183.598606065, 24552647.073570024}},
    {{13.5, 0}, 40.0, {645.9695169892434, 0.0}},
    {{-2.5, 3}, 0.7, {0.2579947663734235, -0.09735929947855235}},
    {{-7.3, 0}, 2.0, {9.013966020871276e-05, 0.0}},
    {{0, 0}, 0.3, {0.9056766516758468, 0.0}},
    {{-3, 0}, 1.5, {0.013631696285718363, 0.0}},
    {{30, 20}, 10.0, {1.5609219227131228e+28, -1.0810776085102126e+27}},
    {{1, 50}, 20.0, {7.604343857963459e-10, 1.4869981562237854e-10}},
    {{40, -40}, 100.0, {-4.290816631583732e+34, -2.7896636272240187e+34}},
    {{60, 0}, 59.0, {7.413311181194898e+79, 0.0}},
    {{2, 0}, 1e-06, {0.9999999999995, 0.0}},
    {{10, 10}, 200.0, {-6.901323793570956e-67, 2.6917642729009778e-67}},
    {{0.2, -5}, 0.001, {0.002426852320782411, 0.04974156049531201}},
    {{-30, 10}, 5.0, {-1.5617888532979321e-25, -1.2188260295400741e-25}},
    {{23.5, 0}, 150.0, {7.724532195018102e-17, 0.0}},
    {{12, -1}, 0.9, {-29290637.881667245, -24555023.20796352}},
    {{5, 40}, 2.0, {-0.04928031057979333, -0.09621063602719912}},
};

const std::pair<cplx, cplx> kGamma[] = {
    {{0.5, 0}, {1.772453850905516, 0.0}},
    {{1, 0}, {1.0, 0.0}},
    {{3.7, -2.1}, {-1.8598252959665196, -1.1623401526968618}},
    {{-3.5, 1}, {0.00450634588361239, 0.02596441521525025}},
    {{-39.5, 0.3}, {7.406852419604987e-48, 1.4796157690240395e-47}},
    {{40, 40}, {-2.9787072201617566e+37, 4.069596487793558e+38}},
    {{-20, -39}, {-5.373501216425594e-60, 3.230597456489267e-60}},
    {{0.1, 0.1}, {4.520080204891075, -4.917313069142463}},
    {{12, 1}, {-29290637.87162277, 24555023.205989044}},
    {{25, -30}, {8.494583959888405e+16, -1.0214362322850312e+17}},
};

} // namespace

TEST_CASE("complex Gamma")
{
    CHECK(cgamma(1.0) == cplx(1, 0));
    CHECK(rel(cgamma(0.5), std::sqrt(std::numbers::pi)) < 1e-15);
    for (const auto& [s, v] : kGamma) {
        CAPTURE(s);
        CHECK(rel(cgamma(s), v) < 1e-12);
    }
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-40, 40);
    for (int i = 0; i < 100; ++i) {
        const cplx s(u(rng), u(rng));
        CAPTURE(s);
        CHECK(rel(cgamma(s + 1.0), s * cgamma(s)) < 1e-12);
    }
    CHECK_THROWS_AS(cgamma(0.0), std::domain_error);
    CHECK_THROWS_AS(cgamma(-3.0), std::domain_error);
}

TEST_CASE("upper incomplete Gamma")
{
    for (const auto& r : kIncomplete) {
        CAPTURE(r.s);
        CAPTURE(r.x);
        CHECK(rel(upper_incomplete_gamma(r.s, r.x), r.value) < 1e-10);
    }
    for (double x : {1e-3, 0.5, 3.0, 40.0})
        CHECK(rel(upper_incomplete_gamma(1.0, x), std::exp(-x)) < 1e-14);
    CHECK(rel(upper_incomplete_gamma(cplx(3.5, 2), 1e-12), cgamma(cplx(3.5, 2))) < 1e-12);

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> us(-20, 30), ut(-20, 20), ux(-6, std::log(200.0));
    for (int i = 0; i < 200; ++i) {
        const cplx s(us(rng), ut(rng));
        const double x = std::exp(ux(rng));
        CAPTURE(s);
        CAPTURE(x);
        const cplx lhs = upper_incomplete_gamma(s + 1.0, x);
        const cplx rhs = s * upper_incomplete_gamma(s, x) + std::exp(s * std::log(x) - x);
        CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(std::abs(lhs), std::abs(rhs)));
    }
    CHECK_THROWS_AS(upper_incomplete_gamma(2.0, 0.0), std::domain_error);
}

namespace {

struct RefLd {
    double sr, si, x;
    const char* re;
    const char* im;
};

// mpmath at 40 digits, printed to 25
const RefLd kIncompleteLd[] = {
    {12.0, 0.0, 0.5, "3.991679999998716795706818e+7", "0.0"},
    {12.0, 1.0, 3.0, "-2.92921835986060655786625e+7", "2.455264707357002357626054e+7"},
    {13.5, 0.0, 40.0, "6.459695169892434421023676e+2", "0.0"},
    {10.0, -1.0, 0.03, "-2.172556436196325446120615e+5", "-2.671320341468011581534986e+5"},
    {14.0, 0.0, 700.0, "9.733444661081983648950431e-268", "0.0"},
    {11.5, -1.5, 0.001, "-9.627814771688804166387194e+6", "4.774642990382748907237564e+6"},
    {-1.5, 0.5, 2.0, "1.05732967141910591893621e-2", "5.184981666158884868779269e-3"},
    {6.0, 1.0, 12.566, "-1.486806469175878479634141", "8.190753185700352306374425e-1"},
};

} // namespace

TEST_CASE("extended-precision incomplete Gamma")
{
    for (const auto& r : kIncompleteLd) {
        const cplx_ld want(std::strtold(r.re, nullptr), std::strtold(r.im, nullptr));
        const cplx_ld got = upper_incomplete_gamma_ld(cplx_ld(r.sr, r.si), static_cast<long double>(r.x));
        CAPTURE(r.sr);
        CAPTURE(r.x);
        CHECK(static_cast<double>(std::abs(got - want) / std::abs(want)) < 1e-16);
    }
    CHECK(static_cast<double>(std::abs(cgamma_ld(0.5L) - std::sqrt(std::numbers::pi_v<long double>))) < 1e-16);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> us(-2, 16), ut(-2, 2), ux(std::log(1e-3), std::log(700.0));
    for (int i = 0; i < 200; ++i) {
        const cplx_ld s(us(rng), ut(rng));
        const long double x = std::exp(static_cast<long double>(ux(rng)));
        const cplx_ld lhs = upper_incomplete_gamma_ld(s + 1.0L, x);
        const cplx_ld rhs = s * upper_incomplete_gamma_ld(s, x) + std::exp(s * std::log(x) - x);
        CHECK(static_cast<double>(std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs))) < 1e-15);
        const cplx d = upper_incomplete_gamma(cplx(s.real(), s.imag()), static_cast<double>(x));
        const cplx_ld e = upper_incomplete_gamma_ld(s, x);
        CHECK(std::abs(d - cplx(static_cast<double>(e.real()), static_cast<double>(e.imag()))) < 1e-12 * std::abs(d));
    }
}
