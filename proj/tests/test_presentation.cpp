#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "test_support.hpp"
#include "weilgap/presentation.hpp"

using namespace weilgap;

namespace {

std::vector<std::int64_t> primes_between(std::int64_t lo, std::int64_t hi)
{
    std::vector<std::int64_t> out;
    for (std::int64_t n = lo; n < hi; ++n)
        if (is_prime(n))
            out.push_back(n);
    return out;
}

Mat2 gen(const GenSet& g, const std::string& label)
{
    return g.generators()[g.index_of(label)].matrix;
}

} // namespace

TEST_CASE("signature examples")
{
    CHECK(build_presentation(13)->signature() == Signature{5, 1, 1});
    CHECK(build_presentation(11)->signature() == Signature{3, 0, 0});
    CHECK(build_presentation(5)->signature() == Signature{3, 1, 0});

    // the two elliptic elements of order 2 at p = 5 are q = 2, 3
    int count = 0;
    for (std::int64_t q = 2; q <= 3; ++q)
        count += (q * q + 1) % 5 == 0;
    CHECK(count == 2);
    const auto g5 = build_presentation(5);
    CHECK(g5->order2_generators().size() == 2);
}

TEST_CASE("signature matches the free-product formula for all p < 200")
{
    for (std::int64_t p : primes_between(5, 200)) {
        CAPTURE(p);
        const auto g = build_presentation(p);
        const Signature s = g->signature();
        CHECK(s.l == 2 * (p / 12) + 3);
        CHECK(s.a == (p % 4 == 1 ? 1 : 0));
        CHECK(s.b == (p % 3 == 1 ? 1 : 0));
        CHECK(static_cast<int>(g->generators().size()) == s.l);
        CHECK(g->order2_generators().size() == static_cast<std::size_t>(2 * s.a));
        CHECK(g->order3_generators().size() == static_cast<std::size_t>(2 * s.b));
        CHECK(g->q_set().size() == static_cast<std::size_t>(s.l));

        CHECK(g->generators()[0].label == "S");
        for (const auto& gn : g->generators()) {
            const Integer tr = abs(gn.matrix.trace());
            if (gn.order == 2)
                CHECK(tr == 0);
            else if (gn.order == 3)
                CHECK(tr == 1);
            else
                CHECK(tr >= 2);
            if (gn.q == 0)
                continue;
            CHECK(gn.q >= 2);
            CHECK(gn.q <= p - 2);
            const Integer qs = -gn.matrix.a();
            CHECK(qs >= 1);
            CHECK(qs <= p);
            CHECK(gn.matrix.b() == -1);
            CHECK(gn.matrix.c() == gn.q * qs + 1);
            CHECK(Integer(gn.q * qs + 1) % p == 0);
        }
    }
}

TEST_CASE("invalid levels are rejected")
{
    CHECK_THROWS_AS(build_presentation(3), std::invalid_argument);
    CHECK_THROWS_AS(build_presentation(12), std::invalid_argument);
    CHECK_THROWS_AS(build_presentation(91), std::invalid_argument);
}

TEST_CASE("v_matrix")
{
    CHECK(v_matrix(13, 4) == Mat2(-3, -1, 13, 4));
    CHECK(v_matrix(13, 10) == Mat2(-9, -1, 91, 10));
    const Mat2 v = v_matrix(5, 2);
    CHECK(v == Mat2(-2, -1, 5, 2));
    CHECK(v.trace() == 0);
    CHECK(v * v == -Mat2::identity());
    CHECK_THROWS(v_matrix(13, 26));
}

TEST_CASE("coset table")
{
    const CosetTable t{13};
    CHECK(t.index_of(Mat2::S()) == 0);
    CHECK(t.index_of(Mat2::T()) == 1);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        const Mat2 g = testing::random_lift(rng, 1, 100000);
        const Mat2 rep = t.representative(t.index_of(g));
        const Mat2 h = g * rep.inverse();
        CHECK(Integer(h.c() % 13) == 0);
    }
}

TEST_CASE("decompose_gamma0 examples")
{
    const auto g = build_presentation(13);
    const GammaWord s = decompose_gamma0(*g, Mat2::S());
    REQUIRE(s.tokens.size() == 1);
    CHECK(g->generators()[s.tokens[0].gen].label == "S");
    CHECK(s.tokens[0].exp == 1);
    CHECK(s.sign == 1);

    const Mat2 m(1, 0, -13, 1);
    CHECK(m == Mat2::T() * Mat2::S_pow(13) * Mat2::T().inverse());
    const GammaWord w = decompose_gamma0(*g, m);
    CHECK(g->evaluate(w) == m);

    CHECK_THROWS_AS(decompose_gamma0(*g, Mat2(1, 0, 1, 1)), std::invalid_argument);
}

TEST_CASE("p = 13 parabolic identity, both multiplication orders")
{
    const std::int64_t p = 13;
    const Mat2 target = Mat2::T() * Mat2::S_pow(13) * Mat2::T().inverse();
    const std::vector<Mat2> factors{v_matrix(p, 10).pow(-2), v_matrix(p, 8).pow(-1), v_matrix(p, 5).pow(-1),
                                    v_matrix(p, 4).pow(-2), Mat2::S().inverse()};
    Mat2 l2r, r2l;
    for (const auto& f : factors)
        l2r = l2r * f;
    for (auto it = factors.rbegin(); it != factors.rend(); ++it)
        r2l = r2l * *it;
    CHECK(ProjMat2(l2r) == ProjMat2(target));
    CHECK(l2r == target);
    CHECK_FALSE(ProjMat2(r2l) == ProjMat2(target));
}

TEST_CASE("round trip on random elements")
{
    std::mt19937_64 rng(99);
    for (std::int64_t p : {5, 7, 11, 13, 29, 101}) {
        CAPTURE(p);
        const auto g = build_presentation(p);
        const auto& gs = g->generators();
        std::uniform_int_distribution<std::size_t> pick(0, gs.size() - 1);
        std::uniform_int_distribution<int> ex(-3, 3);
        for (int i = 0; i < 100; ++i) {
            Mat2 prod;
            for (int k = 0; k < 6; ++k)
                prod = prod * gs[pick(rng)].matrix.pow(ex(rng));
            const GammaWord w = g->decompose(prod);
            CHECK(g->evaluate(w) == prod);

            const Mat2 lifted = testing::random_lift(rng, p, 1000000);
            const GammaWord w2 = g->decompose(lifted);
            CHECK(g->evaluate(w2) == lifted);
            for (std::size_t k = 1; k < w2.tokens.size(); ++k)
                CHECK(w2.tokens[k].gen != w2.tokens[k - 1].gen);
        }
    }
}

TEST_CASE("abelianization")
{
    const auto g = build_presentation(13);
    const ExpVector s3 = g->abelianize(g->decompose(Mat2::S_pow(3)));
    ExpVector expect = g->zero_vector();
    expect.free[0] = 3;
    CHECK(s3 == expect);

    for (const auto& r : g->relators())
        CHECK(g->abelianize(r).is_zero());

    GammaWord bad;
    bad.tokens.push_back({99, Integer(1)});
    CHECK_THROWS_AS(g->abelianize(bad), std::out_of_range);
    CHECK_THROWS_AS(g->index_of("V_1"), std::out_of_range);
}

TEST_CASE("Schreier relators collapse in the final presentation")
{
    for (std::int64_t p : {5, 7, 11, 13, 17, 19, 37, 61}) {
        CAPTURE(p);
        const auto g = build_presentation(p);
        for (const auto& r : g->schreier_relators_rewritten()) {
            CHECK(g->evaluate(r).is_identity_up_to_sign());
            CHECK(g->abelianize(r).is_zero());
        }
        CHECK_FALSE(g->rewriting_log().empty());
    }
}

TEST_CASE("pairing V_q* = -V_q^-1 in the abelianization")
{
    for (std::int64_t p : {11, 13, 29, 37, 101}) {
        CAPTURE(p);
        const auto g = build_presentation(p);
        for (const auto& gn : g->generators()) {
            if (gn.q == 0 || gn.order != 0)
                continue;
            const Mat2 vq = v_matrix(p, gn.q);
            const Mat2 vs = v_matrix(p, v_partner(p, gn.q) % p == 0 ? 1 : v_partner(p, gn.q));
            CHECK(vs == -vq.inverse());
            CHECK(g->abelianize(g->decompose(vs)) == -g->abelianize(g->decompose(vq)));
        }
    }
}

TEST_CASE("compute_Q")
{
    for (auto [p, n] : std::vector<std::pair<std::int64_t, std::size_t>>{{13, 5}, {11, 3}, {29, 7}}) {
        const auto q = compute_Q(p);
        CHECK(q.size() == n);
        CHECK(q.front() == 1);
        for (auto x : q) {
            CHECK(x >= 1);
            CHECK(x <= p - 2);
        }
    }
}
