#include "weilgap/arith.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace weilgap {

Mat2::Mat2(Integer a, Integer b, Integer c, Integer d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d))
{
    if (det() != 1)
        throw std::invalid_argument("matrix " + to_string() + " does not have determinant 1");
}

Mat2 Mat2::unchecked(Integer a, Integer b, Integer c, Integer d)
{
    Mat2 m;
    m.a_ = std::move(a);
    m.b_ = std::move(b);
    m.c_ = std::move(c);
    m.d_ = std::move(d);
    return m;
}

Mat2 Mat2::inverse() const
{
    return unchecked(d_, -b_, -c_, a_);
}

Mat2 Mat2::operator*(const Mat2& y) const
{
    return unchecked(a_ * y.a_ + b_ * y.c_, a_ * y.b_ + b_ * y.d_,
                     c_ * y.a_ + d_ * y.c_, c_ * y.b_ + d_ * y.d_);
}

Mat2 Mat2::pow(const Integer& e) const
{
    if (c_ == 0 && a_ == 1 && d_ == 1)
        return unchecked(1, b_ * e, 0, 1);
    Mat2 base = e < 0 ? inverse() : *this;
    Integer n = abs(e);
    Mat2 acc = identity();
    while (n > 0) {
        if (mpz_odd_p(n.get_mpz_t()))
            acc = acc * base;
        n >>= 1;
        if (n > 0)
            base = base * base;
    }
    return acc;
}

bool Mat2::is_identity_up_to_sign() const
{
    return b_ == 0 && c_ == 0 && a_ == d_ && abs(a_) == 1;
}

std::string Mat2::to_string() const
{
    std::ostringstream os;
    os << "[[" << a_ << "," << b_ << "],[" << c_ << "," << d_ << "]]";
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Mat2& m)
{
    return os << m.to_string();
}

ProjMat2::ProjMat2(const Mat2& m)
{
    int s = 0;
    for (const Integer* x : {&m.c(), &m.d(), &m.a(), &m.b()}) {
        if (*x != 0) {
            s = sgn(*x);
            break;
        }
    }
    rep_ = s < 0 ? -m : m;
}

namespace {

void require_upper(cplx z)
{
    if (!(z.imag() > 0))
        throw std::domain_error("point is not in the upper half-plane");
}

} // namespace

cplx mobius(const Mat2& g, cplx z)
{
    require_upper(z);
    return mobius_generic(g, z);
}

cplx mobius(const FrickeMat& w, cplx z)
{
    require_upper(z);
    return -1.0 / (static_cast<double>(w.p) * z);
}

cplx cocycle(const FrickeMat& w, cplx z)
{
    return std::sqrt(static_cast<double>(w.p)) * z;
}

cplx slash_action(const Evaluator& f, int k, const Mat2& g, cplx z)
{
    const cplx gz = mobius(g, z);
    return std::pow(cocycle(g, z), -k) * f(gz);
}

cplx slash_action(const Evaluator& f, int k, const FrickeMat& w, cplx z)
{
    const cplx wz = mobius(w, z);
    return std::pow(cocycle(w, z), -k) * f(wz);
}

Mat2 STWord::evaluate() const
{
    Mat2 acc;
    for (const auto& t : tokens)
        acc = acc * (t.letter == STToken::Letter::S ? Mat2::S_pow(t.exp) : Mat2::T().pow(t.exp));
    return acc;
}

std::string STWord::to_string() const
{
    std::ostringstream os;
    os << (sign < 0 ? "-" : "");
    if (tokens.empty())
        os << "I";
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        os << (i ? " " : "") << (tokens[i].letter == STToken::Letter::S ? "S" : "T");
        if (tokens[i].exp != 1)
            os << "^" << tokens[i].exp;
    }
    return os.str();
}

void normalize(STWord& w)
{
    std::vector<STToken> out;
    for (auto t : w.tokens) {
        if (t.exp == 0)
            continue;
        if (t.letter == STToken::Letter::T && t.exp == -1) {
            // T^-1 = -T
            t.exp = 1;
            w.sign = -w.sign;
        }
        if (!out.empty() && out.back().letter == t.letter) {
            if (t.letter == STToken::Letter::S) {
                out.back().exp += t.exp;
            } else {
                // T T = -I
                w.sign = -w.sign;
                out.pop_back();
                continue;
            }
            if (out.back().exp == 0)
                out.pop_back();
            continue;
        }
        out.push_back(std::move(t));
    }
    w.tokens = std::move(out);
}

STWord decompose_sl2(const Mat2& g)
{
    if (g.det() != 1)
        throw std::invalid_argument("decompose_sl2 requires determinant 1");

    Mat2 cur = g;
    std::vector<STToken> inverse_steps;
    while (cur.c() != 0) {
        // nearest remainder: d + n c lands in (-|c|/2, |c|/2]
        const Integer ac = abs(cur.c());
        Integer r = floor_mod(cur.d(), ac);
        if (2 * r > ac)
            r -= ac;
        const Integer n = (r - cur.d()) / cur.c();
        if (n != 0) {
            cur = cur * Mat2::S_pow(n);
            inverse_steps.push_back({STToken::Letter::S, -n});
        }
        cur = cur * Mat2::T();
        inverse_steps.push_back({STToken::Letter::T, -1});
    }
    // cur = eps * S^(eps b)
    const int eps = sgn(cur.a());
    STWord w;
    const Integer top = eps * cur.b();
    if (top != 0)
        w.tokens.push_back({STToken::Letter::S, top});
    w.tokens.insert(w.tokens.end(), inverse_steps.rbegin(), inverse_steps.rend());
    normalize(w);

    const Mat2 e = w.evaluate();
    if (e == g)
        w.sign = 1;
    else if (-e == g)
        w.sign = -1;
    else
        throw std::logic_error("decompose_sl2: word does not reproduce " + g.to_string());
    return w;
}

Mat2 random_gamma0(std::mt19937_64& rng, std::int64_t level, std::int64_t bound)
{
    std::uniform_int_distribution<std::int64_t> dist(-bound, bound);
    for (;;) {
        const Integer c = Integer(dist(rng) / level) * level;
        const Integer d(dist(rng));
        Integer x, y;
        if (extended_gcd(d, c, x, y) != 1)
            continue;
        // a d - b c = 1 with a = x, b = -y
        const Integer t(dist(rng) % 1000);
        return Mat2(x + t * c, -y + t * d, c, d);
    }
}

} // namespace weilgap
