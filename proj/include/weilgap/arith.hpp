#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <type_traits>
#include <vector>

#include "weilgap/number_theory.hpp"

namespace weilgap {

using cplx = std::complex<double>;

/**
 * 2x2 integer matrix [[a, b], [c, d]].
 *
 * The public constructor enforces ad - bc = 1; intermediates with other
 * determinants go through Mat2::unchecked.
 */
class Mat2 {
public:
    Mat2() : a_(1), b_(0), c_(0), d_(1) {}
    Mat2(Integer a, Integer b, Integer c, Integer d);

    static Mat2 unchecked(Integer a, Integer b, Integer c, Integer d);

    static Mat2 identity() { return {}; }
    /// Translation z -> z + 1.
    static Mat2 S() { return unchecked(1, 1, 0, 1); }
    /// Inversion z -> -1/z.
    static Mat2 T() { return unchecked(0, -1, 1, 0); }
    static Mat2 S_pow(const Integer& e) { return unchecked(1, e, 0, 1); }

    const Integer& a() const { return a_; }
    const Integer& b() const { return b_; }
    const Integer& c() const { return c_; }
    const Integer& d() const { return d_; }

    Integer det() const { return a_ * d_ - b_ * c_; }
    Integer trace() const { return a_ + d_; }

    /// Inverse of a determinant-one matrix.
    Mat2 inverse() const;

    Mat2 operator*(const Mat2& y) const;
    Mat2 operator-() const { return unchecked(-a_, -b_, -c_, -d_); }
    bool operator==(const Mat2& y) const = default;

    /// x^e for any integer e (negative powers use the inverse).
    Mat2 pow(const Integer& e) const;

    bool is_identity_up_to_sign() const;

    std::string to_string() const;

private:
    Integer a_, b_, c_, d_;
};

std::ostream& operator<<(std::ostream& os, const Mat2& m);

/// Element of PSL2(Z): representative with first nonzero of (c, d, a, b) positive.
class ProjMat2 {
public:
    ProjMat2() = default;
    explicit ProjMat2(const Mat2& m);

    const Mat2& rep() const { return rep_; }
    ProjMat2 operator*(const ProjMat2& y) const { return ProjMat2(rep_ * y.rep_); }
    ProjMat2 inverse() const { return ProjMat2(rep_.inverse()); }
    bool operator==(const ProjMat2& y) const = default;

private:
    Mat2 rep_;
};

/// Scaled Fricke involution W_p = [[0, -1/sqrt p], [sqrt p, 0]].
struct FrickeMat {
    std::int64_t p;

    /// Integer part [[0, -1], [p, 0]]; W_p is this matrix times p^(-1/2).
    Mat2 integer_part() const { return Mat2::unchecked(0, -1, p, 0); }
};

template <typename Z>
Z from_integer(const Integer& x)
{
    if constexpr (std::is_same_v<Z, Rational>)
        return Rational(x);
    else
        return Z(x.get_d());
}

// Cocycle j(g, z) = c z + d, generic in the scalar so exact (rational) and
// floating evaluation share one definition.
template <typename Z>
Z cocycle(const Mat2& g, const Z& z)
{
    return from_integer<Z>(g.c()) * z + from_integer<Z>(g.d());
}

template <typename Z>
Z mobius_generic(const Mat2& g, const Z& z)
{
    return (from_integer<Z>(g.a()) * z + from_integer<Z>(g.b())) / cocycle(g, z);
}

/// g z for Im z > 0; throws std::domain_error otherwise.
cplx mobius(const Mat2& g, cplx z);
cplx mobius(const FrickeMat& w, cplx z);

cplx cocycle(const FrickeMat& w, cplx z);

using Evaluator = std::function<cplx(cplx)>;

/// (f|_k g)(z) = j(g, z)^(-k) f(g z).
cplx slash_action(const Evaluator& f, int k, const Mat2& g, cplx z);
cplx slash_action(const Evaluator& f, int k, const FrickeMat& w, cplx z);

/// Word in S and T, evaluated left to right: t1 t2 ... tn.
struct STToken {
    enum class Letter { S, T };
    Letter letter;
    Integer exp; // T tokens carry +1 or -1

    bool operator==(const STToken&) const = default;
};

struct STWord {
    std::vector<STToken> tokens;
    /// The decomposed matrix equals sign * evaluate(tokens).
    int sign = 1;

    Mat2 evaluate() const;
    std::string to_string() const;
};

/// Merge adjacent tokens sharing a letter; T^2 collapses to -I which is
/// absorbed into the sign.
void normalize(STWord& w);

/// Euclidean reduction on the bottom row by right multiplication with S^n
/// and T; returns a word with sign so that g = sign * word.
STWord decompose_sl2(const Mat2& g);

/// Unimodular matrix with random bottom row (c, d), |c|, |d| <= bound and
/// level | c, lifted by extended Euclid and shifted by a random S^t on the left.
Mat2 random_gamma0(std::mt19937_64& rng, std::int64_t level, std::int64_t bound);

} // namespace weilgap
