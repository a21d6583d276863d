#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "weilgap/presentation.hpp"

namespace weilgap {

/// Exact angle r + s*alpha with alpha = sqrt 2; represents e(r + s alpha).
struct Angle {
    Rational r{0};
    Rational s{0};

    Angle() = default;
    Angle(Rational r_, Rational s_ = Rational(0));

    Angle operator+(const Angle& o) const { return {r + o.r, s + o.s}; }
    Angle operator-(const Angle& o) const { return {r - o.r, s - o.s}; }
    Angle operator-() const { return {-r, -s}; }
    Angle scaled(const Integer& k) const { return {r * k, s * k}; }
    bool operator==(const Angle& o) const { return r == o.r && s == o.s; }

    /// Rational part reduced to [0, 1).
    Angle reduced() const { return {frac(r), s}; }
    bool equal_mod_1(const Angle& o) const;
    bool finite_order() const { return s == 0; }

    double value() const;
    cplx phase() const;
    std::string to_string() const;
};

std::string rational_string(const Rational& x);
Rational parse_rational(const std::string& text);

/// Dirichlet character modulo a prime p, fixed by chi(g) = e(t/(p-1)) at the
/// smallest primitive root g.
class DirichletChar {
public:
    DirichletChar(std::int64_t p, std::int64_t t);
    static DirichletChar trivial(std::int64_t p) { return {p, 0}; }
    static DirichletChar quadratic(std::int64_t p) { return {p, (p - 1) / 2}; }

    std::int64_t modulus() const { return p_; }
    std::int64_t t() const { return t_; }
    std::int64_t root() const { return g_; }
    bool is_even() const;
    bool is_trivial() const { return t_ == 0; }

    /// Angle of chi(x); throws std::domain_error when p | x.
    Rational angle(const Integer& x) const;
    /// chi(x) as a complex number, 0 when p | x.
    cplx value(const Integer& x) const;
    std::string to_string() const;

private:
    std::int64_t p_, t_, g_;
    std::vector<std::int64_t> log_; // discrete log base g
};

/**
 * Angle assignment on the generators of Gamma0(p)/{+-I}; extended to the
 * group through the abelianization.
 */
class MultiplierSystem {
public:
    MultiplierSystem(std::shared_ptr<const GenSet> gens, std::vector<Angle> angles);
    static MultiplierSystem trivial(std::shared_ptr<const GenSet> gens);

    std::int64_t p() const { return gens_->p(); }
    const GenSet& gens() const { return *gens_; }
    const std::shared_ptr<const GenSet>& gens_ptr() const { return gens_; }
    const std::vector<Angle>& angles() const { return angles_; }

    /// Value on an abelianized element, rational part reduced mod 1.
    Angle evaluate(const ExpVector& v) const;
    Angle evaluate(const Mat2& g) const;

    bool is_trivial() const;
    bool finite_order() const;

    /// Pointwise sum (product of characters).
    MultiplierSystem operator+(const MultiplierSystem& o) const;

private:
    std::shared_ptr<const GenSet> gens_;
    std::vector<Angle> angles_;
};

MultiplierSystem char_multiplier(const DirichletChar& chi, std::shared_ptr<const GenSet> gens);

Angle evaluate(const MultiplierSystem& u, const Mat2& g);

/// Smallest n with tau S^n tau^-1 in Gamma0(p).
std::int64_t cusp_width(std::int64_t p, const Mat2& tau);

/// kappa_tau in [0, 1) plus irrational part.
Angle cusp_parameter(const MultiplierSystem& u, const Mat2& tau);

/// [[D, a], [-p B, q]] with qD + apB = 1 and B in [1, q].
struct TwistMatrix {
    std::int64_t a, q;
    Integer B, D;
    Mat2 matrix;
};

TwistMatrix twist_matrix(std::int64_t p, std::int64_t a, std::int64_t q);
/// Same residue data with an explicit B (B = (ap)^-1 mod q required).
TwistMatrix twist_matrix(std::int64_t p, std::int64_t a, std::int64_t q, const Integer& B);

struct ConstraintRow {
    enum class Kind { KappaI, KappaT, Pretend, Custom };
    Kind kind;
    std::int64_t a = 0, q = 0;
    Mat2 matrix;
    ExpVector vec;
    Angle target;
    std::string tag() const;
};

struct ConstraintSystem {
    std::int64_t p = 0;
    std::int64_t q_max = 0;
    std::vector<ConstraintRow> rows;
};

ConstraintSystem pretend_constraints(const GenSet& gens, const DirichletChar& chi, std::int64_t q_max);

struct KernelResult {
    std::size_t rank = 0;
    std::vector<std::size_t> pivots;
    /// Reduced-echelon kernel basis, one vector per non-pivot column.
    std::vector<std::vector<Rational>> basis;
};

/// Exact kernel of an integer matrix: Bareiss elimination then reduction over Q.
KernelResult integer_kernel(const std::vector<std::vector<Integer>>& rows, std::size_t ncols);

struct PretendSolution {
    MultiplierSystem upsilon;
    MultiplierSystem upsilon_chi;
    std::size_t kernel_dim = 0;
    std::size_t rank = 0;
    /// Kernel vectors in free-slot coordinates (see GenSet::free_generators).
    std::vector<std::vector<Rational>> kernel_basis;
    std::size_t kernel_index = 0;
    /// l - (2 + Q^2/2) >= 5, the count-based prediction of a 5-dim kernel.
    bool count_predicts_five = false;
    bool boundary_flag = false;
};

/// Particular solution upsilon_chi plus sqrt 2 times the chosen kernel vector.
PretendSolution solve_pretend(const ConstraintSystem& cs, const DirichletChar& chi,
                              std::shared_ptr<const GenSet> gens, std::size_t kernel_index = 0);

/// True iff u satisfies every row exactly (mod 1).
bool satisfies(const MultiplierSystem& u, const ConstraintSystem& cs);

struct SixthRootReport {
    std::int64_t p = 0;
    ExpVector image;
    bool free_proportional_to_S = false;
    Integer multiple_of_S;
    bool torsion_zero = false;
    /// Order of the torsion component (1, 2, 3 or 6).
    int torsion_order = 1;
};

SixthRootReport sixth_root_check(const GenSet& gens);

/// diff(B') - diff(B) = alpha e_S + beta x with x the image of T S^p T^-1.
struct BInvarianceWitness {
    TwistMatrix m1, m2;
    ExpVector difference;
    Integer alpha, beta;
    bool ok = false;
};

BInvarianceWitness b_invariance(const GenSet& gens, std::int64_t a, std::int64_t q, const Integer& B1,
                                const Integer& B2);

} // namespace weilgap
