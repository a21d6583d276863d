#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "weilgap/characters.hpp"
#include "weilgap/series.hpp"
#include "weilgap/special.hpp"

namespace weilgap {

/// Reduced fraction a/q; a is kept as given (not reduced mod q).
struct AdditiveTwist {
    std::int64_t a = 0;
    std::int64_t q = 1;

    AdditiveTwist() = default;
    AdditiveTwist(std::int64_t a_, std::int64_t q_);
};

/**
 * Twisted functional equation
 *   Lambda(f, a/q, s) = i^k phase (p q^2)^(k/2 - s) Lambda(g, -B/q, k - s)
 * attached to [[D, a], [-p B, q]] of determinant one.
 */
struct FEStatement {
    std::int64_t p = 1;
    int k = 0;
    std::int64_t a = 0, q = 1;
    Integer B = 0, D = 1;
    Angle phase;

    /// B in [1, q] with B = (a p)^-1 mod q.
    static FEStatement for_twist(std::int64_t p, int k, std::int64_t a, std::int64_t q, Angle phase = {});
    /// (a, q, B, D) = (-1, q, -(q q* + 1)/p, -q*), whose matrix is V_q;
    /// for q = 1 this is (-1, 1, -1, 1 - p).
    static FEStatement generator_tuple(std::int64_t p, int k, std::int64_t q, Angle phase = {});

    Mat2 matrix() const;
    Integer X() const { return Integer(p) * q * q; }
    /// 1/(q sqrt p), the balance point of the split.
    double balance_height() const;
    void validate() const;
};

struct LambdaValue {
    cplx value;
    double error = 0;
    cplx s;
    std::int64_t a = 0, q = 1;
    double y0 = 0;
    std::size_t M = 0;
};

/// The two halves of the incomplete-Gamma split: value = direct + phase * dual.
struct LambdaSplit {
    cplx direct, dual;
    double direct_error = 0, dual_error = 0;
};

/**
 * Lambda(f, a/q, s) = sum a_m e(am/q) (2 pi m)^-s Gamma(s, 2 pi m y0)
 *   + phase i^k X^(k/2-s) sum b_m e(-Bm/q) (2 pi m)^(s-k) Gamma(k-s, 2 pi m/(X y0)).
 * The second sum is the integral over (0, y0) moved to the g side through the
 * modular relation. Throws std::runtime_error when the prefix is too short.
 */
LambdaSplit lambda_split(const CoeffSeries& f, const CoeffSeries& g, const FEStatement& fe, cplx s, double y0);

LambdaValue lambda_additive(const CoeffSeries& f, const CoeffSeries& g, const FEStatement& fe, cplx s,
                            double y0 = 0);

/// Lambda(g, -B/q, s) split with f on the dual side and the conjugate phase.
LambdaValue lambda_additive_dual(const CoeffSeries& f, const CoeffSeries& g, const FEStatement& fe, cplx s,
                                 double y0 = 0);

/// Gamma(s) sum a_m e(am/q) (2 pi m)^-s; requires Re s > sigma + 1.
LambdaValue lambda_direct(const CoeffSeries& f, const AdditiveTwist& t, cplx s);

struct ModularResidual {
    cplx lhs, rhs;
    double residual = 0;     // |lhs - rhs| / max(|lhs|, |rhs|)
    double error = 0;        // relative evaluation error
    double abs_residual = 0; // |lhs - rhs|
};

/**
 * f(z + a/q) against phase X^(-k/2) z^(-k) g(-B/q - 1/(X z)), X = p q^2.
 */
ModularResidual check_modular_relation(const CoeffSeries& f, const CoeffSeries& g, const FEStatement& fe, cplx z);

struct Tolerance {
    double tol = 1e-6;
    double error_factor = 10;
    /// Pass iff residual <= max(tol, factor * error) and error <= tol.
    bool passes(double residual, double error) const;
};

struct FESample {
    cplx s;
    cplx lhs, rhs;
    double residual = 0;
    double error = 0;
    double y0_residual = 0;
    double y0_error = 0;
    bool pass = false;
};

struct FEReport {
    std::vector<FESample> samples;
    bool pass = false;
};

std::vector<cplx> default_s_grid(int k, double sigma);

/**
 * LHS Lambda(f, a/q, s) split at y0 = b, RHS from Lambda(g, -B/q, k - s)
 * split at 3b, plus Lambda(f, a/q, s) at 0.3b against 3b. Residuals are
 * relative.
 */
FEReport check_fe_additive(const CoeffSeries& f, const CoeffSeries& g, const FEStatement& fe,
                           const std::vector<cplx>& s_samples, Tolerance tol = {});

/// Phase making the split independent of y0, from y0 = b/2 and 2b.
cplx fit_phase(const CoeffSeries& f, const CoeffSeries& g, const FEStatement& fe, cplx s);

/// Phase of the additive functional equation for twist a/q.
using PhaseFn = std::function<Angle(std::int64_t a, std::int64_t q)>;

PhaseFn trivial_phase();
/// chi(q) for every a.
PhaseFn character_phase(const DirichletChar& chi);
/// u([[D, a], [-p B, q]]).
PhaseFn multiplier_phase(const MultiplierSystem& u);

struct MultiplicativeContext {
    std::int64_t p = 1;
    int k = 0;
    PhaseFn phase = trivial_phase();
};

/// (1/tau(conj psi)) sum' conj psi(a) Lambda(f, a/q, s).
LambdaValue lambda_multiplicative(const CoeffSeries& f, const CoeffSeries& g, const MultiplicativeContext& ctx,
                                  const ModCharacter& psi, cplx s, double y0_scale = 1);

/// Same sum for g and psi, each additive piece split with f on the dual side.
LambdaValue lambda_multiplicative_dual(const CoeffSeries& f, const CoeffSeries& g,
                                       const MultiplicativeContext& ctx, const ModCharacter& psi, cplx s,
                                       double y0_scale = 1);

/// Gamma(s) sum a_m psi(m) (2 pi m)^-s; requires Re s > sigma + 1.
LambdaValue lambda_multiplicative_direct(const CoeffSeries& f, const ModCharacter& psi, cplx s);

/// Both sides of the finite identity turning additive twists into a
/// multiplicative one: (1/tau(conj psi)) sum' conj psi(a) X(-(a p)^-1) and
/// psi(p) tau(psi)^2 / q * (1/tau(psi)) sum' psi(b) X(b).
std::pair<cplx, cplx> gauss_assembly_sides(const ModCharacter& psi, std::int64_t p, const std::vector<cplx>& X);

/**
 * Lambda(f, psi, s) = i^k chi(q) psi(p) tau(psi)^2/q (p q^2)^(k/2-s) Lambda(g, conj psi, k - s).
 * `chi_q` is chi(q) as an angle.
 */
FEReport check_fe_multiplicative(const CoeffSeries& f, const CoeffSeries& g, const MultiplicativeContext& ctx,
                                 const Angle& chi_q, const ModCharacter& psi, const std::vector<cplx>& s_samples,
                                 Tolerance tol = {});

struct GeneratorCheck {
    std::int64_t q = 0;
    std::string label;
    double residual = 0;
    double error = 0;
    bool pass = false;
};

struct Certificate {
    std::int64_t p = 0;
    int k = 0;
    std::string chi;
    std::vector<std::int64_t> Q;
    std::vector<GeneratorCheck> per_generator;
    bool verdict = false;
    std::string conclusion;
};

/**
 * Modular relations for the Fricke tuple (q = 1) and each generator tuple
 * q in Q \ {1}, sampled at three points near the balance height.
 */
Certificate certify_modularity(const CoeffSeries& f, const CoeffSeries& g, std::int64_t p, int k,
                               const DirichletChar& chi, double tolerance);

/// g = f |_k W_p for a level-one form f: b_{pm} = p^(k/2) a_m.
CoeffSeries fricke_dual_of_level_one(const CoeffSeries& f, std::int64_t p);

} // namespace weilgap
