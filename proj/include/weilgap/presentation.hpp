#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "weilgap/arith.hpp"

namespace weilgap {

/// Right cosets Gamma0(p)\SL2(Z) with transversal {I} U {T S^j : 0 <= j < p}.
/// Index 0 is I, index 1 + j is T S^j.
struct CosetTable {
    std::int64_t p;

    std::size_t size() const { return static_cast<std::size_t>(p) + 1; }
    std::size_t index_of(const Integer& c, const Integer& d) const;
    std::size_t index_of(const Mat2& g) const { return index_of(g.c(), g.d()); }
    Mat2 representative(std::size_t i) const;
};

/// V_q = [[-q*, -1], [q q* + 1, q]] with 1 <= q* <= p and q q* = -1 mod p.
Mat2 v_matrix(std::int64_t p, std::int64_t q);

/// q* as above.
std::int64_t v_partner(std::int64_t p, std::int64_t q);

struct Generator {
    std::string label; // "S" or "V_q"
    std::int64_t q;    // 0 for S
    Mat2 matrix;
    int order; // 0 for infinite order, else 2 or 3 in Gamma0(p)/{+-I}
};

struct Signature {
    int l = 0;
    int a = 0;
    int b = 0;
    bool operator==(const Signature&) const = default;
};

/// Expected free-product signature for prime p > 3.
Signature rademacher_signature(std::int64_t p);

struct GammaToken {
    std::size_t gen;
    Integer exp;
    bool operator==(const GammaToken&) const = default;
};

/// Word in the final generators; the element equals sign * product.
struct GammaWord {
    std::vector<GammaToken> tokens;
    int sign = 1;
};

/// Image in Z^(l-2a-2b) x (Z/2)^(2a) x (Z/3)^(2b).
struct ExpVector {
    std::vector<Integer> free;
    std::vector<int> tor2;
    std::vector<int> tor3;

    bool is_zero() const;
    ExpVector operator+(const ExpVector& o) const;
    ExpVector operator-() const;
    ExpVector operator-(const ExpVector& o) const { return *this + (-o); }
    ExpVector scaled(const Integer& k) const;
    bool operator==(const ExpVector&) const = default;
};

/// One Tietze step, kept so Schreier generators can be re-expressed.
struct Substitution {
    std::string eliminated;
    std::string replacement;
    std::string reason; // "pairing" or "relator"
};

/**
 * Free generating set of Gamma0(p)/{+-I} obtained by Reidemeister-Schreier
 * rewriting of PSL2(Z) = <S, T | T^2, (TS)^3> over the coset transversal,
 * followed by Tietze elimination down to S and l - 1 matrices V_q.
 *
 * Immutable once built.
 */
class GenSet {
public:
    static std::shared_ptr<const GenSet> build(std::int64_t p);

    std::int64_t p() const { return p_; }
    const std::vector<Generator>& generators() const { return gens_; }
    const Signature& signature() const { return sig_; }
    const std::vector<Substitution>& rewriting_log() const { return log_; }
    const CosetTable& cosets() const { return cosets_; }

    /// Relators of the final presentation (g^order for each elliptic g).
    const std::vector<GammaWord>& relators() const { return relators_; }

    /// Every relator produced by Reidemeister-Schreier, pushed through the
    /// substitutions into the final generators.
    std::vector<GammaWord> schreier_relators_rewritten() const;

    std::size_t index_of(const std::string& label) const;

    /// Slot layout of ExpVector coordinates.
    std::size_t free_rank() const { return free_slots_.size(); }
    const std::vector<std::size_t>& free_generators() const { return free_slots_; }
    const std::vector<std::size_t>& order2_generators() const { return tor2_slots_; }
    const std::vector<std::size_t>& order3_generators() const { return tor3_slots_; }

    bool contains(const Mat2& g) const;

    GammaWord decompose(const Mat2& g) const;
    Mat2 evaluate(const GammaWord& w) const;
    ExpVector abelianize(const GammaWord& w) const;
    ExpVector zero_vector() const;

    /// The Q set: 1 together with every q for which V_q is a generator.
    std::vector<std::int64_t> q_set() const;

private:
    using SchreierWord = std::vector<std::pair<int, Integer>>;

    GenSet() = default;
    void run(std::int64_t p);

    int schreier_count() const { return static_cast<int>(p_) + 1; }
    std::string schreier_label(int id) const;
    Mat2 schreier_matrix(int id) const;
    SchreierWord rewrite(std::size_t coset, const STWord& w, std::size_t& end_coset) const;
    GammaWord reduce(std::vector<GammaToken> tokens) const;

    std::int64_t p_ = 0;
    CosetTable cosets_{0};
    std::vector<Generator> gens_;
    Signature sig_;
    std::vector<Substitution> log_;
    std::vector<GammaWord> relators_;
    std::vector<SchreierWord> raw_relators_;
    // Schreier id -> expression in final generator indices.
    std::vector<std::vector<GammaToken>> resolved_;
    std::vector<std::size_t> free_slots_, tor2_slots_, tor3_slots_;
    std::vector<int> slot_of_; // generator index -> position within its block
};

std::shared_ptr<const GenSet> build_presentation(std::int64_t p);

GammaWord decompose_gamma0(const GenSet& gens, const Mat2& g);

ExpVector abelianize(const GammaWord& w, const GenSet& gens);

std::vector<std::int64_t> compute_Q(std::int64_t p);

std::string to_string(const GammaWord& w, const GenSet& gens);

} // namespace weilgap
