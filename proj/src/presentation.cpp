#include "weilgap/presentation.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace weilgap {

std::size_t CosetTable::index_of(const Integer& c, const Integer& d) const
{
    const Integer pp(p);
    const Integer cr = floor_mod(c, pp);
    if (cr == 0)
        return 0;
    const std::int64_t ci = cr.get_si();
    const std::int64_t di = Integer(floor_mod(d, pp)).get_si();
    return 1 + static_cast<std::size_t>(mod(di * inverse_mod(ci, p), p));
}

Mat2 CosetTable::representative(std::size_t i) const
{
    if (i == 0)
        return Mat2::identity();
    return Mat2::T() * Mat2::S_pow(Integer(static_cast<long>(i - 1)));
}

std::int64_t v_partner(std::int64_t p, std::int64_t q)
{
    if (mod(q, p) == 0)
        throw std::invalid_argument("V_q requires q not divisible by p");
    std::int64_t s = mod(-inverse_mod(q, p), p);
    return s == 0 ? p : s;
}

Mat2 v_matrix(std::int64_t p, std::int64_t q)
{
    const std::int64_t s = v_partner(p, q);
    return Mat2(Integer(-s), Integer(-1), Integer(q) * s + 1, Integer(q));
}

Signature rademacher_signature(std::int64_t p)
{
    Signature s;
    s.l = 2 * static_cast<int>(p / 12) + 3;
    s.a = mod(p, 4) == 1 ? 1 : 0;
    s.b = mod(p, 3) == 1 ? 1 : 0;
    return s;
}

bool ExpVector::is_zero() const
{
    return std::all_of(free.begin(), free.end(), [](const Integer& x) { return x == 0; })
        && std::all_of(tor2.begin(), tor2.end(), [](int x) { return x == 0; })
        && std::all_of(tor3.begin(), tor3.end(), [](int x) { return x == 0; });
}

ExpVector ExpVector::operator+(const ExpVector& o) const
{
    ExpVector r = *this;
    for (std::size_t i = 0; i < free.size(); ++i)
        r.free[i] += o.free[i];
    for (std::size_t i = 0; i < tor2.size(); ++i)
        r.tor2[i] = (tor2[i] + o.tor2[i]) % 2;
    for (std::size_t i = 0; i < tor3.size(); ++i)
        r.tor3[i] = (tor3[i] + o.tor3[i]) % 3;
    return r;
}

ExpVector ExpVector::operator-() const
{
    ExpVector r = *this;
    for (auto& x : r.free)
        x = -x;
    for (auto& x : r.tor2)
        x = (2 - x) % 2;
    for (auto& x : r.tor3)
        x = (3 - x) % 3;
    return r;
}

ExpVector ExpVector::scaled(const Integer& k) const
{
    ExpVector r = *this;
    for (auto& x : r.free)
        x *= k;
    const int k2 = static_cast<int>(Integer(floor_mod(k, 2)).get_si());
    const int k3 = static_cast<int>(Integer(floor_mod(k, 3)).get_si());
    for (auto& x : r.tor2)
        x = x * k2 % 2;
    for (auto& x : r.tor3)
        x = x * k3 % 3;
    return r;
}

namespace {

using SWord = std::vector<std::pair<int, Integer>>;

SWord free_reduce(const SWord& w)
{
    SWord st;
    for (const auto& [g, e] : w) {
        if (e == 0)
            continue;
        if (!st.empty() && st.back().first == g) {
            st.back().second += e;
            if (st.back().second == 0)
                st.pop_back();
        } else {
            st.emplace_back(g, e);
        }
    }
    return st;
}

SWord cyclic_reduce(SWord w)
{
    w = free_reduce(w);
    while (w.size() > 1 && w.front().first == w.back().first) {
        const int g = w.front().first;
        Integer e = w.front().second + w.back().second;
        SWord mid(w.begin() + 1, w.end() - 1);
        if (e != 0)
            mid.insert(mid.begin(), {g, e});
        w = free_reduce(mid);
    }
    return w;
}

SWord invert(const SWord& w)
{
    SWord r;
    for (auto it = w.rbegin(); it != w.rend(); ++it)
        r.emplace_back(it->first, -it->second);
    return r;
}

} // namespace

std::string GenSet::schreier_label(int id) const
{
    if (id == 0)
        return "S";
    if (id == 1)
        return "X";
    return "V_" + std::to_string(id - 1);
}

Mat2 GenSet::schreier_matrix(int id) const
{
    if (id == 0)
        return Mat2::S();
    if (id == 1)
        return Mat2::T() * Mat2::S_pow(Integer(p_)) * Mat2::T().inverse();
    return v_matrix(p_, id - 1);
}

GenSet::SchreierWord GenSet::rewrite(std::size_t coset, const STWord& w, std::size_t& end_coset) const
{
    SchreierWord out;
    const Integer pp(p_);
    for (const auto& t : w.tokens) {
        if (t.letter == STToken::Letter::S) {
            if (coset == 0) {
                out.emplace_back(0, t.exp);
            } else {
                const Integer pos = Integer(static_cast<long>(coset - 1)) + t.exp;
                const Integer wraps = floor_div(pos, pp);
                if (wraps != 0)
                    out.emplace_back(1, wraps);
                coset = 1 + static_cast<std::size_t>(Integer(floor_mod(pos, pp)).get_ui());
            }
        } else {
            // T and T^-1 agree in PSL2(Z)
            if (coset == 0) {
                coset = 1;
            } else if (coset == 1) {
                coset = 0;
            } else {
                const std::int64_t j = static_cast<std::int64_t>(coset) - 1;
                out.emplace_back(static_cast<int>(j) + 1, Integer(1));
                coset = 1 + static_cast<std::size_t>(mod(-inverse_mod(j, p_), p_));
            }
        }
    }
    end_coset = coset;
    return free_reduce(out);
}

void GenSet::run(std::int64_t p)
{
    p_ = p;
    cosets_ = CosetTable{p};
    const int n = schreier_count();

    const auto letter_word = [](const std::string& s) {
        STWord w;
        for (char ch : s)
            w.tokens.push_back({ch == 'S' ? STToken::Letter::S : STToken::Letter::T, Integer(1)});
        return w;
    };
    std::vector<SWord> rels;
    for (std::size_t c = 0; c < cosets_.size(); ++c) {
        for (const char* r : {"TT", "TSTSTS"}) {
            std::size_t end = 0;
            SWord w = cyclic_reduce(rewrite(c, letter_word(r), end));
            if (end != c)
                throw std::logic_error("relator rewriting did not close up");
            if (!w.empty())
                rels.push_back(std::move(w));
        }
    }
    raw_relators_ = rels;

    for (const auto& r : rels) {
        Mat2 m;
        for (const auto& [g, e] : r)
            m = m * schreier_matrix(g).pow(e);
        if (!m.is_identity_up_to_sign())
            throw std::logic_error("Schreier relator is not trivial");
    }

    // Elliptic Schreier generators: V_j with j* = j (order 2) or j* = j - 1
    // (order 3, together with its partner).
    std::vector<int> order(n, 0);
    for (std::int64_t j = 1; j < p; ++j) {
        const std::int64_t js = v_partner(p, j);
        if (js == j)
            order[j + 1] = 2;
        if (js + 1 == j) {
            order[j + 1] = 3;
            order[js + 1] = 3;
        }
    }

    std::map<int, SWord> subs;
    std::function<SWord(const SWord&)> expand = [&](const SWord& w) {
        SWord out;
        for (const auto& [g, e] : w) {
            auto it = subs.find(g);
            if (it == subs.end()) {
                out.emplace_back(g, e);
                continue;
            }
            const SWord piece = expand(e < 0 ? invert(it->second) : it->second);
            for (Integer k = 0; k < abs(e); ++k)
                out.insert(out.end(), piece.begin(), piece.end());
        }
        return free_reduce(out);
    };
    const auto word_text = [&](const SWord& w) {
        std::ostringstream os;
        if (w.empty())
            os << "I";
        for (std::size_t i = 0; i < w.size(); ++i)
            os << (i ? " " : "") << schreier_label(w[i].first) << "^" << w[i].second;
        return os.str();
    };

    // V_{q*} = -V_q^{-1}: keep the smaller index of each pair.
    for (std::int64_t j = 1; j < p; ++j) {
        const std::int64_t js = v_partner(p, j);
        if (j < js) {
            subs[static_cast<int>(js) + 1] = {{static_cast<int>(j) + 1, Integer(-1)}};
            log_.push_back({schreier_label(static_cast<int>(js) + 1),
                            schreier_label(static_cast<int>(j) + 1) + "^-1", "pairing"});
        }
    }

    // X first, then V_1, then the largest remaining q; S and elliptic
    // generators are never eliminated.
    const auto priority = [&](int g) -> std::pair<int, std::int64_t> {
        if (g == 1)
            return {0, 0};
        if (g == 2)
            return {1, 0};
        return {2, -static_cast<std::int64_t>(g)};
    };
    for (;;) {
        std::vector<SWord> next;
        for (const auto& r : rels) {
            SWord w = cyclic_reduce(expand(r));
            if (!w.empty())
                next.push_back(std::move(w));
        }
        rels = std::move(next);

        int best = -1;
        std::size_t best_rel = 0;
        for (std::size_t ri = 0; ri < rels.size(); ++ri) {
            std::map<int, Integer> count;
            for (const auto& [g, e] : rels[ri])
                count[g] += abs(e);
            for (const auto& [g, c] : count) {
                if (c != 1 || g == 0 || order[g] != 0)
                    continue;
                if (best < 0 || priority(g) < priority(best)) {
                    best = g;
                    best_rel = ri;
                }
            }
        }
        if (best < 0)
            break;

        const SWord& r = rels[best_rel];
        std::size_t k = 0;
        while (r[k].first != best)
            ++k;
        const Integer e = r[k].second;
        // r ~ g^e C  =>  g^e = C^-1
        SWord c(r.begin() + static_cast<long>(k) + 1, r.end());
        c.insert(c.end(), r.begin(), r.begin() + static_cast<long>(k));
        SWord repl = invert(c);
        if (e < 0)
            repl = invert(repl);
        subs[best] = repl;
        log_.push_back({schreier_label(best), word_text(repl), "relator"});
        rels.erase(rels.begin() + static_cast<long>(best_rel));
    }

    // Remaining generators, S first then increasing q.
    std::vector<int> survivors;
    for (int g = 0; g < n; ++g)
        if (!subs.count(g))
            survivors.push_back(g);
    if (std::find(survivors.begin(), survivors.end(), 1) != survivors.end())
        throw std::logic_error("Tietze elimination kept the parabolic T S^p T^-1");

    std::vector<int> final_index(n, -1);
    for (int g : survivors) {
        final_index[g] = static_cast<int>(gens_.size());
        Generator gen;
        gen.label = schreier_label(g);
        gen.q = g == 0 ? 0 : g - 1;
        gen.matrix = schreier_matrix(g);
        gen.order = order[g];
        gens_.push_back(std::move(gen));
    }

    for (std::size_t i = 0; i < gens_.size(); ++i) {
        const Generator& g = gens_[i];
        std::vector<std::size_t>* block = g.order == 0 ? &free_slots_ : g.order == 2 ? &tor2_slots_ : &tor3_slots_;
        slot_of_.push_back(static_cast<int>(block->size()));
        block->push_back(i);
    }
    sig_.l = static_cast<int>(gens_.size());
    sig_.a = static_cast<int>(tor2_slots_.size()) / 2;
    sig_.b = static_cast<int>(tor3_slots_.size()) / 2;

    resolved_.assign(n, {});
    for (int g = 0; g < n; ++g) {
        for (const auto& [h, e] : expand({{g, Integer(1)}}))
            resolved_[g].push_back({static_cast<std::size_t>(final_index[h]), e});
        // every substitution must hold as a matrix identity up to sign
        Mat2 m;
        for (const auto& t : resolved_[g])
            m = m * gens_[t.gen].matrix.pow(t.exp);
        if (!(m == schreier_matrix(g) || -m == schreier_matrix(g)))
            throw std::logic_error("substitution for " + schreier_label(g) + " fails as a matrix identity");
    }

    for (const auto& r : rels) {
        if (r.size() != 1 || final_index[r[0].first] < 0)
            throw std::logic_error("Tietze elimination left a non-elliptic relator " + word_text(r));
        const std::size_t gi = static_cast<std::size_t>(final_index[r[0].first]);
        if (abs(r[0].second) != gens_[gi].order)
            throw std::logic_error("unexpected elliptic relator " + word_text(r));
    }
    for (std::size_t i = 0; i < gens_.size(); ++i) {
        if (gens_[i].order == 0)
            continue;
        GammaWord w;
        w.tokens.push_back({i, Integer(gens_[i].order)});
        w.sign = gens_[i].matrix.pow(gens_[i].order) == Mat2::identity() ? 1 : -1;
        relators_.push_back(w);
    }
}

std::shared_ptr<const GenSet> GenSet::build(std::int64_t p)
{
    if (p <= 3 || !is_prime(p))
        throw std::invalid_argument(std::to_string(p) + " is not a prime greater than 3");
    std::shared_ptr<GenSet> g(new GenSet());
    g->run(p);
    return g;
}

std::vector<GammaWord> GenSet::schreier_relators_rewritten() const
{
    std::vector<GammaWord> out;
    for (const auto& r : raw_relators_) {
        std::vector<GammaToken> toks;
        for (const auto& [g, e] : r) {
            const auto& piece = resolved_[g];
            for (Integer k = 0; k < abs(e); ++k) {
                if (e > 0) {
                    toks.insert(toks.end(), piece.begin(), piece.end());
                } else {
                    for (auto it = piece.rbegin(); it != piece.rend(); ++it)
                        toks.push_back({it->gen, -it->exp});
                }
            }
        }
        GammaWord w;
        w.tokens = std::move(toks);
        out.push_back(w);
    }
    return out;
}

std::size_t GenSet::index_of(const std::string& label) const
{
    for (std::size_t i = 0; i < gens_.size(); ++i)
        if (gens_[i].label == label)
            return i;
    throw std::out_of_range("unknown generator label " + label);
}

bool GenSet::contains(const Mat2& g) const
{
    return g.det() == 1 && floor_mod(g.c(), Integer(p_)) == 0;
}

GammaWord GenSet::reduce(std::vector<GammaToken> tokens) const
{
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<GammaToken> st;
        for (auto& t : tokens) {
            const int ord = gens_[t.gen].order;
            if (ord != 0) {
                const Integer r = floor_mod(t.exp, Integer(ord));
                if (r != t.exp)
                    changed = true;
                t.exp = r;
            }
            if (t.exp == 0)
                continue;
            if (!st.empty() && st.back().gen == t.gen) {
                st.back().exp += t.exp;
                changed = true;
                if (st.back().exp == 0)
                    st.pop_back();
            } else {
                st.push_back(t);
            }
        }
        tokens = std::move(st);
    }
    GammaWord w;
    w.tokens = std::move(tokens);
    return w;
}

GammaWord GenSet::decompose(const Mat2& g) const
{
    if (!contains(g))
        throw std::invalid_argument("matrix " + g.to_string() + " is not in Gamma0(" + std::to_string(p_) + ")");
    const STWord st = decompose_sl2(g);
    std::size_t end = 0;
    const SchreierWord sw = rewrite(0, st, end);
    if (end != 0)
        throw std::logic_error("coset walk did not return to the identity coset");

    std::vector<GammaToken> toks;
    for (const auto& [id, e] : sw) {
        const auto& piece = resolved_[id];
        if (piece.size() == 1) {
            toks.push_back({piece[0].gen, piece[0].exp * e});
            continue;
        }
        for (Integer k = 0; k < abs(e); ++k) {
            if (e > 0) {
                toks.insert(toks.end(), piece.begin(), piece.end());
            } else {
                for (auto it = piece.rbegin(); it != piece.rend(); ++it)
                    toks.push_back({it->gen, -it->exp});
            }
        }
    }
    GammaWord w = reduce(std::move(toks));
    const Mat2 m = evaluate(w);
    if (m == g)
        w.sign = 1;
    else if (-m == g)
        w.sign = -1;
    else
        throw std::logic_error("decompose_gamma0: word does not reproduce " + g.to_string());
    return w;
}

Mat2 GenSet::evaluate(const GammaWord& w) const
{
    Mat2 m;
    for (const auto& t : w.tokens)
        m = m * gens_.at(t.gen).matrix.pow(t.exp);
    return w.sign < 0 ? -m : m;
}

ExpVector GenSet::zero_vector() const
{
    ExpVector v;
    v.free.assign(free_slots_.size(), Integer(0));
    v.tor2.assign(tor2_slots_.size(), 0);
    v.tor3.assign(tor3_slots_.size(), 0);
    return v;
}

ExpVector GenSet::abelianize(const GammaWord& w) const
{
    ExpVector v = zero_vector();
    for (const auto& t : w.tokens) {
        if (t.gen >= gens_.size())
            throw std::out_of_range("word refers to an unknown generator");
        const int slot = slot_of_[t.gen];
        switch (gens_[t.gen].order) {
        case 0:
            v.free[slot] += t.exp;
            break;
        case 2:
            v.tor2[slot] = static_cast<int>((v.tor2[slot] + Integer(floor_mod(t.exp, 2)).get_si()) % 2);
            break;
        default:
            v.tor3[slot] = static_cast<int>((v.tor3[slot] + Integer(floor_mod(t.exp, 3)).get_si()) % 3);
            break;
        }
    }
    return v;
}

std::vector<std::int64_t> GenSet::q_set() const
{
    std::vector<std::int64_t> qs{1};
    for (const auto& g : gens_)
        if (g.q != 0)
            qs.push_back(g.q);
    return qs;
}

std::shared_ptr<const GenSet> build_presentation(std::int64_t p)
{
    return GenSet::build(p);
}

GammaWord decompose_gamma0(const GenSet& gens, const Mat2& g)
{
    return gens.decompose(g);
}

ExpVector abelianize(const GammaWord& w, const GenSet& gens)
{
    return gens.abelianize(w);
}

std::vector<std::int64_t> compute_Q(std::int64_t p)
{
    return build_presentation(p)->q_set();
}

std::string to_string(const GammaWord& w, const GenSet& gens)
{
    std::ostringstream os;
    os << (w.sign < 0 ? "-" : "");
    if (w.tokens.empty())
        os << "I";
    for (std::size_t i = 0; i < w.tokens.size(); ++i) {
        os << (i ? " " : "") << gens.generators()[w.tokens[i].gen].label;
        if (w.tokens[i].exp != 1)
            os << "^" << w.tokens[i].exp;
    }
    return os.str();
}

} // namespace weilgap
