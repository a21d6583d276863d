#include "weilgap/multiplier.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace weilgap {

Angle::Angle(Rational r_, Rational s_) : r(std::move(r_)), s(std::move(s_))
{
    r.canonicalize();
    s.canonicalize();
}

bool Angle::equal_mod_1(const Angle& o) const
{
    return s == o.s && frac(r - o.r) == 0;
}

double Angle::value() const
{
    return frac(r).get_d() + s.get_d() * std::numbers::sqrt2;
}

cplx Angle::phase() const
{
    return std::polar(1.0, 2 * std::numbers::pi * value());
}

std::string rational_string(const Rational& x)
{
    std::ostringstream os;
    os << x.get_num() << "/" << x.get_den();
    return os.str();
}

Rational parse_rational(const std::string& text)
{
    Rational x;
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos)
            x = Rational(Integer(text));
        else
            x = Rational(Integer(text.substr(0, slash)), Integer(text.substr(slash + 1)));
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("cannot parse rational '" + text + "'");
    }
    if (x.get_den() == 0)
        throw std::invalid_argument("zero denominator in '" + text + "'");
    x.canonicalize();
    return x;
}

std::string Angle::to_string() const
{
    std::string out = rational_string(r);
    if (s != 0)
        out += " + (" + rational_string(s) + ")*sqrt2";
    return out;
}

DirichletChar::DirichletChar(std::int64_t p, std::int64_t t) : p_(p), t_(0), g_(1)
{
    if (!is_prime(p))
        throw std::invalid_argument(std::to_string(p) + " is not prime");
    t_ = mod(t, p - 1);
    g_ = primitive_root(p);
    log_.assign(static_cast<std::size_t>(p), -1);
    std::int64_t x = 1;
    for (std::int64_t k = 0; k < p - 1; ++k) {
        log_[static_cast<std::size_t>(x)] = k;
        x = x * g_ % p;
    }
}

bool DirichletChar::is_even() const
{
    // chi(-1) = e(t/2)
    return t_ % 2 == 0;
}

Rational DirichletChar::angle(const Integer& x) const
{
    const std::int64_t r = Integer(floor_mod(x, Integer(p_))).get_si();
    if (r == 0)
        throw std::domain_error("character argument divisible by the modulus");
    Rational a(Integer(t_) * log_[static_cast<std::size_t>(r)], Integer(p_ - 1));
    return frac(a);
}

cplx DirichletChar::value(const Integer& x) const
{
    if (floor_mod(x, Integer(p_)) == 0)
        return 0.0;
    return std::polar(1.0, 2 * std::numbers::pi * angle(x).get_d());
}

std::string DirichletChar::to_string() const
{
    if (is_trivial())
        return "trivial";
    return std::to_string(t_);
}

MultiplierSystem::MultiplierSystem(std::shared_ptr<const GenSet> gens, std::vector<Angle> angles)
    : gens_(std::move(gens)), angles_(std::move(angles))
{
    if (!gens_)
        throw std::invalid_argument("multiplier system without generators");
    if (angles_.size() != gens_->generators().size())
        throw std::invalid_argument("expected " + std::to_string(gens_->generators().size()) + " angles, got "
                                    + std::to_string(angles_.size()));
    for (std::size_t i = 0; i < angles_.size(); ++i) {
        const int ord = gens_->generators()[i].order;
        if (ord == 0)
            continue;
        const Rational m = angles_[i].r * ord;
        if (angles_[i].s != 0 || m.get_den() != 1)
            throw std::invalid_argument("angle on " + gens_->generators()[i].label + " is not a multiple of 1/"
                                        + std::to_string(ord));
    }
    for (auto& a : angles_)
        a = a.reduced();
}

MultiplierSystem MultiplierSystem::trivial(std::shared_ptr<const GenSet> gens)
{
    const std::size_t n = gens->generators().size();
    return {std::move(gens), std::vector<Angle>(n)};
}

Angle MultiplierSystem::evaluate(const ExpVector& v) const
{
    Angle acc;
    const auto& fs = gens_->free_generators();
    const auto& t2 = gens_->order2_generators();
    const auto& t3 = gens_->order3_generators();
    for (std::size_t j = 0; j < fs.size(); ++j)
        acc = acc + angles_[fs[j]].scaled(v.free[j]);
    for (std::size_t j = 0; j < t2.size(); ++j)
        acc = acc + angles_[t2[j]].scaled(v.tor2[j]);
    for (std::size_t j = 0; j < t3.size(); ++j)
        acc = acc + angles_[t3[j]].scaled(v.tor3[j]);
    return acc.reduced();
}

Angle MultiplierSystem::evaluate(const Mat2& g) const
{
    return evaluate(gens_->abelianize(gens_->decompose(g)));
}

bool MultiplierSystem::is_trivial() const
{
    for (const auto& a : angles_)
        if (!(a.reduced() == Angle()))
            return false;
    return true;
}

bool MultiplierSystem::finite_order() const
{
    for (const auto& a : angles_)
        if (!a.finite_order())
            return false;
    return true;
}

MultiplierSystem MultiplierSystem::operator+(const MultiplierSystem& o) const
{
    if (o.gens_.get() != gens_.get() && o.p() != p())
        throw std::invalid_argument("multiplier systems on different levels");
    std::vector<Angle> out(angles_.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = angles_[i] + o.angles_[i];
    return {gens_, std::move(out)};
}

MultiplierSystem char_multiplier(const DirichletChar& chi, std::shared_ptr<const GenSet> gens)
{
    if (chi.modulus() != gens->p())
        throw std::invalid_argument("character modulus differs from the level");
    if (!chi.is_even())
        throw std::invalid_argument("character " + chi.to_string() + " is odd");
    std::vector<Angle> angles;
    for (const auto& g : gens->generators())
        angles.emplace_back(chi.angle(g.matrix.d()));
    return {std::move(gens), std::move(angles)};
}

Angle evaluate(const MultiplierSystem& u, const Mat2& g)
{
    return u.evaluate(g);
}

std::int64_t cusp_width(std::int64_t p, const Mat2& tau)
{
    // tau S^n tau^-1 has lower-left entry -n c^2
    return floor_mod(tau.c(), Integer(p)) == 0 ? 1 : p;
}

Angle cusp_parameter(const MultiplierSystem& u, const Mat2& tau)
{
    const std::int64_t n = cusp_width(u.p(), tau);
    return u.evaluate(tau * Mat2::S_pow(n) * tau.inverse());
}

TwistMatrix twist_matrix(std::int64_t p, std::int64_t a, std::int64_t q)
{
    if (q < 1 || gcd(p, q) != 1)
        throw std::invalid_argument("twist denominator must be positive and prime to the level");
    if (gcd(a, q) != 1)
        throw std::invalid_argument("twist numerator not coprime to denominator");
    Integer B = q == 1 ? 1 : inverse_mod(mod(a, q) * mod(p, q) % q, q);
    if (B == 0)
        B = q;
    return twist_matrix(p, a, q, B);
}

TwistMatrix twist_matrix(std::int64_t p, std::int64_t a, std::int64_t q, const Integer& B)
{
    const Integer num = 1 - Integer(a) * p * B;
    if (floor_mod(num, Integer(q)) != 0)
        throw std::invalid_argument("B is not an inverse of a p modulo q");
    TwistMatrix t{a, q, B, num / q, Mat2()};
    t.matrix = Mat2(t.D, a, -Integer(p) * B, q);
    return t;
}

std::string ConstraintRow::tag() const
{
    switch (kind) {
    case Kind::KappaI:
        return "kappa_I";
    case Kind::KappaT:
        return "kappa_T";
    case Kind::Pretend:
        return "pretend(q=" + std::to_string(q) + ",a=" + std::to_string(a) + ")";
    default:
        return "custom";
    }
}

ConstraintSystem pretend_constraints(const GenSet& gens, const DirichletChar& chi, std::int64_t q_max)
{
    const std::int64_t p = gens.p();
    if (chi.modulus() != p)
        throw std::invalid_argument("character modulus differs from the level");
    ConstraintSystem cs;
    cs.p = p;
    cs.q_max = q_max;
    auto push = [&](ConstraintRow::Kind kind, std::int64_t a, std::int64_t q, const Mat2& m, Angle target) {
        if (!gens.contains(m))
            throw std::logic_error("constraint matrix " + m.to_string() + " not in Gamma0(p)");
        cs.rows.push_back({kind, a, q, m, gens.abelianize(gens.decompose(m)), std::move(target)});
    };
    push(ConstraintRow::Kind::KappaI, 0, 0, Mat2::S(), Angle());
    push(ConstraintRow::Kind::KappaT, 0, 0, Mat2(1, 0, -p, 1), Angle());
    for (std::int64_t q = 1; q <= q_max; ++q) {
        if (q % p == 0)
            continue;
        for (std::int64_t a = 0; a < q; ++a) {
            if (gcd(a, q) != 1)
                continue;
            const TwistMatrix t = twist_matrix(p, a, q);
            push(ConstraintRow::Kind::Pretend, a, q, t.matrix, Angle(chi.angle(q)));
        }
    }
    return cs;
}

KernelResult integer_kernel(const std::vector<std::vector<Integer>>& rows, std::size_t ncols)
{
    std::vector<std::vector<Integer>> m = rows;
    for (const auto& r : m)
        if (r.size() != ncols)
            throw std::invalid_argument("ragged matrix");
    KernelResult out;
    Integer prev = 1;
    std::size_t r = 0;
    for (std::size_t col = 0; col < ncols && r < m.size(); ++col) {
        std::size_t piv = r;
        while (piv < m.size() && m[piv][col] == 0)
            ++piv;
        if (piv == m.size())
            continue;
        std::swap(m[r], m[piv]);
        for (std::size_t i = r + 1; i < m.size(); ++i) {
            for (std::size_t j = col + 1; j < ncols; ++j) {
                Integer v = m[r][col] * m[i][j] - m[i][col] * m[r][j];
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
                m[i][j] = v;
            }
            m[i][col] = 0;
        }
        prev = m[r][col];
        out.pivots.push_back(col);
        ++r;
    }
    out.rank = r;

    std::vector<std::vector<Rational>> q(r, std::vector<Rational>(ncols));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < ncols; ++j)
            q[i][j] = Rational(m[i][j]);
    for (std::size_t k = r; k-- > 0;) {
        const std::size_t pc = out.pivots[k];
        const Rational inv = 1 / q[k][pc];
        for (auto& x : q[k])
            x *= inv;
        for (std::size_t i = 0; i < k; ++i) {
            const Rational f = q[i][pc];
            if (f == 0)
                continue;
            for (std::size_t j = 0; j < ncols; ++j)
                q[i][j] -= f * q[k][j];
        }
    }

    std::vector<bool> is_pivot(ncols, false);
    for (auto c : out.pivots)
        is_pivot[c] = true;
    for (std::size_t f = 0; f < ncols; ++f) {
        if (is_pivot[f])
            continue;
        std::vector<Rational> v(ncols, Rational(0));
        v[f] = 1;
        for (std::size_t i = 0; i < r; ++i)
            v[out.pivots[i]] = -q[i][f];
        out.basis.push_back(std::move(v));
    }
    return out;
}

bool satisfies(const MultiplierSystem& u, const ConstraintSystem& cs)
{
    for (const auto& row : cs.rows)
        if (!u.evaluate(row.vec).equal_mod_1(row.target))
            return false;
    return true;
}

PretendSolution solve_pretend(const ConstraintSystem& cs, const DirichletChar& chi,
                              std::shared_ptr<const GenSet> gens, std::size_t kernel_index)
{
    MultiplierSystem uchi = char_multiplier(chi, gens);
    if (!satisfies(uchi, cs))
        throw std::logic_error("character multiplier violates its own constraints");

    const std::size_t n = gens->free_rank();
    std::vector<std::vector<Integer>> a;
    for (const auto& row : cs.rows)
        a.push_back(row.vec.free);
    KernelResult k = integer_kernel(a, n);

    PretendSolution sol{uchi, uchi, 0, 0, {}, 0, false, false};
    sol.rank = k.rank;
    sol.kernel_dim = k.basis.size();
    sol.kernel_basis = std::move(k.basis);
    sol.kernel_index = kernel_index;

    const std::int64_t l = gens->signature().l;
    sol.count_predicts_five = 2 * (l - 2) - cs.q_max * cs.q_max >= 10;
    sol.boundary_flag = sol.count_predicts_five != (sol.kernel_dim >= 5);

    if (sol.kernel_dim == 0)
        return sol;
    if (kernel_index >= sol.kernel_dim)
        throw std::invalid_argument("kernel index " + std::to_string(kernel_index) + " out of range (dimension "
                                    + std::to_string(sol.kernel_dim) + ")");

    std::vector<Angle> extra(gens->generators().size());
    const auto& fs = gens->free_generators();
    for (std::size_t j = 0; j < n; ++j)
        extra[fs[j]] = Angle(Rational(0), sol.kernel_basis[kernel_index][j]);
    sol.upsilon = uchi + MultiplierSystem(gens, std::move(extra));
    if (!satisfies(sol.upsilon, cs))
        throw std::logic_error("kernel vector does not preserve the constraints");
    return sol;
}

namespace {

std::size_t s_slot(const GenSet& gens)
{
    const auto& fs = gens.free_generators();
    for (std::size_t j = 0; j < fs.size(); ++j)
        if (gens.generators()[fs[j]].label == "S")
            return j;
    throw std::logic_error("S is not a free generator");
}

} // namespace

SixthRootReport sixth_root_check(const GenSet& gens)
{
    SixthRootReport rep;
    rep.p = gens.p();
    rep.image = gens.abelianize(gens.decompose(Mat2(1, 0, -gens.p(), 1)));
    const std::size_t js = s_slot(gens);
    rep.free_proportional_to_S = true;
    for (std::size_t j = 0; j < rep.image.free.size(); ++j)
        if (j != js && rep.image.free[j] != 0)
            rep.free_proportional_to_S = false;
    rep.multiple_of_S = rep.image.free[js];
    bool has2 = false, has3 = false;
    for (int x : rep.image.tor2)
        has2 = has2 || x != 0;
    for (int x : rep.image.tor3)
        has3 = has3 || x != 0;
    rep.torsion_zero = !has2 && !has3;
    rep.torsion_order = (has2 ? 2 : 1) * (has3 ? 3 : 1);
    return rep;
}

BInvarianceWitness b_invariance(const GenSet& gens, std::int64_t a, std::int64_t q, const Integer& B1,
                                const Integer& B2)
{
    const std::int64_t p = gens.p();
    BInvarianceWitness w{twist_matrix(p, a, q, B1), twist_matrix(p, a, q, B2), {}, 0, 0, false};
    w.difference = gens.abelianize(gens.decompose(w.m2.matrix)) - gens.abelianize(gens.decompose(w.m1.matrix));
    const ExpVector x = gens.abelianize(gens.decompose(Mat2(1, 0, -p, 1)));
    const std::size_t js = s_slot(gens);
    for (int beta = 0; beta < 6; ++beta) {
        ExpVector rest = w.difference - x.scaled(beta);
        const Integer alpha = rest.free[js];
        rest.free[js] = 0;
        if (rest.is_zero()) {
            w.alpha = alpha;
            w.beta = beta;
            w.ok = true;
            return w;
        }
    }
    return w;
}

} // namespace weilgap
