#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "weilgap/acceptance.hpp"

namespace weilgap::cli {

namespace {

using Handler = Outcome (*)(const json&);

bool has(const json& p, const char* key)
{
    return p.contains(key) && !p[key].is_null();
}

std::int64_t get_int(const json& p, const char* key)
{
    if (!has(p, key))
        throw UsageError(std::string("missing parameter --") + key);
    const json& v = p[key];
    if (v.is_number_integer())
        return v.get<std::int64_t>();
    if (v.is_string()) {
        try {
            std::size_t pos = 0;
            const long long x = std::stoll(v.get<std::string>(), &pos);
            if (pos == v.get<std::string>().size())
                return x;
        } catch (const std::exception&) {
        }
    }
    throw UsageError(std::string("parameter --") + key + " must be an integer, got " + v.dump());
}

std::int64_t get_int(const json& p, const char* key, std::int64_t fallback)
{
    return has(p, key) ? get_int(p, key) : fallback;
}

double get_double(const json& p, const char* key, double fallback)
{
    if (!has(p, key))
        return fallback;
    const json& v = p[key];
    if (v.is_number())
        return v.get<double>();
    try {
        return std::stod(v.get<std::string>());
    } catch (const std::exception&) {
        throw UsageError(std::string("parameter --") + key + " must be a number, got " + v.dump());
    }
}

std::string get_string(const json& p, const char* key, const std::string& fallback = "")
{
    if (!has(p, key))
        return fallback;
    return p[key].is_string() ? p[key].get<std::string>() : p[key].dump();
}

std::string require_string(const json& p, const char* key)
{
    if (!has(p, key))
        throw UsageError(std::string("missing parameter --") + key);
    return get_string(p, key);
}

std::int64_t prime_param(const json& p, const char* key = "p")
{
    const std::int64_t v = get_int(p, key);
    if (!is_prime(v))
        throw UsageError(std::to_string(v) + " is not prime");
    return v;
}

std::int64_t level_param(const json& p)
{
    const std::int64_t v = prime_param(p);
    if (v <= 3)
        throw UsageError("level " + std::to_string(v) + " must be a prime greater than 3");
    return v;
}

void require_file(const std::string& path)
{
    if (!std::filesystem::exists(path))
        throw FileError("missing file: " + path);
}

json read_json_file(const std::string& path)
{
    require_file(path);
    std::ifstream in(path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw FileError("malformed JSON in " + path + ": " + e.what());
    }
}

CoeffSeries coeffs_param(const json& p, const char* key)
{
    const std::string path = require_string(p, key);
    require_file(path);
    try {
        return read_coeffs_file(path);
    } catch (const std::runtime_error& e) {
        throw FileError(e.what());
    }
}

DirichletChar chi_param(const json& p, std::int64_t level)
{
    const std::string c = get_string(p, "chi", "trivial");
    if (c == "trivial")
        return DirichletChar::trivial(level);
    if (c == "quadratic")
        return DirichletChar::quadratic(level);
    try {
        std::size_t pos = 0;
        const long long t = std::stoll(c, &pos);
        if (pos == c.size())
            return DirichletChar(level, t);
    } catch (const std::exception&) {
    }
    throw UsageError("character '" + c + "' is not trivial, quadratic or an integer exponent");
}

ModCharacter psi_param(const json& p, std::int64_t q)
{
    const std::string c = get_string(p, "psi", "quadratic");
    if (c == "trivial")
        return ModCharacter::trivial(q);
    if (c == "quadratic") {
        if (!is_prime(q) || q == 2)
            throw UsageError("quadratic character needs an odd prime modulus, got " + std::to_string(q));
        return ModCharacter::quadratic(q);
    }
    const auto prim = primitive_characters(q);
    std::size_t idx = 0;
    try {
        idx = std::stoul(c);
    } catch (const std::exception&) {
        throw UsageError("character '" + c + "' is not trivial, quadratic or an index");
    }
    if (idx >= prim.size())
        throw UsageError("modulus " + std::to_string(q) + " has " + std::to_string(prim.size())
                         + " primitive characters; index " + c + " is out of range");
    return prim[idx];
}

std::vector<cplx> s_grid_param(const json& p, int k, double sigma)
{
    if (!has(p, "s"))
        return default_s_grid(k, sigma);
    std::vector<cplx> out;
    const json& v = p["s"];
    auto one = [](const json& e) {
        try {
            return parse_complex(e.is_string() ? e.get<std::string>() : e.dump());
        } catch (const std::invalid_argument& ex) {
            throw UsageError(ex.what());
        }
    };
    if (v.is_array())
        for (const auto& e : v)
            out.push_back(one(e));
    else
        out.push_back(one(v));
    return out;
}

Tolerance tol_param(const json& p, double fallback = 1e-6)
{
    const double t = get_double(p, "tol", fallback);
    if (!(t > 0))
        throw UsageError("tolerance must be positive");
    return Tolerance{t, 10};
}

PhaseFn phase_param(const json& p, std::int64_t level)
{
    if (has(p, "multiplier")) {
        const auto gens = build_presentation(level);
        return multiplier_phase(multiplier_from_json(read_json_file(get_string(p, "multiplier")), gens));
    }
    return character_phase(chi_param(p, level));
}

// ---- commands ----

Outcome cmd_gens(const json& p)
{
    return {generators_to_json(*build_presentation(level_param(p))), true};
}

Outcome cmd_word(const json& p)
{
    const std::int64_t level = level_param(p);
    Mat2 m;
    try {
        m = parse_matrix(require_string(p, "matrix"));
    } catch (const UsageError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const auto gens = build_presentation(level);
    if (!gens->contains(m))
        throw UsageError("matrix " + m.to_string() + " is not in Gamma0(" + std::to_string(level) + ")");
    const GammaWord w = gens->decompose(m);
    const STWord st = decompose_sl2(m);
    json r;
    r["matrix"] = mat_to_json(m);
    r["word"] = word_to_json(w, *gens);
    r["sign"] = w.sign;
    r["st_word"] = word_to_json(st);
    r["st_sign"] = st.sign;
    const Mat2 back = gens->evaluate(w);
    r["verified"] = back == m || back == -m;
    return {r, r["verified"].get<bool>()};
}

Outcome cmd_Q(const json& p)
{
    const std::int64_t level = level_param(p);
    return {{{"p", level}, {"Q", compute_Q(level)}}, true};
}

Outcome cmd_multiplier(const json& p)
{
    const std::int64_t level = level_param(p);
    const std::int64_t qmax = get_int(p, "qmax");
    if (qmax < 0)
        throw UsageError("--qmax must be nonnegative");
    const auto gens = build_presentation(level);
    const DirichletChar chi = chi_param(p, level);
    const auto cs = pretend_constraints(*gens, chi, qmax);
    const std::size_t kernel_index = static_cast<std::size_t>(get_int(p, "kernel_index", 0));
    const auto probe = solve_pretend(cs, chi, gens);
    if (probe.kernel_dim > 0 && kernel_index >= probe.kernel_dim)
        throw UsageError("kernel index " + std::to_string(kernel_index) + " out of range; dimension is "
                         + std::to_string(probe.kernel_dim));
    const auto sol = kernel_index == 0 ? probe : solve_pretend(cs, chi, gens, kernel_index);
    const json ms = multiplier_to_json(sol.upsilon);
    const std::string out = get_string(p, "out");
    if (!out.empty()) {
        std::ofstream f(out);
        if (!f)
            throw FileError("cannot write " + out);
        f << ms.dump(2) << '\n';
    }
    const bool sat = satisfies(sol.upsilon, cs);
    json r;
    r["p"] = level;
    r["q_max"] = qmax;
    r["chi"] = chi.to_string();
    r["rows"] = cs.rows.size();
    r["rank"] = sol.rank;
    r["kernel_dim"] = sol.kernel_dim;
    r["kernel_index"] = sol.kernel_index;
    r["count_predicts_five"] = sol.count_predicts_five;
    r["boundary_flag"] = sol.boundary_flag;
    r["satisfies_constraints"] = sat;
    r["infinite_order"] = !sol.upsilon.finite_order();
    r["multiplier"] = ms;
    return {r, sat};
}

json exp_vector_to_json(const ExpVector& v)
{
    json fr = json::array();
    for (const auto& x : v.free)
        fr.push_back(integer_to_json(x));
    return {{"free", fr}, {"tor2", v.tor2}, {"tor3", v.tor3}};
}

Outcome cmd_sixth_root(const json& p)
{
    const std::int64_t level = level_param(p);
    const SixthRootReport rep = sixth_root_check(*build_presentation(level));
    json r;
    r["p"] = level;
    r["image"] = exp_vector_to_json(rep.image);
    r["free_proportional_to_S"] = rep.free_proportional_to_S;
    r["multiple_of_S"] = integer_to_json(rep.multiple_of_S);
    r["torsion_zero"] = rep.torsion_zero;
    r["torsion_order"] = rep.torsion_order;
    r["torsion_zero_iff_11_mod_12"] = rep.torsion_zero == (level % 12 == 11);
    return {r, rep.free_proportional_to_S && r["torsion_zero_iff_11_mod_12"].get<bool>()};
}

Outcome cmd_series(const json& p)
{
    const std::string kind = require_string(p, "kind");
    const std::int64_t M = get_int(p, "M");
    if (M < 1)
        throw UsageError("--M must be positive");
    CoeffSeries f;
    if (kind == "delta") {
        f = delta_coeffs(static_cast<std::size_t>(M));
    } else if (kind == "delta-delta-p") {
        f = delta_delta_p(prime_param(p), static_cast<std::size_t>(M)).f;
    } else if (kind == "eis-mult") {
        const std::int64_t level = level_param(p);
        const int w = static_cast<int>(get_int(p, "weight", 4));
        const std::int64_t cmax = get_int(p, "cmax", 100 * level);
        std::optional<MultiplierSystem> u;
        if (has(p, "multiplier"))
            u = multiplier_from_json(read_json_file(get_string(p, "multiplier")), build_presentation(level));
        f = eisenstein_multiplier_coeffs(level, u, w, static_cast<std::size_t>(M), cmax);
    } else {
        throw UsageError("unknown series kind '" + kind + "' (delta, delta-delta-p, eis-mult)");
    }
    std::ostringstream lines;
    write_coeffs(lines, f);
    Outcome o;
    const std::string out = get_string(p, "out");
    if (out.empty()) {
        o.raw = lines.str();
    } else {
        std::ofstream file(out);
        if (!file)
            throw FileError("cannot write " + out);
        file << lines.str();
    }
    o.result = {{"label", f.label}, {"weight", f.weight}, {"level", f.level}, {"M", f.M()},
                {"sigma", f.sigma}, {"error_bound", f.error_bound()}, {"out", out}};
    return o;
}

struct FEInputs {
    std::int64_t p;
    int k;
    CoeffSeries f, g;
};

FEInputs fe_inputs(const json& p)
{
    FEInputs in;
    in.p = get_int(p, "p");
    if (in.p != 1 && !is_prime(in.p))
        throw UsageError(std::to_string(in.p) + " is not prime");
    in.k = static_cast<int>(get_int(p, "k"));
    in.f = coeffs_param(p, "coeffs");
    in.g = has(p, "coeffs_g") ? coeffs_param(p, "coeffs_g") : in.f;
    if (in.f.weight != in.k || in.g.weight != in.k)
        throw UsageError("coefficient files have weight " + std::to_string(in.f.weight) + "/"
                         + std::to_string(in.g.weight) + ", expected " + std::to_string(in.k));
    return in;
}

FEStatement fe_statement(const json& p, const FEInputs& in)
{
    const std::int64_t q = get_int(p, "q", 1);
    const std::int64_t a = get_int(p, "a", q == 1 ? 0 : 1);
    if (q < 1 || gcd(a, q) != 1)
        throw UsageError("twist " + std::to_string(a) + "/" + std::to_string(q) + " is not a reduced fraction");
    if (gcd(q, in.p) != 1)
        throw UsageError("denominator " + std::to_string(q) + " shares a factor with the level");
    const PhaseFn phase = in.p == 1 ? trivial_phase() : phase_param(p, in.p);
    return FEStatement::for_twist(in.p, in.k, a, q, phase(a, q));
}

Outcome cmd_lambda(const json& p)
{
    const FEInputs in = fe_inputs(p);
    const FEStatement fe = fe_statement(p, in);
    const cplx s = s_grid_param(p, in.k, in.f.sigma).front();
    const double y0 = get_double(p, "y0", 0);
    const LambdaValue v = lambda_additive(in.f, in.g, fe, s, y0);
    json r = lambda_to_json(v);
    r["B"] = integer_to_json(fe.B);
    r["phase"] = fe.phase.to_string();
    return {r, std::isfinite(v.error)};
}

Outcome cmd_check_fe(const json& p)
{
    const FEInputs in = fe_inputs(p);
    const FEStatement fe = fe_statement(p, in);
    const FEReport rep = check_fe_additive(in.f, in.g, fe, s_grid_param(p, in.k, in.f.sigma), tol_param(p));
    json r = fe_report_to_json(rep);
    r["a"] = fe.a;
    r["q"] = fe.q;
    r["B"] = integer_to_json(fe.B);
    r["D"] = integer_to_json(fe.D);
    r["phase"] = fe.phase.to_string();
    return {r, rep.pass};
}

Outcome cmd_check_fe_mult(const json& p)
{
    const FEInputs in = fe_inputs(p);
    const std::int64_t q = get_int(p, "q");
    if (q < 1 || gcd(q, in.p) != 1)
        throw UsageError("modulus " + std::to_string(q) + " must be positive and coprime to the level");
    const ModCharacter psi = psi_param(p, q);
    if (!psi.is_primitive())
        throw UsageError("character " + psi.to_string() + " mod " + std::to_string(q) + " is not primitive");
    MultiplicativeContext ctx{in.p, in.k, trivial_phase()};
    Angle chi_q;
    if (in.p != 1) {
        ctx.phase = phase_param(p, in.p);
        chi_q = has(p, "multiplier") ? Angle() : Angle(chi_param(p, in.p).angle(q));
    }
    const FEReport rep =
        check_fe_multiplicative(in.f, in.g, ctx, chi_q, psi, s_grid_param(p, in.k, in.f.sigma), tol_param(p));
    json r = fe_report_to_json(rep);
    r["q"] = q;
    r["psi"] = psi.to_string();
    return {r, rep.pass};
}

Outcome cmd_certify(const json& p)
{
    const FEInputs in = fe_inputs(p);
    if (in.p <= 3)
        throw UsageError("level " + std::to_string(in.p) + " must be a prime greater than 3");
    const Certificate c = certify_modularity(in.f, in.g, in.p, in.k, chi_param(p, in.p), tol_param(p, 1e-7).tol);
    return {certificate_to_json(c), c.verdict};
}

Outcome cmd_reproduce_all(const json& p)
{
    const auto seed = static_cast<std::uint64_t>(get_int(p, "seed", 20240601));
    json arr = json::array();
    bool all = true;
    for (const auto& r : run_all(seed)) {
        arr.push_back(criterion_to_json(r));
        all = all && r.pass;
    }
    json out = {{"seed", seed}, {"criteria", arr}, {"all_pass", all}};
    if (p.value("experiment", false))
        out["experiment"] = infinite_order_experiment();
    return {out, all};
}

const std::map<std::string, Handler>& handlers()
{
    static const std::map<std::string, Handler> table{
        {"gens", cmd_gens},         {"word", cmd_word},
        {"Q", cmd_Q},               {"multiplier", cmd_multiplier},
        {"sixth-root", cmd_sixth_root}, {"series", cmd_series},
        {"lambda", cmd_lambda},     {"check-fe", cmd_check_fe},
        {"check-fe-mult", cmd_check_fe_mult}, {"certify", cmd_certify},
        {"reproduce-all", cmd_reproduce_all},
    };
    return table;
}

void render_into(std::ostringstream& os, const json& v, const std::string& indent)
{
    for (const auto& [key, val] : v.items()) {
        if (val.is_object()) {
            os << indent << key << ":\n";
            render_into(os, val, indent + "  ");
        } else if (val.is_array() && !val.empty() && val[0].is_object()) {
            os << indent << key << ":\n";
            for (const auto& row : val) {
                os << indent << "  -";
                for (const auto& [k2, v2] : row.items())
                    os << ' ' << k2 << '=' << (v2.is_string() ? v2.get<std::string>() : v2.dump());
                os << '\n';
            }
        } else {
            os << indent << key << ": " << (val.is_string() ? val.get<std::string>() : val.dump()) << '\n';
        }
    }
}

} // namespace

const std::vector<std::string>& command_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& [k, v] : handlers())
            n.push_back(k);
        return n;
    }();
    return names;
}

Outcome run(const ExperimentConfig& cfg)
{
    const auto it = handlers().find(cfg.command);
    if (it == handlers().end())
        throw UsageError("unknown command '" + cfg.command + "'");
    try {
        return it->second(cfg.params);
    } catch (const UsageError&) {
        throw;
    } catch (const FileError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    } catch (const std::domain_error& e) {
        throw UsageError(e.what());
    } catch (const std::out_of_range& e) {
        throw UsageError(e.what());
    }
}

std::string render(const json& doc)
{
    std::ostringstream os;
    render_into(os, doc, "");
    return os.str();
}

} // namespace weilgap::cli
