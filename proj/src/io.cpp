#include "weilgap/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace weilgap {

json integer_to_json(const Integer& x)
{
    if (x.fits_slong_p())
        return static_cast<std::int64_t>(x.get_si());
    return x.get_str();
}

Integer integer_from_json(const json& j)
{
    if (j.is_number_integer())
        return Integer(static_cast<long>(j.get<std::int64_t>()));
    if (j.is_string()) {
        Integer x;
        if (x.set_str(j.get<std::string>(), 10) != 0)
            throw std::invalid_argument("not an integer: " + j.get<std::string>());
        return x;
    }
    throw std::invalid_argument("expected an integer, got " + j.dump());
}

json mat_to_json(const Mat2& m)
{
    return json::array({integer_to_json(m.a()), integer_to_json(m.b()), integer_to_json(m.c()), integer_to_json(m.d())});
}

Mat2 mat_from_json(const json& j)
{
    if (!j.is_array() || j.size() != 4)
        throw std::invalid_argument("matrix must be an array [a,b,c,d]");
    const Integer a = integer_from_json(j[0]), b = integer_from_json(j[1]), c = integer_from_json(j[2]),
                  d = integer_from_json(j[3]);
    if (a * d - b * c != 1)
        throw std::invalid_argument("matrix " + j.dump() + " does not have determinant 1");
    return Mat2(a, b, c, d);
}

Mat2 parse_matrix(const std::string& text)
{
    json arr = json::array();
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        arr.push_back(item);
    if (arr.size() != 4)
        throw std::invalid_argument("matrix must be given as a,b,c,d");
    return mat_from_json(arr);
}

json word_to_json(const STWord& w)
{
    json arr = json::array();
    for (const auto& t : w.tokens)
        arr.push_back({{"gen", t.letter == STToken::Letter::S ? "S" : "T"}, {"exp", integer_to_json(t.exp)}});
    return arr;
}

json word_to_json(const GammaWord& w, const GenSet& gens)
{
    json arr = json::array();
    for (const auto& t : w.tokens)
        arr.push_back({{"gen", gens.generators()[t.gen].label}, {"exp", integer_to_json(t.exp)}});
    return arr;
}

json generators_to_json(const GenSet& gens)
{
    const Signature& sig = gens.signature();
    json out;
    out["p"] = gens.p();
    out["l"] = sig.l;
    out["a"] = sig.a;
    out["b"] = sig.b;
    out["Q"] = gens.q_set();
    json arr = json::array();
    for (const auto& g : gens.generators())
        arr.push_back({{"label", g.label}, {"matrix", mat_to_json(g.matrix)}, {"order", g.order}});
    out["generators"] = arr;
    return out;
}

json multiplier_to_json(const MultiplierSystem& u)
{
    json out;
    out["p"] = u.p();
    json arr = json::array();
    const auto& gens = u.gens().generators();
    for (std::size_t i = 0; i < gens.size(); ++i) {
        const Angle a = u.angles()[i].reduced();
        arr.push_back({{"label", gens[i].label}, {"rational", rational_string(a.r)}, {"irrational", rational_string(a.s)}});
    }
    out["angles"] = arr;
    return out;
}

MultiplierSystem multiplier_from_json(const json& j, std::shared_ptr<const GenSet> gens)
{
    if (!j.contains("p") || !j.contains("angles"))
        throw std::invalid_argument("multiplier JSON needs fields p and angles");
    if (j["p"].get<std::int64_t>() != gens->p())
        throw std::invalid_argument("multiplier level " + j["p"].dump() + " differs from " + std::to_string(gens->p()));
    std::vector<Angle> angles(gens->generators().size());
    std::vector<bool> seen(angles.size(), false);
    for (const auto& e : j["angles"]) {
        const std::size_t i = gens->index_of(e.at("label").get<std::string>());
        angles[i] = Angle(parse_rational(e.at("rational").get<std::string>()),
                          parse_rational(e.value("irrational", std::string("0"))));
        seen[i] = true;
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (!seen[i])
            throw std::invalid_argument("multiplier JSON misses generator " + gens->generators()[i].label);
    return MultiplierSystem(std::move(gens), std::move(angles));
}

void write_coeffs(std::ostream& os, const CoeffSeries& f)
{
    json head;
    head["label"] = f.label;
    head["weight"] = f.weight;
    head["level"] = f.level;
    head["sigma"] = f.sigma;
    head["M"] = f.M();
    head["error_bound"] = f.error_bound();
    os << head.dump() << '\n';
    for (std::size_t m = 0; m <= f.M(); ++m) {
        json row;
        row["m"] = m;
        if (f.exact) {
            row["re"] = (*f.exact)[m].get_str();
            row["im"] = "0";
        } else {
            row["re"] = f.a[m].real();
            row["im"] = f.a[m].imag();
            if (!f.err.empty() && f.err[m] != 0)
                row["err"] = f.err[m];
        }
        os << row.dump() << '\n';
    }
}

namespace {

bool integer_string(const json& v)
{
    if (!v.is_string())
        return false;
    Integer x;
    return x.set_str(v.get<std::string>(), 10) == 0;
}

double as_double(const json& v)
{
    if (v.is_number())
        return v.get<double>();
    if (v.is_string())
        return std::stod(v.get<std::string>());
    throw std::invalid_argument("expected a number");
}

} // namespace

CoeffSeries read_coeffs(std::istream& is)
{
    std::string line;
    std::size_t lineno = 0;
    json head;
    std::vector<json> rows;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty())
            continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw std::runtime_error("coefficient file line " + std::to_string(lineno) + ": " + e.what());
        }
        if (head.is_null()) {
            for (const char* key : {"label", "weight", "level", "sigma", "M"})
                if (!j.contains(key))
                    throw std::runtime_error(std::string("coefficient header lacks field ") + key);
            head = std::move(j);
        } else {
            if (!j.contains("m") || !j.contains("re") || !j.contains("im"))
                throw std::runtime_error("coefficient file line " + std::to_string(lineno) + " lacks m/re/im");
            if (j["m"].get<std::size_t>() != rows.size())
                throw std::runtime_error("coefficient file line " + std::to_string(lineno) + " out of order");
            rows.push_back(std::move(j));
        }
    }
    if (head.is_null())
        throw std::runtime_error("empty coefficient file");
    if (rows.size() != head["M"].get<std::size_t>() + 1)
        throw std::runtime_error("coefficient file has " + std::to_string(rows.size()) + " rows, header says M = "
                                 + head["M"].dump());
    const std::string label = head["label"].get<std::string>();
    const int weight = head["weight"].get<int>();
    const std::int64_t level = head["level"].get<std::int64_t>();
    const double sigma = head["sigma"].get<double>();

    bool exact = true;
    for (const auto& r : rows)
        exact = exact && integer_string(r["re"]) && (r["im"] == "0" || r["im"] == 0) && !r.contains("err");
    if (exact) {
        std::vector<Integer> c;
        for (const auto& r : rows)
            c.emplace_back(r["re"].get<std::string>());
        return CoeffSeries::from_integers(label, weight, level, sigma, std::move(c));
    }
    std::vector<cplx> a;
    std::vector<double> err;
    for (const auto& r : rows) {
        a.emplace_back(as_double(r["re"]), as_double(r["im"]));
        err.push_back(r.contains("err") ? r["err"].get<double>() : 0.0);
    }
    return CoeffSeries::from_complex(label, weight, level, sigma, std::move(a), std::move(err));
}

CoeffSeries read_coeffs_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open coefficient file " + path);
    return read_coeffs(in);
}

json cplx_to_json(cplx z)
{
    return json::array({z.real(), z.imag()});
}

cplx parse_complex(const std::string& text)
{
    const auto comma = text.find(',');
    try {
        if (comma == std::string::npos)
            return {std::stod(text), 0.0};
        return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw std::invalid_argument("cannot parse complex number '" + text + "'");
    }
}

json certificate_to_json(const Certificate& c)
{
    json out;
    out["p"] = c.p;
    out["k"] = c.k;
    out["chi"] = c.chi;
    out["Q"] = c.Q;
    json arr = json::array();
    for (const auto& g : c.per_generator)
        arr.push_back({{"q", g.q}, {"label", g.label}, {"residual", g.residual}, {"error", g.error}, {"pass", g.pass}});
    out["per_generator"] = arr;
    out["verdict"] = c.verdict ? "pass" : "fail";
    out["conclusion"] = c.conclusion;
    return out;
}

json fe_report_to_json(const FEReport& r)
{
    json out;
    json arr = json::array();
    for (const auto& s : r.samples)
        arr.push_back({{"s", cplx_to_json(s.s)},
                       {"lhs", cplx_to_json(s.lhs)},
                       {"rhs", cplx_to_json(s.rhs)},
                       {"residual", s.residual},
                       {"error", s.error},
                       {"y0_residual", s.y0_residual},
                       {"y0_error", s.y0_error},
                       {"pass", s.pass}});
    out["samples"] = arr;
    out["pass"] = r.pass;
    return out;
}

json lambda_to_json(const LambdaValue& v)
{
    return {{"s", cplx_to_json(v.s)}, {"a", v.a},       {"q", v.q}, {"y0", v.y0},
            {"M", v.M},               {"value", cplx_to_json(v.value)}, {"error", v.error}};
}

json config_to_json(const ExperimentConfig& c)
{
    return {{"command", c.command}, {"params", c.params}, {"output", c.output}, {"seed", c.seed}};
}

ExperimentConfig config_from_json(const json& j)
{
    ExperimentConfig c;
    c.command = j.at("command").get<std::string>();
    c.params = j.value("params", json::object());
    c.output = j.value("output", std::string());
    c.seed = j.value("seed", std::uint64_t{0});
    return c;
}

} // namespace weilgap
