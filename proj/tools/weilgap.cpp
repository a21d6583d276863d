#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

using weilgap::ExperimentConfig;
using weilgap::json;
namespace cli = weilgap::cli;

enum class Kind { Int, Real, Text, List, Flag };

struct Opt {
    std::string name;
    Kind kind;
    std::string help;
    bool required = false;
};

const std::map<std::string, std::pair<std::string, std::vector<Opt>>>& command_table()
{
    const Opt p{"p", Kind::Int, "prime level", true};
    const Opt k{"k", Kind::Int, "weight", true};
    const Opt chi{"chi", Kind::Text, "character: trivial, quadratic or exponent t"};
    const Opt coeffs{"coeffs", Kind::Text, "coefficient file of f", true};
    const Opt coeffs_g{"coeffs-g", Kind::Text, "coefficient file of g (default: --coeffs)"};
    const Opt mult{"multiplier", Kind::Text, "multiplier system JSON"};
    const Opt s{"s", Kind::List, "sample point re,im (repeatable)"};
    const Opt tol{"tol", Kind::Real, "tolerance"};
    const Opt q{"q", Kind::Int, "twist modulus"};
    static const std::map<std::string, std::pair<std::string, std::vector<Opt>>> table{
        {"gens", {"Rademacher generators of Gamma0(p)", {p}}},
        {"word", {"decompose a matrix of Gamma0(p)", {p, {"matrix", Kind::Text, "a,b,c,d", true}}}},
        {"Q", {"surviving denominators Q(p)", {p}}},
        {"multiplier",
         {"solve for a character-imitating multiplier system",
          {p, {"qmax", Kind::Int, "largest twist modulus", true}, chi,
           {"kernel-index", Kind::Int, "kernel basis vector to use"}, {"out", Kind::Text, "write ms.json here"}}}},
        {"sixth-root", {"abelianized image of T S^p T^-1", {p}}},
        {"series",
         {"Fourier coefficients",
          {{"kind", Kind::Text, "delta, delta-delta-p or eis-mult", true},
           {"p", Kind::Int, "level"},
           {"M", Kind::Int, "number of coefficients", true},
           {"weight", Kind::Int, "Eisenstein weight (default 4)"},
           {"cmax", Kind::Int, "Kloosterman cutoff (default 100 p)"},
           mult,
           {"out", Kind::Text, "output file (default stdout)"}}}},
        {"lambda",
         {"completed twisted L-value",
          {p, k, chi, q, {"a", Kind::Int, "twist numerator"}, s, coeffs, coeffs_g, mult,
           {"y0", Kind::Real, "split height (default balance point)"}}}},
        {"check-fe", {"additive twisted functional equation", {p, k, chi, q, {"a", Kind::Int, "twist numerator"}, s,
                                                                coeffs, coeffs_g, mult, tol}}},
        {"check-fe-mult",
         {"multiplicative twisted functional equation",
          {p, k, chi, {"q", Kind::Int, "modulus of psi", true},
           {"psi", Kind::Text, "quadratic, trivial or primitive index"}, s, coeffs, coeffs_g, mult, tol}}},
        {"certify", {"modularity certificate over the generators", {p, k, chi, coeffs, coeffs_g, tol}}},
        {"reproduce-all",
         {"run every acceptance criterion",
          {{"seed", Kind::Int, "seed (default 20240601)"}, {"experiment", Kind::Flag, "add the p=29 experiment"}}}},
    };
    return table;
}

std::string key_of(const std::string& flag)
{
    std::string k = flag;
    for (char& c : k)
        if (c == '-')
            c = '_';
    return k;
}

json convert(const Opt& o, const std::string& text)
{
    if (o.kind == Kind::Int) {
        try {
            std::size_t pos = 0;
            const long long v = std::stoll(text, &pos);
            if (pos == text.size())
                return v;
        } catch (const std::exception&) {
        }
        throw cli::UsageError("--" + o.name + " expects an integer, got '" + text + "'");
    }
    if (o.kind == Kind::Real) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(text, &pos);
            if (pos == text.size())
                return v;
        } catch (const std::exception&) {
        }
        throw cli::UsageError("--" + o.name + " expects a number, got '" + text + "'");
    }
    return text;
}

std::string timestamp()
{
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::ostringstream os;
    os << std::put_time(std::gmtime(&t), "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

void check_threads_env()
{
    const char* v = std::getenv("WEILGAP_THREADS");
    if (!v)
        return;
    const std::string s(v);
    const bool ok = !s.empty() && s.find_first_not_of("0123456789") == std::string::npos && std::stoll(s) > 0;
    if (!ok)
        throw cli::UsageError("WEILGAP_THREADS must be a positive integer, got '" + s + "'");
}

int execute(const ExperimentConfig& cfg, bool as_json)
{
    const cli::Outcome o = cli::run(cfg);
    if (!o.raw.empty()) {
        std::cout << o.raw;
        return o.pass ? 0 : 1;
    }
    json doc;
    doc["config"] = weilgap::config_to_json(cfg);
    doc["result"] = o.result;
    doc["pass"] = o.pass;
    doc["timestamp"] = timestamp();
    const std::string text = as_json ? doc.dump(2) + "\n" : cli::render(doc);
    if (!cfg.output.empty()) {
        std::ofstream f(cfg.output);
        if (!f)
            throw cli::FileError("cannot write " + cfg.output);
        f << doc.dump(2) << '\n';
    }
    std::cout << text;
    return o.pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"weilgap: presentations of Gamma0(p), multiplier systems and twisted functional equations"};
    app.require_subcommand(1);
    app.fallthrough();
    bool as_json = false;
    std::string output;
    app.add_flag("--json", as_json, "print the JSON document");
    app.add_option("--output", output, "also write the JSON document to this file");

    struct Bound {
        const Opt* opt;
        std::string value;
        std::vector<std::string> values;
        bool flag = false;
        CLI::Option* handle = nullptr;
    };
    std::map<std::string, std::vector<Bound>> bound;
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, entry] : command_table()) {
        CLI::App* sub = app.add_subcommand(name, entry.first);
        auto& vec = bound[name];
        vec.reserve(entry.second.size());
        for (const Opt& o : entry.second) {
            vec.push_back(Bound{&o});
            Bound& b = vec.back();
            const std::string flag = "--" + o.name;
            if (o.kind == Kind::Flag)
                b.handle = sub->add_flag(flag, b.flag, o.help);
            else if (o.kind == Kind::List)
                b.handle = sub->add_option(flag, b.values, o.help);
            else
                b.handle = sub->add_option(flag, b.value, o.help);
            if (o.required)
                b.handle->required();
        }
        subs[name] = sub;
    }
    std::string config_path;
    CLI::App* run_sub = app.add_subcommand("run", "run a saved ExperimentConfig");
    run_sub->add_option("--config", config_path, "config JSON")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        check_threads_env();
        ExperimentConfig cfg;
        if (run_sub->parsed()) {
            std::ifstream in(config_path);
            if (!in)
                throw cli::FileError("missing file: " + config_path);
            try {
                cfg = weilgap::config_from_json(json::parse(in));
            } catch (const json::exception& e) {
                throw cli::UsageError(std::string("malformed config: ") + e.what());
            }
            if (!output.empty())
                cfg.output = output;
        } else {
            for (const auto& [name, sub] : subs) {
                if (!sub->parsed())
                    continue;
                cfg.command = name;
                for (const Bound& b : bound[name]) {
                    if (b.opt->kind == Kind::Flag) {
                        if (b.flag)
                            cfg.params[key_of(b.opt->name)] = true;
                    } else if (b.handle->count() > 0) {
                        if (b.opt->kind == Kind::List)
                            cfg.params[key_of(b.opt->name)] = b.values;
                        else
                            cfg.params[key_of(b.opt->name)] = convert(*b.opt, b.value);
                    }
                }
            }
            cfg.output = output;
            if (cfg.params.contains("seed"))
                cfg.seed = cfg.params["seed"].get<std::uint64_t>();
        }
        return execute(cfg, as_json);
    } catch (const cli::UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const cli::FileError& e) {
        std::cerr << "file error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << '\n';
        return 4;
    }
}
