#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int status = -1;
    std::string out;
};

// Runs the CLI with stderr folded into stdout.
Run weilgap(const std::string& args)
{
    const std::string cmd = std::string(WEILGAP_BIN) + " " + args + " 2>&1";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    while (std::fgets(buf.data(), buf.size(), pipe))
        r.out += buf.data();
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

json document(const Run& r)
{
    return json::parse(r.out);
}

fs::path scratch()
{
    static const fs::path dir = [] {
        const fs::path d = fs::temp_directory_path() / "weilgap_cli_test";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string dd5()
{
    static const std::string path = [] {
        const fs::path p = scratch() / "dd5.json";
        REQUIRE(weilgap("series --kind delta-delta-p --p 5 --M 1500 --out " + p.string()).status == 0);
        return p.string();
    }();
    return path;
}

} // namespace

TEST_CASE("gens reports the signature")
{
    const Run r = weilgap("gens --p 13 --json");
    REQUIRE(r.status == 0);
    const json d = document(r);
    CHECK(d["result"]["l"] == 5);
    CHECK(d["result"]["a"] == 1);
    CHECK(d["result"]["b"] == 1);
    CHECK(d["config"]["command"] == "gens");
    CHECK(d["pass"] == true);
}

TEST_CASE("input errors have distinct diagnostics")
{
    const Run composite = weilgap("gens --p 12");
    CHECK(composite.status == 2);
    CHECK(composite.out.find("12 is not prime") != std::string::npos);

    const Run small = weilgap("Q --p 3");
    CHECK(small.status == 2);

    const Run missing = weilgap("certify --p 5 --k 24 --coeffs /nonexistent/f.json");
    CHECK(missing.status == 3);
    CHECK(missing.out.find("/nonexistent/f.json") != std::string::npos);

    const Run flag = weilgap("gens --prime 13");
    CHECK(flag.status != 0);
    CHECK(flag.status != 2);
    CHECK(flag.status != 3);

    const Run not_int = weilgap("gens --p thirteen");
    CHECK(not_int.status == 2);
}

TEST_CASE("WEILGAP_THREADS is validated")
{
    const std::string bin(WEILGAP_BIN);
    const std::string cmd = "WEILGAP_THREADS=zero " + bin + " gens --p 13 >/dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(raw) == 2);
    const std::string ok = "WEILGAP_THREADS=2 " + bin + " gens --p 13 >/dev/null 2>&1";
    CHECK(WEXITSTATUS(std::system(ok.c_str())) == 0);
}

TEST_CASE("word and Q")
{
    const Run w = weilgap("word --p 13 --matrix 1,0,13,1 --json");
    REQUIRE(w.status == 0);
    CHECK(document(w)["result"]["verified"] == true);
    CHECK(weilgap("word --p 13 --matrix 2,1,1,1").status == 2);

    const Run q = weilgap("Q --p 29 --json");
    REQUIRE(q.status == 0);
    CHECK(document(q)["result"]["Q"] == json::parse("[1,2,3,4,5,12,17]"));
}

TEST_CASE("multiplier writes a loadable system")
{
    const std::string ms = (scratch() / "ms29.json").string();
    const Run r = weilgap("multiplier --p 29 --qmax 1 --out " + ms + " --json");
    REQUIRE(r.status == 0);
    const json d = document(r);
    CHECK(d["result"]["kernel_dim"].get<int>() >= 1);
    CHECK(d["result"]["satisfies_constraints"] == true);
    CHECK(d["result"]["infinite_order"] == true);
    std::ifstream in(ms);
    CHECK(json::parse(in) == d["result"]["multiplier"]);

    CHECK(weilgap("multiplier --p 29 --qmax 1 --kernel-index 99").status == 2);

    const Run eis = weilgap("series --kind eis-mult --p 29 --M 3 --cmax 290 --multiplier " + ms);
    CHECK(eis.status == 0);
    CHECK(eis.out.find("\"eis4_p29\"") != std::string::npos);
}

TEST_CASE("sixth root")
{
    const Run r = weilgap("sixth-root --p 23 --json");
    REQUIRE(r.status == 0);
    CHECK(document(r)["result"]["torsion_zero"] == true);
    const Run r13 = weilgap("sixth-root --p 13 --json");
    REQUIRE(r13.status == 0);
    CHECK(document(r13)["result"]["torsion_zero"] == false);
}

TEST_CASE("series to stdout")
{
    const Run r = weilgap("series --kind delta --M 3");
    REQUIRE(r.status == 0);
    CHECK(r.out.find("{\"m\":2,\"re\":\"-24\",\"im\":\"0\"}") != std::string::npos);
    CHECK(weilgap("series --kind theta --M 3").status == 2);
}

TEST_CASE("certify passes for Delta(z)Delta(5z) and fails after corruption")
{
    const std::string f = dd5();
    const Run r = weilgap("certify --p 5 --k 24 --chi trivial --coeffs " + f + " --coeffs-g " + f + " --json");
    REQUIRE(r.status == 0);
    CHECK(document(r)["result"]["verdict"] == "pass");

    const fs::path bad = scratch() / "bad5.json";
    {
        std::ifstream in(f);
        std::ofstream out(bad);
        std::string line;
        while (std::getline(in, line)) {
            if (line.rfind("{\"m\":6,", 0) == 0)
                line = "{\"m\":6,\"re\":\"2\",\"im\":\"0\"}";
            out << line << '\n';
        }
    }
    const Run b = weilgap("certify --p 5 --k 24 --coeffs " + bad.string() + " --json");
    CHECK(b.status == 1);
    CHECK(document(b)["result"]["verdict"] == "fail");
}

TEST_CASE("twisted functional equations")
{
    const std::string f = dd5();
    const Run add = weilgap("check-fe --p 5 --k 24 --q 3 --a 2 --coeffs " + f + " --json");
    REQUIRE(add.status == 0);
    CHECK(document(add)["result"]["samples"].size() == 4);

    const Run wrong = weilgap("check-fe --p 5 --k 24 --q 3 --a 2 --chi quadratic --coeffs " + f);
    CHECK(wrong.status == 1);

    const Run mult = weilgap("check-fe-mult --p 5 --k 24 --q 3 --psi quadratic --s 12 --s 12.5,1 --coeffs " + f + " --json");
    REQUIRE(mult.status == 0);
    CHECK(document(mult)["result"]["samples"].size() == 2);

    const Run lam = weilgap("lambda --p 5 --k 24 --q 2 --a 1 --s 12,1 --coeffs " + f + " --json");
    REQUIRE(lam.status == 0);
    CHECK(document(lam)["result"]["error"].get<double>() < 1e-10);

    CHECK(weilgap("check-fe --p 5 --k 24 --q 5 --coeffs " + f).status == 2);
    CHECK(weilgap("check-fe --p 5 --k 12 --q 2 --a 1 --coeffs " + f).status == 2);
}

TEST_CASE("output is deterministic apart from the timestamp")
{
    const std::string f = dd5();
    const std::string args = "check-fe --p 5 --k 24 --q 2 --a 1 --coeffs " + f + " --json";
    json a = document(weilgap(args));
    json b = document(weilgap(args));
    a.erase("timestamp");
    b.erase("timestamp");
    CHECK(a.dump() == b.dump());
}

TEST_CASE("run replays a saved config")
{
    const fs::path saved = scratch() / "gens13.json";
    REQUIRE(weilgap("gens --p 13 --output " + saved.string()).status == 0);
    json cfg;
    {
        std::ifstream in(saved);
        cfg = json::parse(in)["config"];
    }
    cfg["output"] = "";
    const fs::path cfg_path = scratch() / "cfg.json";
    std::ofstream(cfg_path) << cfg.dump();
    const Run r = weilgap("run --config " + cfg_path.string() + " --json");
    REQUIRE(r.status == 0);
    const json d = document(r);
    CHECK(d["config"] == cfg);
    CHECK(d["result"]["l"] == 5);

    CHECK(weilgap("run --config " + (scratch() / "absent.json").string()).status == 3);
}
