#include "support.hpp"

#include "lpsvp/io.hpp"
#include "lpsvp/reductions.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace lpsvp;
using nlohmann::json;
using test::q;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run_cli(const std::string& args) {
    std::string cmd = std::string(LPSVP_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe);
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::filesystem::path scratch(const std::string& name, const std::string& content) {
    auto dir = std::filesystem::temp_directory_path() / "lpsvp_cli_tests";
    std::filesystem::create_directories(dir);
    auto p = dir / name;
    std::ofstream(p) << content;
    return p;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("lattice JSON round trip") {
    Basis b({{q("1"), q("1/2")}, {q("0"), q("3")}}, {RowScale{q("2"), 3}, RowScale{}});
    std::vector<Rational> t{q("1/3"), q("-2")};
    json j = write_lattice_json(b, &t, q("5/4"), NormExponent(3.0));
    LatticeFile f = read_lattice_json(json::parse(j.dump()));
    CHECK(f.basis.rows() == b.rows());
    CHECK(f.basis.scales() == b.scales());
    CHECK(*f.target == t);
    CHECK(*f.r == q("5/4"));
    CHECK(f.p->integer == 3);
    LatticeFile dec = read_lattice_json(json::parse(R"({"basis": [["1", 0], [0.5, "2"]], "r": "0.99", "p": 2})"));
    CHECK(*dec.r == q("99/100"));
    CHECK(dec.basis.at(1, 0) == q("1/2"));
    CHECK_THROWS_AS(read_lattice_json(json::parse(R"({"d": 3, "basis": [["1"]]})")), DomainError);
    CHECK_THROWS_AS(read_lattice_json(json::parse(R"({"basis": [["1"]], "target": ["1", "2"]})")), DomainError);
}

TEST_CASE("rational literals") {
    CHECK(parse_rational("0.99") == q("99/100"));
    CHECK(parse_rational("010") == 10);
    CHECK(parse_rational("-0.05") == q("-1/20"));
    CHECK(parse_rational("1.5e-2") == q("3/200"));
    CHECK(parse_rational("007/08") == q("7/8"));
    CHECK_THROWS_AS(parse_rational("1..2"), DomainError);
    CHECK_THROWS_AS(parse_rational("1/0"), DomainError);
}

TEST_CASE("set cover JSON") {
    SetCoverInstance esc = read_setcover_json(json::parse(R"({"universe_size": 3, "sets": [[0, 1], [2]], "d": 2, "eta": "1/2"})"));
    CHECK(esc.sets.size() == 2);
    CHECK(esc.no_bound() == 4);
    CHECK_THROWS_AS(read_setcover_json(json::parse(R"({"universe_size": 2, "sets": [[0, 5]], "d": 1})")), DomainError);
}

}

TEST_SUITE("cli") {

TEST_CASE("constants") {
    Run p0 = run_cli("constants --p0");
    CHECK(p0.code == 0);
    json j = json::parse(p0.out);
    CHECK(j["tool"] == "lpsvp");
    CHECK(j["version"] == "0.1.0");
    CHECK(j["precision_bits"] == 128);
    CHECK(j["config_hash"].get<std::string>().size() == 16);
    CHECK(j["result"]["p0"].get<std::string>().rfind("2.13972134795007", 0) == 0);

    Run sweep = run_cli("constants --sweep 2.2:6:0.05 --out csv");
    CHECK(sweep.code == 0);
    std::istringstream in(sweep.out);
    std::string line;
    std::getline(in, line);
    CHECK(line.rfind("# tool=lpsvp version=0.1.0 precision_bits=128 config_hash=", 0) == 0);
    std::getline(in, line);
    CHECK(line == "p,W_p,tau_star,C_p");
    std::vector<std::pair<double, double>> rows;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string p, w, tau, c;
        std::getline(ls, p, ',');
        std::getline(ls, w, ',');
        std::getline(ls, tau, ',');
        std::getline(ls, c, ',');
        rows.emplace_back(std::stod(p), std::stod(c));
    }
    CHECK(rows.size() == 77);
    double prev = 1e9;
    for (auto [p, c] : rows) {
        if (p < 3) continue;
        CHECK(c < prev);
        CHECK(c > 1);
        prev = c;
    }
    CHECK(prev < 1.16);
    Run c3 = run_cli("constants --p 3 --out csv");
    CHECK(c3.out.find("3,1.58949055624192,2.63905741499326,3.0171778031766") != std::string::npos);
}

TEST_CASE("count") {
    Run r = run_cli("count --p 2 --n 2 --radius 1 --shift 0 --exact --out json");
    CHECK(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["result"]["lo"] == "5");
    CHECK(j["result"]["hi"] == "5");
    auto sf = scratch("shift.json", R"(["1/2", "1/2", "0"])");
    Run v = run_cli("count --p 3 --n 3 --radius 1 --shift-file " + sf.string());
    CHECK(json::parse(v.out)["result"]["lo"] == "4");
}

TEST_CASE("exit codes") {
    CHECK(run_cli("--no-such-flag").code == 64);
    CHECK(run_cli("count --p 2 --n 2 --radius 1 --bogus 3").code == 64);
    CHECK(run_cli("count --p 2 --n 2 --radius -1").code == 2);
    auto bad = scratch("bad.cnf", "p cnf 2 1\n1 x 0\n");
    CHECK(run_cli("reduce sat-to-svp --in " + bad.string()).code == 2);
    auto z5 = scratch("z5.json", R"({"basis": [["1","0"],["0","1"]], "r": "1", "p": "2"})");
    CHECK(run_cli("oracle svp --in " + z5.string() + " --rank-cap 1").code == 2);
}

TEST_CASE("oracle and lattice subcommands") {
    auto z3 = scratch("z3.json",
                      R"({"d":3,"n":3,"basis":[["1","0","0"],["0","1","0"],["0","0","1"]],"target":["1/2","1/2","1/2"],"r":"1","p":"2"})");
    Run yes = run_cli("oracle cvp --in " + z3.string());
    CHECK(yes.code == 0);
    CHECK(json::parse(yes.out)["result"]["decision"] == "YES");
    Run no = run_cli("oracle cvp --in " + z3.string() + " --r 0.86");
    CHECK(json::parse(no.out)["result"]["decision"] == "NO");
    Run l1 = run_cli("lattice lambda1 --in " + z3.string());
    CHECK(json::parse(l1.out)["result"]["lambda1_pow"] == "1");
    Run sp1 = run_cli("lattice sparsify --in " + z3.string() + " --q 101 --seed 9");
    Run sp2 = run_cli("lattice sparsify --seed 9 --in " + z3.string() + " --q 101");
    CHECK(sp1.code == 0);
    CHECK(json::parse(sp1.out)["result"] == json::parse(sp2.out)["result"]);
    CHECK(json::parse(sp1.out)["seed"] == 9);
    auto sc = scratch("sc.json", R"({"universe_size": 3, "sets": [[0, 1], [1, 2]], "d": 2})");
    Run cover = run_cli("oracle cover --in " + sc.string());
    CHECK(json::parse(cover.out)["result"]["exact"].is_null());
}

TEST_CASE("gadget subcommands") {
    Run p = run_cli("gadget params --p 3 --delta 0.5");
    CHECK(p.code == 0);
    CHECK(json::parse(p.out)["result"]["eps"] == "9/100");
    Run mc = run_cli("gadget mc-close --n 100 --delta 0.005 --eps 0.004 --trials 20000 --seed 3 --out json");
    CHECK(mc.code == 0);
    json r = json::parse(mc.out)["result"];
    CHECK(r["frequency"].get<double>() >= r["analytic_bound"].get<double>() - 3 * r["sigma"].get<double>());
    CHECK(mc.out == run_cli("gadget mc-close --n 100 --delta 0.005 --eps 0.004 --trials 20000 --seed 3 --out json").out);
}

TEST_CASE("reduce sat-to-svp is reproducible") {
    auto cnf = scratch("toy.cnf", "p cnf 3 4\n1 0\n2 0\n3 0\n-1 2 0\n");
    const std::string ov = " --ell 4 --q-min 1000 --delta 1/5 --n-dagger 4 --rank-cap 20";
    CHECK(run_cli("reduce sat-to-svp --in " + cnf.string() + " --p 3 --seed 7" + ov).code == 2);
    auto a = std::filesystem::temp_directory_path() / "lpsvp_cli_tests" / "a.json";
    auto b = std::filesystem::temp_directory_path() / "lpsvp_cli_tests" / "b.json";
    Run r1 = run_cli("reduce sat-to-svp --in " + cnf.string() + " --p 3 --seed 7 --unsafe-overrides --output " + a.string() + ov);
    Run r2 = run_cli("reduce sat-to-svp --in " + cnf.string() + " --p 3 --seed 7 --unsafe-overrides --output " + b.string() + ov);
    CHECK(r1.code == 0);
    CHECK(r1.out == "DECISION=YES seed=7\n");
    CHECK(r1.out == r2.out);
    CHECK(slurp(a) == slurp(b));
    json j = json::parse(slurp(a));
    CHECK(j["seed"] == 7);
    CHECK(j["overrides"]["ell"] == 4);
    CHECK(j["overrides"]["n_dagger"] == 4);
    CHECK(j["result"]["decision"] == "YES");
    CHECK(j["result"]["plan"]["out_of_guarantee"] == true);

    // paper-default sizes: a refusal, still reproducible
    Run d1 = run_cli("reduce sat-to-svp --in " + cnf.string() + " --p 3 --seed 7");
    Run d2 = run_cli("reduce sat-to-svp --in " + cnf.string() + " --p 3 --seed 7");
    CHECK(d1.code == 2);
    CHECK(d1.out == d2.out);
    CHECK(d1.out.find("DECISION=REFUSED seed=7") != std::string::npos);
}

}
