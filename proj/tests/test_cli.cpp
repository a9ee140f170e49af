#include <catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

using nlohmann::json;

namespace {

struct Run {
    int status = -1;
    std::string out;
};

// stdout only; stderr goes to /dev/null
Run run(const std::string& args) {
    const std::string cmd = std::string(SOLVAREP_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

json run_json(const std::string& args) {
    auto r = run(args + " --format json");
    REQUIRE(r.status == 0);
    return json::parse(r.out);
}

} // namespace

TEST_CASE("irreps of S3 as json") {
    auto j = run_json("irreps --catalog s3");
    REQUIRE(j["irreps"].size() == 3);
    std::vector<int> deg;
    for (auto& r : j["irreps"]) deg.push_back(r["degree"].get<int>());
    std::sort(deg.begin(), deg.end());
    CHECK(deg == std::vector<int>{1, 1, 2});
}

TEST_CASE("rational character table of SL2(3)") {
    auto j = run_json("chartable --catalog sl23 --field Q");
    REQUIRE(j["rows"].size() == 5);
    for (auto& row : j["rows"]) CHECK(row["values"].size() == 5);

    auto t = run("chartable --catalog sl23 --field Q");
    REQUIRE(t.status == 0);
    CHECK(t.out.find("psi5") != std::string::npos);
}

TEST_CASE("X^7 - 1 over F2") {
    auto j = run_json("cyclic --n 7 --field F:2 factor");
    REQUIRE(j["factors"].size() == 3);
    std::vector<std::size_t> deg;
    for (auto& f : j["factors"]) deg.push_back(f["coefficients"].size() - 1);
    std::sort(deg.begin(), deg.end());
    CHECK(deg == std::vector<std::size_t>{1, 3, 3});
}

TEST_CASE("wedderburn json of C12") {
    auto j = run_json("abelian --abelian 12");
    REQUIRE(j.is_array());
    REQUIRE(j.size() == 6);
    std::vector<unsigned> ds;
    for (auto& t : j) {
        CHECK(t["copies"] == 1);
        ds.push_back(t["d"]);
    }
    CHECK(ds == std::vector<unsigned>{1, 2, 3, 4, 6, 12});
    CHECK(j[5]["field"] == "Q(zeta_12)");
    CHECK(run_json("cyclic --n 12 wedderburn") == j);
}

TEST_CASE("abelian quotients and irreps") {
    auto q = run_json("abelian --abelian 3,3 quotients");
    CHECK(q["quotients"].size() == 5);
    auto r = run_json("abelian --abelian 3,3 irreps");
    REQUIRE(r["irreps"].size() == 5);
    int sum = 0;
    for (auto& x : r["irreps"]) sum += x["degree"].get<int>();
    CHECK(sum == 9);
}

TEST_CASE("diagrams in every format") {
    auto d = run("diagram --catalog q8 --format dot");
    REQUIRE(d.status == 0);
    CHECK(d.out.rfind("digraph", 0) == 0);
    CHECK(d.out.find("rank=same") != std::string::npos);

    auto q = run("diagram --abelian 4,2 --field Q --format dot");
    REQUIRE(q.status == 0);
    CHECK(q.out.rfind("digraph", 0) == 0);

    auto j = run_json("diagram --catalog s3");
    CHECK(j.is_object());
}

TEST_CASE("modular mode and prime override") {
    auto j = run_json("pci --catalog s3 --mode modl --prime 13");
    CHECK(j["prime"] == 13);
    CHECK(j["pcis"].size() == 3);
    auto low = run("pci --catalog s3 --mode modl --prime 7 --format json");
    CHECK(low.status == 1);
    CHECK(json::parse(low.out)["error"]["code"] == "bad_prime");
}

TEST_CASE("fclasses and pci over Q") {
    CHECK(run_json("fclasses --catalog q8")["fclasses"].size() == 5);
    CHECK(run_json("pci --catalog d8 --field Q")["pcis"].size() == 5);
    // Q8 has a degree 2 irrep with a real character; over Q there are still 5 orbits
    CHECK(run_json("pci --catalog q8 --field Q")["pcis"].size() == 5);
    CHECK(run_json("pci --catalog c5 --field Q")["pcis"].size() == 2);
}

TEST_CASE("verify passes on the textbook groups") {
    for (const char* g : {"s3", "d8", "q8", "a4", "sl23", "s4"}) {
        auto r = run(std::string("verify --catalog ") + g);
        INFO(g);
        CHECK(r.status == 0);
        CHECK(r.out.find("FAIL") == std::string::npos);
    }
}

TEST_CASE("presentation files") {
    const std::string path = "cli_test_group.pc";
    {
        std::ofstream f(path);
        f << "group C6\ngen a 2\ngen b 3\n";
    }
    auto j = run_json("info --file " + path);
    CHECK(j["order"] == 6);
    std::remove(path.c_str());
}

TEST_CASE("exit codes and error documents") {
    auto r = run("info --catalog nope --format json");
    CHECK(r.status == 1);
    auto j = json::parse(r.out);
    CHECK(j["error"]["code"] == "unknown_group");

    CHECK(run("info --file /no/such/file").status == 1);
    CHECK(run("pci --catalog s3 --field Z").status == 1);
    CHECK(run("irreps --catalog s3 --field Q").status == 1);

    CHECK(run("info").status == 2);
    CHECK(run("info --catalog s3 --n 4").status == 2);
    CHECK(run("bogus --catalog s3").status == 2);
    CHECK(run("pci --catalog s3 --format dot").status == 2);
    CHECK(run("cyclic --n 4 frobnicate").status == 2);
    CHECK(run("--help").status == 0);
}

TEST_CASE("output is deterministic") {
    for (const char* a : {"chartable --catalog s4 --field Q", "irreps --catalog d8 --format json",
                          "abelian --abelian 2,4,9"}) {
        auto x = run(a), y = run(a);
        CHECK(x.status == 0);
        CHECK(x.out == y.out);
    }
}

TEST_CASE("numeric display") {
    auto r = run("irreps --catalog c3 --digits 5");
    REQUIRE(r.status == 0);
    CHECK(r.out.find("-0.5") != std::string::npos);
}
