#include "cli_runner.hpp"

#include "eqlearn/class_io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

std::string data(const char* name) { return std::string(EQLEARN_EXAMPLES_DIR) + "/" + name; }

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::filesystem::path scratch(const char* name)
{
    auto dir = std::filesystem::temp_directory_path() / "eqlearn_cli_tests";
    std::filesystem::create_directories(dir);
    auto p = dir / name;
    std::filesystem::remove(p);
    return p;
}

} // namespace

TEST_CASE("cli: ldim")
{
    auto r = cli::run("ldim --class " + data("c3.json"));
    CHECK(r.code == 0);
    CHECK(r.out.rfind("ldim: 1\n", 0) == 0);
    CHECK(r.out.find("concepts: 3") != std::string::npos);

    r = cli::run("ldim --class " + data("powerset3.json"));
    CHECK(r.out.rfind("ldim: 3\n", 0) == 0);

    r = cli::run("ldim --class " + data("powerset3.json") + " --format json");
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["results"]["ldim"] == 3);
    CHECK(doc["version"] == EQLEARN_VERSION);
    CHECK(doc["command"] == "ldim");
}

TEST_CASE("cli: errors and exit codes")
{
    CHECK(cli::run("ldim --class " + data("malformed.json")).code == 3);
    CHECK(cli::run("ldim --class " + data("unnormalized.json")).code == 3);
    CHECK(cli::run("ldim --class /nonexistent/file.json").code == 3);
    CHECK(cli::run("ldim").code == 2);
    CHECK(cli::run("frobnicate").code == 2);
    CHECK(cli::run("learn --class " + data("c3.json") + " --target Z --trials 5").code == 2);
    CHECK(cli::run("ldim --class " + data("c3.json") + " --format xml").code == 2);
    CHECK(cli::run("compress --class " + data("c3.json")).code == 2);
    CHECK(cli::run("compress --class " + data("c3.json") + " --sample x1=0,x2=0").code == 2);
    CHECK(cli::run("verify").code == 2);
    CHECK(cli::run("--help").code == 0);
}

TEST_CASE("cli: learn and learn-exact")
{
    auto r = cli::run("learn --class " + data("c3.json") + " --target A --trials 2000 --seed 1 --format json");
    REQUIRE(r.code == 0);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["config"]["seed"] == 1);
    CHECK(doc["results"]["mean"].get<double>() <= doc["results"]["bound"].get<double>());
    // target A in {10, 01, 11} always takes exactly two queries
    CHECK(doc["results"]["mean"].get<double>() == 2.0);

    r = cli::run("learn-exact --class " + data("c3.json") + " --target A");
    CHECK(r.code == 0);
    CHECK(r.out.rfind("expected_queries: 2\n", 0) == 0);

    r = cli::run("learn --class " + data("c3.json") + " --target B --trials 100 --seed 3 --format csv");
    CHECK(r.out.rfind("command,version,class,target,trials,seed,ldim,bound,mean,", 0) == 0);
}

TEST_CASE("cli: staged")
{
    auto r = cli::run("staged --family intervals --prior-geometric 0.5 --trials 200 --seed 1 --format json");
    REQUIRE(r.code == 0);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["results"]["identified"] == 200);
    CHECK(doc["config"]["prior_geometric"] == "1/2");

    r = cli::run("staged --family file:" + data("c3_prior.json") + " --trials 50 --seed 2 --format json");
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["results"]["identified"] == 50);

    CHECK(cli::run("staged --family file:" + data("c3.json") + " --trials 5").code == 3);
    CHECK(cli::run("staged --family intervals --prior-geometric 1.5 --trials 5").code == 2);
}

TEST_CASE("cli: compress")
{
    auto r = cli::run("compress --class " + data("c3.json") + " --verify --format json");
    REQUIRE(r.code == 0);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["results"]["d"] == 1);
    CHECK(doc["results"]["rho_count"] == 2);
    CHECK(doc["results"]["samples_tested"] == 7);
    CHECK(doc["results"]["failures"].empty());

    r = cli::run("compress --class " + data("c3.json") + " --sample x1=1 --format json");
    REQUIRE(r.code == 0);
    doc = nlohmann::json::parse(r.out);
    CHECK(doc["results"]["tuple"] == nlohmann::json::array({"x1"}));
    CHECK(doc["results"]["reconstructions"][1]["concept"] == "11");
}

TEST_CASE("cli: verify")
{
    auto r = cli::run("verify --class " + data("powerset3.json"));
    CHECK(r.code == 0);
    r = cli::run("verify --random-classes 50 --max-domain 4 --max-concepts 6 --seed 7 --format json");
    CHECK(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["results"]["passed"] == true);

    // the stricter total-query reading fails and embeds a reloadable witness
    r = cli::run("verify --random-classes 200 --max-domain 4 --max-concepts 8 --seed 7 --total-query-bound --format json");
    CHECK(r.code == 1);
    {
        auto doc = nlohmann::json::parse(r.out);
        REQUIRE_FALSE(doc["results"]["witnesses"].empty());
        auto witness = doc["results"]["witnesses"][0];
        CHECK(witness["property"] == "total_query_bound");
        CHECK_NOTHROW(eqlearn::load_class(witness["class"].dump()));
    }
}

TEST_CASE("cli: gen output loads as a class file")
{
    auto r = cli::run("gen --seed 4 --points 5 --concepts 9");
    REQUIRE(r.code == 0);
    auto cls = eqlearn::load_class(r.out);
    CHECK(cls.size() == 9);
    CHECK(cls.domain().size() == 5);
    CHECK(cli::run("gen --seed 4 --points 5 --concepts 9").out == r.out);
    CHECK(cli::run("gen --points 2 --concepts 5").code == 2);
}

TEST_CASE("cli: appended reports")
{
    auto csv = scratch("learn.csv");
    const std::string cmd = "learn --class " + data("c3.json") + " --target B --trials 50 --seed 9 --format csv --output " + csv.string();
    REQUIRE(cli::run(cmd).code == 0);
    REQUIRE(cli::run(cmd).code == 0);
    auto text = slurp(csv);
    std::istringstream is(text);
    std::string header, row1, row2, extra;
    std::getline(is, header);
    std::getline(is, row1);
    std::getline(is, row2);
    CHECK(header.rfind("command,", 0) == 0);
    CHECK(row1 == row2);
    CHECK_FALSE(std::getline(is, extra));

    auto jsonl = scratch("ldim.jsonl");
    cli::run("ldim --class " + data("c3.json") + " --format json --output " + jsonl.string());
    cli::run("ldim --class " + data("powerset3.json") + " --format json --output " + jsonl.string());
    std::istringstream lines(slurp(jsonl));
    std::string a, b;
    std::getline(lines, a);
    std::getline(lines, b);
    CHECK(nlohmann::json::parse(a)["results"]["ldim"] == 1);
    CHECK(nlohmann::json::parse(b)["results"]["ldim"] == 3);
}
