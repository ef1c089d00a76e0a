#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dnc/cli.hpp"
#include "corpus.hpp"
#include "fixtures.hpp"

using namespace dnc;
using namespace dnc::testing;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result dnc_run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string ex(const std::string& f) { return example_path(f); }

std::string write_temp(const std::string& name, const std::string& text) {
  const fs::path dir = fs::temp_directory_path() / "dnc-test-cli";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p, std::ios::binary) << text;
  return p.string();
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("format_value uses five significant digits") {
  CHECK(cli::format_value(0.729367524756981) == "0.72937");
  CHECK(cli::format_value(0.31558) == "0.31558");
  CHECK(cli::format_value(0.0) == "0.00000");
}

TEST_CASE("capacity on the examples") {
  SUBCASE("example 2 reports R") {
    const Result r = dnc_run({"capacity", ex("ex2.json")});
    CHECK(r.code == cli::kOk);
    CHECK(contains(r.out, "method: characteristic-root"));
    CHECK(contains(r.out, "R = 0.72937"));
    CHECK(contains(r.out, "C = 0.31558"));
  }
  SUBCASE("example 3 reports P") {
    const Result r = dnc_run({"capacity", ex("ex3.json")});
    CHECK(r.code == cli::kOk);
    CHECK(contains(r.out, "method: smallest-pole"));
    CHECK(contains(r.out, "P = 0.54369"));
    CHECK(contains(r.out, "C = 0.60938"));
  }
  SUBCASE("explicit methods agree") {
    const auto a = nlohmann::json::parse(dnc_run({"capacity", ex("ex3.json"), "--method", "characteristic", "--json"}).out);
    const auto b = nlohmann::json::parse(dnc_run({"capacity", ex("ex3.json"), "--method", "pole", "--json"}).out);
    CHECK(a["report"]["method"] == "characteristic-root");
    CHECK(b["report"]["method"] == "smallest-pole");
    CHECK(std::abs(a["report"]["capacity_nats"].get<double>() - b["report"]["capacity_nats"].get<double>()) <= 1e-8);
  }
  SUBCASE("unary monoid has capacity 0") {
    const Result r = dnc_run({"capacity", ex("unary.json")});
    CHECK(r.code == cli::kOk);
    CHECK(contains(r.out, "C = 0.00000"));
  }
  SUBCASE("oracle method") {
    const Result r = dnc_run({"capacity", ex("ex3.json"), "--method", "oracle", "--cutoff", "20"});
    CHECK(r.code == cli::kOk);
    CHECK(contains(r.out, "method: oracle-estimate"));
  }
  SUBCASE("finite channel notes the missing pole") {
    const std::string spec = write_temp("finite.json",
        R"({"atoms":{"one":1},"symbols":[{"name":"0","weight":{"one":1}}],)"
        R"("constraint":{"type":"regex","expr":"ε|0|00","unambiguous":true}})");
    const auto j = nlohmann::json::parse(dnc_run({"capacity", spec, "--json"}).out);
    CHECK(j["report"]["singularity_found"] == false);
    CHECK(j["report"]["capacity_nats"] == 0.0);
    CHECK_FALSE(j["report"]["note"].get<std::string>().empty());
  }
}

TEST_CASE("verification") {
  const Result r = dnc_run({"capacity", ex("ex2.json"), "--verify", "--cutoff", "30", "--json"});
  CHECK(r.code == cli::kOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["verification"]["series_match"] == true);
  CHECK(j["verification"]["passed"] == true);
  CHECK(j["verification"]["weights_compared"].get<int>() > 100);
  CHECK(dnc_run({"capacity", ex("ex2.json"), "--verify"}).code != cli::kOk);  // --verify needs --cutoff
}

TEST_CASE("JSON output is deterministic") {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"capacity", ex("ex2.json"), "--json"},
        {"capacity", ex("ex3.json"), "--verify", "--cutoff", "20", "--json"},
        {"coefficients", ex("ex2.json"), "--cutoff", "10", "--json"},
        {"oracle", ex("ex3.json"), "--cutoff", "15", "--json"},
        {"check-density", ex("ex2.json"), "--cutoff", "30", "--json"},
        {"gf", ex("ex3.json"), "--json"}}) {
    CAPTURE(args[0]);
    const Result a = dnc_run(args);
    const Result b = dnc_run(args);
    CHECK(a.code == cli::kOk);
    CHECK(a.out == b.out);
    CHECK_NOTHROW((void)nlohmann::json::parse(a.out));
  }
}

TEST_CASE("coefficients") {
  SUBCASE("series and oracle agree") {
    const auto a = dnc_run({"coefficients", ex("ex2.json"), "--cutoff", "12", "--json"});
    const auto b = dnc_run({"coefficients", ex("ex2.json"), "--cutoff", "12", "--oracle", "--json"});
    CHECK(a.code == cli::kOk);
    const auto ja = nlohmann::json::parse(a.out);
    const auto jb = nlohmann::json::parse(b.out);
    CHECK(ja["entries"] == jb["entries"]);
  }
  SUBCASE("text rows") {
    const Result r = dnc_run({"coefficients", ex("ex3.json"), "--cutoff", "5"});
    CHECK(contains(r.out, "5\t24\t5·one"));
    CHECK(contains(r.out, "# total strings: 51"));
  }
  SUBCASE("numerically equal weights are merged with a warning") {
    const std::string spec = write_temp("tie.json",
        R"({"atoms":{"one":1,"half":0.5},"symbols":[{"name":"a","weight":{"one":1}},)"
        R"({"name":"b","weight":{"half":2}}],"constraint":{"type":"free"}})");
    const Result r = dnc_run({"coefficients", spec, "--cutoff", "3", "--json"});
    CHECK(r.code == cli::kOk);
    CHECK(contains(r.err, "warning"));
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["entries"].size() == 4);
    CHECK(j["entries"][3]["count"] == 8);
    CHECK(j["entries"][3]["vectors"].size() == 4);
  }
  SUBCASE("large counts are strings") {
    const auto j = nlohmann::json::parse(dnc_run({"coefficients", ex("ex3.json"), "--cutoff", "80", "--json"}).out);
    CHECK(j["entries"].back()["count"].is_string());
    CHECK(j["entries"][10]["count"] == 504);
  }
}

TEST_CASE("gf") {
  const Result r = dnc_run({"gf", ex("ex3.json")});
  CHECK(contains(r.out, "1 + y^{one} + y^{2·one}"));
  CHECK(contains(r.out, "1 - y^{one} - y^{2·one} - y^{3·one}"));
}

TEST_CASE("check-density") {
  SUBCASE("the 1.5^n fixture is flagged") {
    nlohmann::json doc;
    doc["weights"] = dense_weights(30);
    const std::string path = write_temp("dense.json", doc.dump());
    const Result r = dnc_run({"check-density", path, "--cutoff", "30"});
    CHECK(r.code == cli::kCapacityIllDefined);
    CHECK(contains(r.out, "exponential_flag: true"));
  }
  SUBCASE("the examples are not flagged") {
    CHECK(dnc_run({"check-density", ex("ex2.json"), "--cutoff", "30"}).code == cli::kOk);
    CHECK(dnc_run({"check-density", ex("ex3.json"), "--cutoff", "30"}).code == cli::kOk);
    CHECK(dnc_run({"check-density", ex("unary.json"), "--cutoff", "20"}).code == cli::kOk);
  }
  SUBCASE("too short a range is a solver error") {
    CHECK(dnc_run({"check-density", ex("ex2.json"), "--cutoff", "3"}).code == cli::kSolverError);
  }
}

TEST_CASE("exit codes for failures") {
  SUBCASE("missing file") {
    const Result r = dnc_run({"capacity", "/nonexistent/spec.json"});
    CHECK(r.code == cli::kSpecError);
    CHECK_FALSE(r.err.empty());
  }
  SUBCASE("malformed spec carries a location") {
    const std::string spec = write_temp("bad.json", R"({"atoms":{"one":-1},"symbols":[],"constraint":{"type":"free"}})");
    const Result r = dnc_run({"capacity", spec});
    CHECK(r.code == cli::kSpecError);
    CHECK(contains(r.err, "/atoms/one"));
  }
  SUBCASE("star of a nullable expression") {
    const std::string spec = write_temp("nullable.json",
        R"({"atoms":{"one":1},"symbols":[{"name":"0","weight":{"one":1}}],)"
        R"("constraint":{"type":"regex","expr":"(ε|0)*","unambiguous":true}})");
    CHECK(dnc_run({"capacity", spec}).code == cli::kSpecError);
  }
  SUBCASE("characteristic method on a non star-form denominator") {
    const std::string spec = write_temp("twostars.json",
        R"({"atoms":{"one":1},"symbols":[{"name":"0","weight":{"one":1}},{"name":"1","weight":{"one":1}}],)"
        R"("constraint":{"type":"regex","expr":"0*1*","unambiguous":true}})");
    CHECK(dnc_run({"capacity", spec, "--method", "characteristic"}).code == cli::kSolverError);
    CHECK(dnc_run({"capacity", spec}).code == cli::kOk);
  }
  SUBCASE("usage errors") {
    CHECK(dnc_run({}).code != cli::kOk);
    CHECK(dnc_run({"coefficients", ex("ex2.json")}).code != cli::kOk);
    CHECK(dnc_run({"capacity", ex("ex2.json"), "--method", "magic"}).code != cli::kOk);
  }
}

TEST_CASE("the installed binary reports exit codes") {
  const std::string bin = DNC_BINARY;
  CHECK(std::system((bin + " capacity " + ex("ex2.json") + " > /dev/null").c_str()) == 0);
  CHECK(std::system((bin + " capacity /nonexistent.json 2> /dev/null").c_str()) != 0);
}
