#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "slackcert/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace slackcert;
namespace fs = std::filesystem;

namespace {

const std::string kFixtures = SLACKCERT_FIXTURES;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args) {
  args.insert(args.begin(), "slackcert");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return kFixtures + "/" + name; }

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "slackcert_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("certify exit codes") {
  auto found = cli({"certify", fixture("n10_partial.json"), "-k", "2", "-l", "2", "--format", "json"});
  CHECK(found.code == kExitOk);
  auto doc = nlohmann::json::parse(found.out);
  CHECK(doc["status"] == "certificate");
  CHECK(doc["certificate"]["verified"] == true);
  CHECK(doc["grassmann_check"]["passed"] == true);
  CHECK_FALSE(doc.contains("timings"));

  auto none = cli({"certify", fixture("prism.json"), "-k", "1", "-l", "2"});
  CHECK(none.code == kExitNoCertificate);
  CHECK(none.out.find("status: none") != std::string::npos);
}

TEST_CASE("bad input exits with 2") {
  CHECK(cli({"certify", fixture("missing.json")}).code == kExitInvalidInput);
  CHECK(cli({"certify", fixture("prism.json"), "-k", "0"}).code == kExitInvalidInput);
  CHECK(cli({"certify", fixture("prism.json"), "--avoid", "1", "--fix", "1"}).code == kExitInvalidInput);
  CHECK(cli({"certify", fixture("prism.json"), "--avoid", "99"}).code == kExitInvalidInput);
  CHECK(cli({"certify", fixture("prism.json"), "--flag", "1,2"}).code == kExitInvalidInput);
  CHECK(cli({"certify", fixture("prism.json"), "--orientation", "1:+2"}).code == kExitInvalidInput);
  CHECK(cli({"certify", fixture("prism.json"), "--format", "xml"}).code == kExitInvalidInput);
  CHECK(cli({"frobnicate"}).code == kExitInvalidInput);
  CHECK(cli({}).code == kExitInvalidInput);
  // A stalled orientation is an input problem too.
  fs::path dir = scratch("stall");
  {
    auto doc = nlohmann::json::parse(std::ifstream(fixture("n10_partial.json")));
    doc.erase("orientation");
    std::ofstream(dir / "s.json") << doc.dump();
  }
  auto stalled = cli({"orient", (dir / "s.json").string()});
  CHECK(stalled.code == kExitInvalidInput);
  CHECK(stalled.err.find("orientation inference stalled") != std::string::npos);
}

TEST_CASE("help exits with 0") {
  auto help = cli({"--help"});
  CHECK(help.code == kExitOk);
  CHECK(help.out.find("certify") != std::string::npos);
}

TEST_CASE("time limit exits with 4") {
  auto out = cli({"certify", fixture("n10_partial.json"), "--time-limit", "0.000000001"});
  CHECK(out.code == kExitTimeLimit);
}

TEST_CASE("timings only on request") {
  auto out = cli({"orient", fixture("prism_oriented.json"), "--format", "json", "--timings"});
  CHECK(out.code == kExitOk);
  auto doc = nlohmann::json::parse(out.out);
  CHECK(doc.contains("timings"));
  CHECK(doc["orientation"].size() == 5);
}

TEST_CASE("parametrize shows both matrices") {
  auto out = cli({"parametrize", fixture("prism_oriented.json")});
  CHECK(out.code == kExitOk);
  CHECK(out.out.find("reduced_homogeneous:") != std::string::npos);
  CHECK(out.out.find("x_{1,1}*x_{4,4}*x_{5,3}*x_{6,2}") == std::string::npos);  // dehomogenized: all ones
}

TEST_CASE("certify, save, verify and check-final") {
  fs::path dir = scratch("roundtrip");
  std::string cert = (dir / "cert.json").string();
  auto found = cli({"certify", fixture("p3513_partial.json"), "-k", "2", "-l", "3", "--avoid", "2,4,7", "--out",
                    cert, "--dump-tableau", (dir / "tableau.txt").string()});
  REQUIRE(found.code == kExitOk);
  CHECK(fs::file_size(dir / "tableau.txt") > 0);

  auto verified = cli({"verify", cert, "--against", fixture("p3513_partial.json"), "--format", "json"});
  CHECK(verified.code == kExitOk);
  std::ofstream(dir / "report.json") << verified.out;
  CHECK(cli({"check-final", cert}).code == kExitOk);
  CHECK(cli({"check-final", (dir / "report.json").string()}).code == kExitOk);

  auto doc = nlohmann::json::parse(std::ifstream(cert));
  doc["terms"][0]["weight"] = "5";
  std::ofstream(dir / "bad.json") << doc.dump();
  CHECK(cli({"verify", (dir / "bad.json").string(), "--against", fixture("p3513_partial.json")}).code ==
        kExitNoCertificate);
  doc["final_polynomial"][0][0] = -1;
  doc.erase("coplanar");
  std::ofstream(dir / "bad_final.json") << doc.dump();
  CHECK(cli({"check-final", (dir / "bad_final.json").string()}).code == kExitNoCertificate);
}

TEST_CASE("verify rejects factors outside the matrix") {
  fs::path dir = scratch("outside");
  std::ofstream(dir / "c.json") << R"({"terms": [{"weight": 1, "entries": [[40, 2]]}]})";
  CHECK(cli({"verify", (dir / "c.json").string(), "--against", fixture("n10_partial.json")}).code ==
        kExitInvalidInput);
}

TEST_CASE("batch over a directory") {
  fs::path dir = scratch("batch");
  for (const char* name : {"prism.json", "n10_partial.json", "simplex_3.json"}) {
    fs::copy_file(fixture(name), dir / name);
  }
  auto out = cli({"batch", dir.string(), "--grid", "1,2", "--grid", "2,2", "--format", "json"});
  CHECK(out.code == kExitOk);
  auto doc = nlohmann::json::parse(out.out);
  REQUIRE(doc["results"].size() == 3);
  CHECK(doc["results"][0]["name"] == "n10_partial");
  CHECK(doc["results"][0]["found"] == "2,2");
  CHECK(doc["results"][1]["found"].is_null());
  CHECK(fs::exists(dir / "n10_partial.report.json"));
  CHECK(fs::exists(dir / "prism.report.json"));

  // Reports left behind are not treated as inputs on a second run.
  auto again = cli({"batch", dir.string(), "--grid", "1,2", "--format", "json"});
  CHECK(nlohmann::json::parse(again.out)["results"].size() == 3);

  CHECK(cli({"batch", dir.string()}).code == kExitInvalidInput);
  fs::path empty = scratch("empty");
  CHECK(cli({"batch", empty.string(), "--grid", "1,2"}).code == kExitInvalidInput);
}
