#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "ndual/cli.hpp"

namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "ndual");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = ndual::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& text) {
  const fs::path dir = fs::temp_directory_path() / "ndual_test_cli";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p.string();
}

}  // namespace

TEST_CASE("nnorm") {
  const std::string t = temp_file("t.json", "[[3,0,0],[0,4,0]]");
  const Run g = run({"nnorm", t, "--p", "2", "--gahler"});
  CHECK(g.code == 0);
  CHECK(std::stod(g.out) == doctest::Approx(12.0).epsilon(1e-6));

  const Run j = run({"nnorm", t, "--p", "2", "--json"});
  CHECK(j.code == 0);
  CHECK(nlohmann::json::parse(j.out).at("value") == 12.0);

  CHECK(run({"nnorm", t}).code == 2);
  CHECK(run({"nnorm", t, "--p", "0.5"}).code == 2);
  CHECK(run({"nnorm", temp_file("missing_dir_none.json", "") + ".absent", "--p", "2"}).code == 2);
}

TEST_CASE("malformed input exits 2") {
  const std::string bad = temp_file("bad.json", "[[1, 2");
  const Run r = run({"nnorm", bad, "--p", "2"});
  CHECK(r.code == 2);
  CHECK_FALSE(r.err.empty());
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({}).code == 2);
}

TEST_CASE("sip, bounds and orth") {
  const std::string t = temp_file("pair.json", R"({"space": {"d": 2, "p": 3}, "vectors": [[1, 1], [1, 0]]})");
  const Run s = run({"sip", t});
  CHECK(s.code == 0);
  CHECK(s.out.find("g 0.7937") != std::string::npos);
  CHECK(s.out.find("g_orthogonal false") != std::string::npos);

  const Run b = run({"bounds", temp_file("b.json", "[[2,0],[0,3]]"), "--p", "2"});
  CHECK(b.code == 0);
  CHECK(b.out.find("lower 6") != std::string::npos);
  CHECK(b.out.find("upper 12") != std::string::npos);

  CHECK(run({"orth", t}).code == 0);
  CHECK(run({"orth", temp_file("dep.json", "[[1,2],[2,4]]"), "--p", "2"}).code == 2);
}

TEST_CASE("fnorm") {
  const std::string det = temp_file("det.json", R"({"order": 2, "space": {"d": 2, "p": 2}, "coeffs": [[0, 1], [-1, 0]]})");
  for (const char* mode : {"n1", "nn", "op", "opG"}) {
    const Run r = run({"fnorm", det, "--mode", mode});
    CHECK(r.code == 0);
    CHECK(std::stod(r.out) == doctest::Approx(1.0).epsilon(1e-8));
  }
  const std::string e12 = temp_file("e12.json", R"({"order": 2, "space": {"d": 2, "p": 2}, "coeffs": [[0, 1], [0, 0]]})");
  const Run r = run({"fnorm", e12, "--mode", "nn"});
  CHECK(r.code == 2);
  CHECK(r.err.find("NotAntisymmetricError") != std::string::npos);
  CHECK(run({"fnorm", det, "--mode", "bogus"}).code == 2);
}

TEST_CASE("verify exit codes and report file") {
  const std::string out = (fs::temp_directory_path() / "ndual_test_cli" / "report.json").string();
  const Run ok = run({"verify", "--seed", "42", "--trials", "10", "--dims", "2,3", "--orders", "1,2", "--out", out});
  CHECK(ok.code == 0);
  std::ifstream in(out);
  const auto report = nlohmann::json::parse(in);
  CHECK(report.at("config").at("seed") == 42);

  const Run bad = run({"verify", "--seed", "1", "--trials", "10", "--dims", "2", "--orders", "1",
                       "--mutate", "sip.drop_norm_factor", "--only", "prop.sip."});
  CHECK(bad.code == 1);
  std::istringstream lines(bad.out);
  bool g1_failed = false;
  for (std::string line; std::getline(lines, line);)
    if (line.rfind("FAIL", 0) == 0 && line.find("prop.sip.G1 ") != std::string::npos) g1_failed = true;
  CHECK(g1_failed);

  CHECK(run({"verify", "--dims", "3", "--orders", "4"}).code == 2);
  CHECK(run({"verify", "--tol", "prop.unknown=1e-3"}).code == 2);
  CHECK(run({"verify", "--mutate", "nothing"}).code == 2);
  fs::remove_all(fs::temp_directory_path() / "ndual_test_cli");
}
