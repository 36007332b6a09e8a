#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cli.hpp"

using Json = nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;

  [[nodiscard]] Json record(std::size_t i = 0) const {
    std::istringstream in(out);
    std::string line;
    for (std::size_t k = 0; std::getline(in, line); ++k) {
      if (k == i) return Json::parse(line);
    }
    throw std::runtime_error("no record " + std::to_string(i) + " in: " + out);
  }
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = scl_lab::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << body;
  return p;
}

class ScopedEnv {
 public:
  ScopedEnv(const char* name, const char* value) : name_(name) { ::setenv(name, value, 1); }
  ~ScopedEnv() { ::unsetenv(name_); }
  ScopedEnv(const ScopedEnv&) = delete;
  ScopedEnv& operator=(const ScopedEnv&) = delete;

 private:
  const char* name_;
};

}  // namespace

TEST_CASE("word") {
  const auto o = run({"word", "--word", "aAbab", "--power", "2", "--count", "ab"});
  REQUIRE(o.code == 0);
  const Json r = o.record();
  CHECK(r["command"] == "word");
  CHECK(r["result"]["reduced"] == "bab");
  CHECK(r["result"]["length"] == 3);
  CHECK(r["result"]["power"] == "babbab");
  CHECK(r["result"]["disjoint_copies"] == 1);
  CHECK(r["flags"].empty());
}

TEST_CASE("invalid words exit 2 with the offending position") {
  const auto o = run({"word", "--word", "ab?a"});
  CHECK(o.code == 2);
  CHECK(o.out.empty());
  CHECK(o.err.find('2') != std::string::npos);
  CHECK(run({"word", "--word", "abc"}).code == 2);  // c is outside rank 2
  CHECK(run({"word", "--rank", "3", "--word", "abc"}).code == 0);
  CHECK(run({"brooks", "--w", "", "--word", "ab"}).code == 2);
}

TEST_CASE("unknown subcommands and options exit 2") {
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"hk", "--bogus", "1"}).code == 2);
  CHECK(run({"hk"}).code == 2);
  CHECK(run({}).code == 2);
}

TEST_CASE("brooks") {
  const auto o = run({"brooks", "--w", "ab", "--word", "abab", "--n", "4"});
  REQUIRE(o.code == 0);
  const Json r = o.record();
  CHECK(r["result"]["value"] == "2");
  CHECK(r["result"]["defect_upper"] == "3");
  CHECK(r["result"]["homogenized"] == "2");
  CHECK(r["result"]["homogenized_defect_upper"] == "6");
}

TEST_CASE("defect stays within the Brooks bound") {
  const auto o = run({"defect", "--w", "ab", "--budget", "3"});
  REQUIRE(o.code == 0);
  const Json r = o.record();
  CHECK(r["result"]["exhaustive"] == true);
  CHECK(r["result"]["violations"] == 0);
}

TEST_CASE("scl of the basic commutator") {
  const auto o = run({"scl", "--word", "abAB"});
  REQUIRE(o.code == 0);
  const Json r = o.record();
  CHECK(r["result"]["lower"] == "1/12");
  CHECK(r["result"]["upper"] == "1/2");
  CHECK(r["result"]["lower_witness"]["brooks_word"] == "abAB");
  REQUIRE(r.contains("certificates"));
  CHECK(r["certificates"][0]["verified"] == true);
}

TEST_CASE("scl outside the commutator subgroup is infinite") {
  const auto o = run({"scl", "--word", "ab"});
  REQUIRE(o.code == 0);
  CHECK(o.record()["result"]["upper"] == "inf");
}

TEST_CASE("scl exits 3 when the budget finds no upper bound") {
  const auto o = run({"scl", "--word", "[aa,bb]", "--max-genus", "1", "--max-len", "1", "--n-max", "1"});
  CHECK(o.code == 3);
  CHECK(o.record()["result"]["status"] == "inconclusive");
}

TEST_CASE("scl inverse-conjugacy witnesses are checked") {
  // Free groups have no nontrivial element conjugate to its inverse.
  CHECK(run({"scl", "--word", "abAB", "--inverse-conjugator", "ba"}).code == 2);
  CHECK(run({"scl", "--word", "abAB", "--inverse-conjugator", "a"}).code == 2);
}

TEST_CASE("cl") {
  const auto o = run({"cl", "--word", "abAB", "--power", "3", "--max-genus", "2", "--max-len", "6"});
  REQUIRE(o.code == 0);
  const Json r = o.record();
  CHECK(r["result"]["upper"] == 2);
  CHECK(r["result"]["scl_upper"] == "1/2");
  CHECK(r["certificates"][0]["verified"] == true);
}

TEST_CASE("rot") {
  auto r = run({"rot", "--turn", "1/3", "--n", "300"}).record();
  CHECK(r["result"]["value"].get<double>() == doctest::Approx(1.0 / 3).epsilon(1e-9));
  CHECK(r["flags"][0] == "approximate");
  r = run({"rot", "--matrix", "2,0,0,0.5", "--n", "100"}).record();
  CHECK(std::abs(r["result"]["value"].get<double>()) < 0.02);
  CHECK(run({"rot", "--matrix", "1,1,1,1"}).code == 2);
  CHECK(run({"rot", "--matrix", "1,1,1"}).code == 2);
}

TEST_CASE("hyperbolic subcommands") {
  CHECK(run({"hk", "--radius", "2"}).record()["result"]["min_core_length"].get<double>() ==
        doctest::Approx(0.019077049306).epsilon(1e-11));
  CHECK(run({"hk", "--radius", "0"}).code == 2);
  const Json tube = run({"tube", "--length", "0.1", "--radius", "2"}).record();
  CHECK(tube["result"]["qm_value"].get<double>() == doctest::Approx(0.241790693898).epsilon(1e-10));
  const Json sa = run({"surgery-a", "--chi", "-1", "--radius", "2", "--p", "50"}).record();
  CHECK(sa["result"]["scl_upper"] == "1/100");
  CHECK(run({"surgery-a", "--chi", "-1", "--radius", "1.5", "--p", "50"}).code == 2);
  const Json sb = run({"surgery-b", "--meridian-length", "0.3", "--variant", "boroczky"}).record();
  CHECK(sb["result"]["neg_chi_q_lower"].get<double>() == doctest::Approx(1.85185185185));
  CHECK(run({"surgery-b", "--meridian-length", "0.3", "--variant", "other"}).code == 2);
  const Json nz = run({"nz", "--meridian", "0.3,0", "--longitude", "0,3.3333333333333333", "--p", "10", "--q", "1"}).record();
  CHECK(nz["result"]["quadratic_form"].get<double>() == doctest::Approx(20.1111111111));
  CHECK(run({"nz", "--meridian", "1,0", "--longitude", "0,2", "--p", "1", "--q", "0"}).code == 2);
  const Json gap = run({"gap", "--optimal", "--cap", "1", "--m", "100", "--g", "1"}).record();
  CHECK(gap["result"]["length_bound"].get<double>() == doctest::Approx(0.197345796698));
  CHECK(run({"gap", "--m", "12", "--g", "1", "--epsilon", "0.3"}).code == 2);
}

TEST_CASE("sol") {
  auto r = run({"sol", "cert", "--matrix", "2,1,1,1", "--vector", "1,0"}).record();
  CHECK(r["result"]["cl_upper"] == 1);
  CHECK(r["result"]["verified"] == true);
  r = run({"sol", "member", "--matrix", "3,1,2,1", "--vector", "0,1"}).record();
  CHECK(r["result"]["member"] == false);
  CHECK(run({"sol", "cert", "--matrix", "3,1,2,1", "--vector", "0,1"}).code == 2);
  CHECK(run({"sol", "cert", "--matrix", "1,1,0,1", "--vector", "1,0"}).code == 2);
  r = run({"sol", "decompose", "--matrix", "2,1,1,1", "--vector", "1000000007,-99"}).record();
  CHECK(r["certificates"]["verified"] == true);
  CHECK(run({"sol", "explode", "--matrix", "2,1,1,1"}).code == 2);
}

TEST_CASE("table output") {
  const auto o = run({"hk", "--radius", "2", "--table"});
  CHECK(o.code == 0);
  CHECK(o.out.find("result.min_core_length") != std::string::npos);
  CHECK(run({"--table", "hk", "--radius", "2"}).out == o.out);
}

TEST_CASE("config file") {
  const auto good = temp_file("scl_lab_cfg_good.json", R"({"margulis": {"n": 1.5}, "scl": {"n_max": 1}})");
  auto o = run({"--config", good.string(), "gap", "--m", "100", "--g", "1", "--epsilon", "0.3618"});
  CHECK(o.code == 0);
  CHECK(o.record()["inputs"]["margulis_n"].get<double>() == 1.5);
  const auto tight = temp_file("scl_lab_cfg_tight.json", R"({"margulis": {"n": 0.29}})");
  CHECK(run({"--config", tight.string(), "gap", "--m", "100", "--g", "1", "--epsilon", "0.3618"}).code == 2);
  const auto unknown = temp_file("scl_lab_cfg_unknown.json", R"({"colour": 3})");
  CHECK(run({"--config", unknown.string(), "hk", "--radius", "2"}).code == 2);
  const auto broken = temp_file("scl_lab_cfg_broken.json", "{");
  CHECK(run({"--config", broken.string(), "hk", "--radius", "2"}).code == 2);
  CHECK(run({"--config", "/nonexistent/cfg.json", "hk", "--radius", "2"}).code == 2);
  CHECK(run({"--config", SCL_LAB_CONFIG_DIR "/example.json", "hk", "--radius", "2"}).code == 0);
}

TEST_CASE("SCL_LAB_THREADS") {
  {
    ScopedEnv env("SCL_LAB_THREADS", "0");
    CHECK(run({"scl", "--word", "abAB"}).code == 2);
  }
  {
    ScopedEnv env("SCL_LAB_THREADS", "two");
    CHECK(run({"scl", "--word", "abAB"}).code == 2);
  }
  {
    ScopedEnv env("SCL_LAB_THREADS", "2");
    const auto threaded = run({"scl", "--word", "abAB"});
    CHECK(threaded.code == 0);
    CHECK(threaded.out == run({"scl", "--word", "abAB"}).out);
  }
}

TEST_CASE("audit") {
  const auto o = run({"audit", "--grid-points", "50", "--oracle-target-len", "8", "--defect-budget", "3"});
  CHECK(o.code == 0);
  for (std::size_t i = 0; i < 4; ++i) CHECK(o.record(i)["command"] == "audit");
  CHECK(run({"audit", "--radii", "1.5,3"}).code == 2);
  CHECK(run({"audit", "--grid-start", "1.5"}).code == 2);
  CHECK(run({"audit", "--radii", "2.0005", "--oracle-target-len", "6", "--defect-budget", "2"}).code == 1);
}

TEST_CASE("golden outputs are byte-identical") {
  const std::filesystem::path dir = SCL_LAB_GOLDEN_DIR;
  std::size_t cases = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".args") continue;
    std::vector<std::string> args;
    std::istringstream in(slurp(entry.path()));
    for (std::string line; std::getline(in, line);) {
      if (!line.empty()) args.push_back(line);
    }
    auto expected_path = entry.path();
    expected_path.replace_extension(".out");
    INFO(entry.path().filename().string());
    CHECK(run(args).out == slurp(expected_path));
    ++cases;
  }
  CHECK(cases >= 8);
}
