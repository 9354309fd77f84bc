#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "stochopt/generators.hpp"
#include "stochopt/harness.hpp"

using namespace stochopt;
namespace fs = std::filesystem;

namespace {

const fs::path kSource = STOCHOPT_SOURCE_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome exec(RunConfig c) {
  std::ostringstream out, err;
  const int code = execute(c, out, err);
  return {code, out.str(), err.str()};
}

RunConfig config(const std::string& command, const std::string& instance = "") {
  RunConfig c;
  c.command = command;
  if (!instance.empty()) c.instance_path = (kSource / "data" / instance).string();
  c.timing = false;
  c.caps = Caps{};
  return c;
}

// Scratch directory removed on scope exit.
struct Scratch {
  fs::path dir;
  Scratch() : dir(fs::temp_directory_path() / ("stochopt-cli-" + std::to_string(::getpid()))) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
};

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("subadditivity suite on the rooted triangle") {
  const auto r = exec([] {
    auto c = config("check", "tri3.json");
    c.suite = "subadditivity";
    return c;
  }());
  CHECK(r.code == kExitOk);
  CHECK(r.out == slurp(kSource / "tests/golden/check_tri3_subadditivity.json"));
  CHECK(Json::parse(r.out)["records"][0]["passed"] == true);
}

TEST_CASE("boost and sample on a single edge") {
  auto c = config("run-boost", "edge1.json");
  c.seed = 1;
  const auto r = exec(c);
  REQUIRE(r.code == kExitOk);
  CHECK(r.out == slurp(kSource / "tests/golden/run_boost_edge1.json"));
  const Json s = Json::parse(r.out)["summary"];
  CHECK(s["expected_cost"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s["z_star"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s["ratio"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gap on two items with a unit cap") {
  const auto r = exec(config("gap", "gap2.json"));
  REQUIRE(r.code == kExitOk);
  CHECK(r.out == slurp(kSource / "tests/golden/gap_gap2.json"));
  const Json s = Json::parse(r.out)["summary"];
  CHECK(s["kappa"].get<double>() == doctest::Approx(4.0 / 3.0).epsilon(1e-9));
  CHECK(s["bound"].get<double>() == doctest::Approx(1.5819767).epsilon(1e-6));
  CHECK(s["satisfied"] == true);
}

TEST_CASE("timing is reported unless disabled") {
  auto c = config("gap", "gap2.json");
  CHECK_FALSE(Json::parse(exec(c).out).contains("wall_clock_seconds"));
  c.timing = true;
  CHECK(Json::parse(exec(c).out).contains("wall_clock_seconds"));
}

TEST_CASE("csv output lists one row per record") {
  auto c = config("gap", "gap2.json");
  c.format = "csv";
  const auto r = exec(c);
  CHECK(r.code == kExitOk);
  CHECK(r.out == "set,alpha\n\"[\"\"a\"\"]\",0.5\n\"[\"\"b\"\"]\",0.5\n");
}

TEST_CASE("gen is deterministic per seed") {
  for (const char* kind : {"steiner", "ufl", "set_cover", "vertex_cover", "gap", "slp"}) {
    CAPTURE(kind);
    auto c = config("gen");
    c.kind = kind;
    c.seed = 11;
    const auto a = exec(c), b = exec(c);
    REQUIRE(a.code == kExitOk);
    CHECK(a.out == b.out);
    c.seed = 12;
    CHECK(exec(c).out != a.out);
  }
}

TEST_CASE("generated steiner instances are connected") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto c = config("gen");
    c.kind = "steiner";
    c.seed = seed;
    c.size_a = 6;
    c.size_b = 8;
    const auto inst = two_stage_from_json(run(c));
    CHECK(inst.problem.feasible(inst.problem.all_elements(), inst.problem.all_clients()));
  }
}

TEST_CASE("generated coverage functions are monotone and submodular") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto c = config("gen");
    c.kind = "gap";
    c.seed = seed;
    c.size_a = 5;
    c.size_b = 6;
    const auto g = gap_from_json(run(c));
    CHECK(check_monotone(g.f).passed);
    CHECK(check_submodular(g.f).passed);
  }
}

TEST_CASE("exit codes") {
  Scratch tmp;

  SUBCASE("missing seed on a stochastic command") {
    const auto r = exec(config("run-boost", "edge1.json"));
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find("--seed") != std::string::npos);
  }
  SUBCASE("refuses to overwrite without force") {
    auto c = config("gap", "gap2.json");
    c.output_path = (tmp.dir / "out.json").string();
    write(c.output_path, "keep");
    CHECK(exec(c).code == kExitUsage);
    CHECK(slurp(c.output_path) == "keep");
    c.force = true;
    CHECK(exec(c).code == kExitOk);
    CHECK(Json::parse(slurp(c.output_path))["passed"] == true);
  }
  SUBCASE("schema errors name the field") {
    const fs::path bad = tmp.dir / "bad.json";
    write(bad, R"({"clients": ["a"], "elements": [{"id": "e", "cost": -1}], "problem": {"kind": "set_cover", "sets": [["a"]]}})");
    auto c = config("solve-det");
    c.instance_path = bad.string();
    const auto r = exec(c);
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find("elements") != std::string::npos);
  }
  SUBCASE("malformed JSON") {
    const fs::path bad = tmp.dir / "bad.json";
    write(bad, "{\"clients\": [");
    auto c = config("solve-det");
    c.instance_path = bad.string();
    CHECK(exec(c).code == kExitUsage);
  }
  SUBCASE("failed check") {
    const fs::path sup = tmp.dir / "super.json";
    write(sup, R"({"items": ["a", "b"], "marginals": [0.5, 0.5], "function": {"kind": "table", "values": [0, 0, 0, 1]}})");
    auto c = config("check");
    c.instance_path = sup.string();
    c.suite = "submodularity";
    const auto r = exec(c);
    CHECK(r.code == kExitCheckFailed);
    CHECK(Json::parse(r.out)["passed"] == false);
  }
  SUBCASE("cap exceeded") {
    auto g = config("gen");
    g.kind = "set_cover";
    g.seed = 3;
    g.size_a = 8;
    g.output_path = (tmp.dir / "big.json").string();
    REQUIRE(exec(g).code == kExitOk);
    auto c = config("check");
    c.instance_path = g.output_path;
    c.suite = "strictness";
    CHECK(exec(c).code == kExitCap);
  }
  SUBCASE("unknown suite") {
    auto c = config("check", "tri3.json");
    c.suite = "nonsense";
    CHECK(exec(c).code == kExitUsage);
  }
  SUBCASE("ind-boost needs independent activation") {
    auto c = config("run-indboost", "tri3.json");
    c.seed = 1;
    CHECK(exec(c).code == kExitUsage);
  }
}

TEST_CASE("saa trace file") {
  Scratch tmp;
  auto g = config("gen");
  g.kind = "slp";
  g.seed = 4;
  g.output_path = (tmp.dir / "slp.json").string();
  REQUIRE(exec(g).code == kExitOk);
  auto c = config("run-saa");
  c.instance_path = g.output_path;
  c.seed = 9;
  c.trace_path = (tmp.dir / "trace.csv").string();
  const auto r = exec(c);
  REQUIRE(r.code == kExitOk);
  const std::string trace = slurp(c.trace_path);
  CHECK(trace.rfind("iteration,value,step\n", 0) == 0);
  const Json s = Json::parse(r.out)["summary"];
  CHECK(s["h_x_hat"].get<double>() <= s["guarantee_rhs"].get<double>());
}
