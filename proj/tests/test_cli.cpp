#include <doctest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "mgen/io.hpp"
#include "mgen/search.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = mgen::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("mgen_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("verify reports the F_5 counterexample with both oracles") {
  TempDir dir;
  mgen::write_file(dir.file("s.txt"), "format=1\n5^1:0.1 1 3\n1\n2\n4\n");
  const auto r = run({"verify", dir.file("s.txt"), "-m", "3", "--oracle", "both"});
  CHECK(r.code == mgen::cli::kFalse);
  CHECK(r.out.find("geometric: not 3-general") != std::string::npos);
  CHECK(r.out.find("arithmetic: not 3-general") != std::string::npos);
  CHECK(r.out.find("note: m > n") != std::string::npos);
  CHECK(r.err.find("DISAGREEMENT") == std::string::npos);
}

TEST_CASE("construct then verify: 8 points for n = 6") {
  TempDir dir;
  const auto c = run({"construct", "--n", "6", "--out", dir.file("six.txt")});
  REQUIRE(c.code == mgen::cli::kOk);
  const auto v = run({"verify", dir.file("six.txt")});
  CHECK(v.code == mgen::cli::kOk);
  CHECK(v.out.find("set: 8 points") != std::string::npos);
  CHECK(v.out.find("result: 4-general") != std::string::npos);
  const auto file = mgen::read_set_file(mgen::read_file(dir.file("six.txt")));
  CHECK(file.set.size() == 8);
  CHECK(file.m == 4);
  CHECK_FALSE(file.comments.empty());

  const auto stdout_copy = run({"construct", "--n", "6"});
  CHECK(stdout_copy.out == mgen::read_file(dir.file("six.txt")));
}

TEST_CASE("verify with an explicit oracle") {
  TempDir dir;
  run({"construct", "--n", "4", "--out", dir.file("four.txt")});
  CHECK(run({"verify", dir.file("four.txt"), "--oracle", "arithmetic"}).code == mgen::cli::kOk);
  // four affinely independent points are m-general for every m
  CHECK(run({"verify", dir.file("four.txt"), "-m", "6", "--oracle", "geometric"}).code == mgen::cli::kOk);
  const auto small = run({"verify", dir.file("four.txt"), "-m", "5", "--oracle", "arithmetic"});
  CHECK(small.code == mgen::cli::kUsage);
  run({"construct", "--n", "6", "--out", dir.file("six.txt")});
  CHECK(run({"verify", dir.file("six.txt"), "-m", "8", "--oracle", "both"}).code == mgen::cli::kFalse);
  const auto skip = run({"verify", dir.file("four.txt"), "-m", "6", "--oracle", "both"});
  CHECK(skip.out.find("arithmetic: skipped") != std::string::npos);
  CHECK(run({"verify", dir.file("four.txt"), "-m", "9"}).code == mgen::cli::kUsage);
  CHECK(run({"verify", dir.file("four.txt"), "--oracle", "psychic"}).code == mgen::cli::kUsage);
  CHECK(run({"verify", dir.file("missing.txt")}).code == mgen::cli::kUsage);
}

TEST_CASE("arithmetic oracle alone refuses sets smaller than m") {
  TempDir dir;
  mgen::write_file(dir.file("tiny.txt"), "format=1\n3^1:0.1 2 4\n0 0\n1 0\n0 1\n");
  const auto r = run({"verify", dir.file("tiny.txt"), "--oracle", "arithmetic"});
  CHECK(r.code == mgen::cli::kUsage);
  CHECK(r.err.find("precondition violated") != std::string::npos);
}

TEST_CASE("table 2 strings") {
  const auto r = run({"table", "--which", "2"});
  CHECK(r.code == mgen::cli::kOk);
  CHECK(r.out.find("format=1") != std::string::npos);
  CHECK(r.out.find("4,.500\n5,.500\n6,.334\n7,.334\n8,.250\n") != std::string::npos);
}

TEST_CASE("table 1 layout") {
  const auto r = run({"table", "--which", "1"});
  CHECK(r.code == mgen::cli::kOk);
  CHECK(r.out.find("m,2,3,4,5,7,8,9,11\n") != std::string::npos);
  CHECK(r.out.find("\n3,,.922,,.929,") != std::string::npos);
  CHECK(r.out.find("\n4,.811,.820,") != std::string::npos);
  CHECK(run({"table", "--which", "3"}).code == mgen::cli::kUsage);
}

TEST_CASE("bounds output") {
  const auto csv = run({"bounds", "--q", "2", "--m", "4", "--n", "4,6", "--csv"});
  CHECK(csv.code == mgen::cli::kOk);
  CHECK(csv.out.rfind("# format=1\nq,m,n,k,main,refined,bennett,t_star,mu_main,mu_bennett\n2,4,4,2,7.65685,6.17891,",
                      0) == 0);
  const auto text = run({"bounds", "--q", "3", "--m", "3", "--n", "3"});
  CHECK(text.code == mgen::cli::kOk);
  CHECK(text.out.find("main_bound=NA") != std::string::npos);
  CHECK(run({"bounds", "--q", "6", "--m", "4", "--n", "4"}).code == mgen::cli::kUsage);
  CHECK(run({"bounds", "--q", "2", "--m", "4"}).code == mgen::cli::kUsage);
  CHECK(run({"bounds", "--q", "2", "--m", "2", "--n", "4"}).code == mgen::cli::kUsage);
}

TEST_CASE("identical invocations give identical bytes") {
  TempDir dir;
  const std::vector<std::vector<std::string>> cmds = {
      {"bounds", "--q", "5", "--m", "6", "--n", "2,3,10", "--csv"},
      {"table", "--which", "1"},
      {"construct", "--n", "9"},
      {"search", "--n", "3", "--q", "3", "--m", "3", "--greedy", "--seed", "4", "--restarts", "7"},
  };
  for (const auto& c : cmds) CHECK(run(c).out == run(c).out);
}

TEST_CASE("search writes certificates that check accepts") {
  TempDir dir;
  const auto s = run({"search", "--n", "2", "--q", "3", "--m", "3", "--exact", "--out", dir.file("c.json")});
  CHECK(s.code == mgen::cli::kOk);
  CHECK(s.out.find("value=4 exact=true") != std::string::npos);
  const auto cert = mgen::certificate_from_json(mgen::read_file(dir.file("c.json")));
  CHECK(cert.value == 4);
  const auto c = run({"check", dir.file("c.json")});
  CHECK(c.code == mgen::cli::kOk);
  CHECK(c.out == "certificate: ok\n");

  const auto g = run({"search", "--n", "2", "--q", "2^2:1.1.1", "--m", "3", "--greedy", "--out", dir.file("g.json")});
  CHECK(g.code == mgen::cli::kOk);
  CHECK(run({"check", dir.file("g.json")}).code == mgen::cli::kOk);
}

TEST_CASE("check distinguishes failures") {
  TempDir dir;
  run({"search", "--n", "2", "--q", "3", "--m", "3", "--out", dir.file("c.json")});
  std::string text = mgen::read_file(dir.file("c.json"));

  mgen::write_file(dir.file("broken.json"), text.substr(0, text.size() / 2));
  const auto broken = run({"check", dir.file("broken.json")});
  CHECK(broken.code == mgen::cli::kUsage);
  CHECK(broken.out.rfind("certificate: malformed", 0) == 0);

  std::string inflated = text;
  inflated.replace(inflated.find("\"value\": 4"), 10, "\"value\": 5");
  mgen::write_file(dir.file("inflated.json"), inflated);
  const auto bad = run({"check", dir.file("inflated.json")});
  CHECK(bad.code == mgen::cli::kFalse);
  CHECK(bad.out.rfind("certificate: value-mismatch", 0) == 0);

  // Put three collinear points into the witness.
  auto cert = mgen::certificate_from_json(text);
  cert.witness = mgen::PointSet(cert.ambient, {mgen::Point::of({0, 0}), mgen::Point::of({0, 1}),
                                               mgen::Point::of({0, 2}), mgen::Point::of({1, 0})});
  mgen::write_file(dir.file("line.json"), mgen::certificate_to_json(cert));
  const auto line = run({"check", dir.file("line.json")});
  CHECK(line.code == mgen::cli::kFalse);
  CHECK(line.out.rfind("certificate: not-m-general", 0) == 0);

  std::string outside = text;
  const auto at = outside.find("\"0 0\"");
  REQUIRE(at != std::string::npos);
  outside.replace(at, 5, "\"0 7\"");
  mgen::write_file(dir.file("outside.json"), outside);
  CHECK(run({"check", dir.file("outside.json")}).code == mgen::cli::kFalse);
}

TEST_CASE("search stopped by limits exits with code 3") {
  TempDir dir;
  const auto r =
      run({"search", "--n", "6", "--q", "3", "--m", "3", "--max-nodes", "50", "--out", dir.file("cut.json")});
  CHECK(r.code == mgen::cli::kLimits);
  CHECK(r.out.find("exact=false") != std::string::npos);
  CHECK(run({"check", dir.file("cut.json")}).code == mgen::cli::kOk);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == mgen::cli::kUsage);
  CHECK(run({"frobnicate"}).code == mgen::cli::kUsage);
  CHECK(run({"search", "--n", "2", "--q", "3", "--m", "3", "--exact", "--greedy"}).code == mgen::cli::kUsage);
  CHECK(run({"search", "--n", "2", "--q", "3", "--m", "5"}).code == mgen::cli::kUsage);
  CHECK(run({"construct", "--n", "1"}).code == mgen::cli::kUsage);
  const auto e = run({"construct", "--n", "1"});
  CHECK(e.err.find("n >= 2") != std::string::npos);
  CHECK(run({"--help"}).code == mgen::cli::kOk);
  CHECK(run({"--version"}).out == std::string(mgen::kToolVersion) + "\n");
}

TEST_CASE("modulus table option and environment fallback") {
  TempDir dir;
  mgen::write_file(dir.file("table.txt"), "2 3 1 0 1 1\n");
  const auto r = run({"--modulus-table", dir.file("table.txt"), "construct", "--n", "6"});
  CHECK(r.code == mgen::cli::kOk);
  CHECK(r.out.find("2^1:0.1 6 4") != std::string::npos);
  CHECK(r.out.find("modulus=1.0.1.1") != std::string::npos);
  ::setenv("MGEN_MODULUS_TABLE", dir.file("table.txt").c_str(), 1);
  const auto env = run({"construct", "--n", "6"});
  ::unsetenv("MGEN_MODULUS_TABLE");
  CHECK(env.out == r.out);
  CHECK(run({"--modulus-table", dir.file("nope.txt"), "construct", "--n", "6"}).code == mgen::cli::kUsage);
}
