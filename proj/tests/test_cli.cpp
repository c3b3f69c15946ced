#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run img(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + IMG_BINARY + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  Run r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("img-cli-test-" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("group") {
  const Run r = img("--format json group --level 4");
  CHECK(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["order"] == 64);
  CHECK(j["abelian_invariants"] == Json::array({2, 4}));
  CHECK(j["centralizers"]["a3"] == 8);
  const Run t = img("group --level 7");
  CHECK(t.code == 0);
  CHECK(t.out.find("G         512") != std::string::npos);
}

TEST_CASE("arith") {
  const Run r = img("--format json arith --level 4");
  const Json j = Json::parse(r.out);
  CHECK(j["order_M"] == 256);
  CHECK(j["maximal_subgroups"] == 15);
  CHECK(j["growth"].size() == 4);
  // exit status mirrors the checks
  CHECK((r.code == 0) == j["checks"]["passed"].get<bool>());
  CHECK(Json::parse(img("--format json arith --level 2").out)["order_M"] == 8);
}

TEST_CASE("disc") {
  const Run r = img("disc --n 1");
  CHECK(r.code == 0);
  CHECK(r.out.find("n=1  +2^3 * t^1 * (2-t)^0") == 0);
  const Json j = Json::parse(img("--format json disc").out);
  CHECK(j["rows"].size() == 4);
  CHECK(j["rows"][1]["D"] == "-16");
}

TEST_CASE("maximality") {
  const Run one = img("--format json maximality --a 1");
  CHECK(one.code == 0);
  CHECK(Json::parse(one.out)["verdict"] == "not_maximal");
  const Run five = img("--format json maximality --a 5");
  CHECK(five.code == 0);
  const Json j = Json::parse(five.out);
  CHECK(j["a"] == "5/1");
  CHECK(j["primes_tried"] == 1228);
  const std::string v = j["verdict"];
  CHECK((v == "maximal" || v == "inconclusive"));
  CHECK(j["eliminations"].size() + j["surviving"].size() == 15);
  for (const auto& e : j["eliminations"]) {
    CHECK(e["subgroup"].get<std::string>().rfind("Mmax-", 0) == 0);
    CHECK(e["cycle_type"].is_array());
  }
  CHECK(Json::parse(img("--format json maximality --a -10/4").out)["a"] == "-5/2");
  CHECK(img("maximality --a 6/3").code == 2);
}

TEST_CASE("radical") {
  const Run r = img("--format json radical --samples 3 --seed 4");
  CHECK(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["points"].size() == 3);
  CHECK(j["checks"]["passed"] == true);
}

TEST_CASE("exit codes") {
  CHECK(img("maximality --a 0").code == 2);
  CHECK(img("maximality --a 2").code == 2);
  CHECK(img("maximality --a 1/0").code == 2);
  CHECK(img("maximality --a five").code == 2);
  CHECK(img("group --level 4 --bogus").code == 2);
  CHECK(img("frobnicate").code == 2);
  CHECK(img("").code == 2);
  CHECK(img("group").code == 2);
  CHECK(img("group --level 0").code == 2);
  CHECK(img("--format xml disc").code == 2);
  CHECK(img("group --level 9").code == 3);
  CHECK(img("arith --level 6").code == 3);
  CHECK(img("disc --n 5").code == 3);
  CHECK(img("radical --precision 8").code == 2);
  CHECK(img("--help").code == 0);
}

TEST_CASE("config file") {
  TempDir dir;
  const fs::path good = dir.path / "good.conf", bad = dir.path / "bad.conf";
  std::ofstream(good) << "# caps\ndisc_cap = 3\n";
  std::ofstream(bad) << "disc_cap = 3\nmystery = 1\n";
  CHECK(img("--config " + good.string() + " disc --n 4").code == 3);
  CHECK(Json::parse(img("--format json --config " + good.string() + " disc").out)["rows"].size() == 3);
  CHECK(img("--config " + bad.string() + " disc").code == 2);
  CHECK(img("--config " + (dir.path / "missing").string() + " disc").code == 2);
}

TEST_CASE("deterministic output") {
  for (const char* args : {"--format json arith --level 4", "--format json radical --samples 4",
                           "--format json maximality --a 7/3", "--format json disc"}) {
    CHECK(img(args).out == img(args).out);
  }
}

TEST_CASE("cache is advisory") {
  TempDir dir;
  const std::string flag = "--cache-dir " + dir.path.string() + " ";
  const Run fresh = img(flag + "--format json arith --level 4");
  const Run nocache = img("--format json arith --level 4");
  bool any = false;
  for (const auto& e : fs::directory_iterator(dir.path)) {
    any = true;
    std::string text;
    {
      std::ifstream in(e.path());
      text.assign(std::istreambuf_iterator<char>(in), {});
    }
    if (text.size() > 20) text[text.size() / 3] ^= 4;
    std::ofstream(e.path()) << text;
  }
  CHECK(any);
  const Run corrupted = img(flag + "--format json arith --level 4");
  const Run warm = img(flag + "--format json arith --level 4");
  auto strip = [](const std::string& s) {
    Json j = Json::parse(s);
    j.erase("stats");
    return j.dump();
  };
  CHECK(strip(fresh.out) == strip(nocache.out));
  CHECK(strip(corrupted.out) == strip(fresh.out));
  CHECK(strip(warm.out) == strip(fresh.out));
  CHECK(corrupted.code == fresh.code);

  TempDir env;
  img("--format json arith --level 3", "IMG_CACHE_DIR=" + env.path.string());
  CHECK_FALSE(fs::is_empty(env.path));
}

TEST_CASE("verify quick mode") {
  const Run r = img("--format json verify --level 3");
  const Json j = Json::parse(r.out);
  CHECK(j["total"].get<std::size_t>() >= 25);
  bool allPass = true;
  for (const auto& c : j["claims"]) allPass = allPass && c["passed"].get<bool>();
  CHECK(j["passed"] == allPass);
  CHECK((r.code == 0) == allPass);
  if (!allPass) CHECK(r.code == 1);
  CHECK(img("--format json verify --level 3").out == r.out);
}
