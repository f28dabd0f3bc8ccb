#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

// stdout only; stderr goes to a side file so manifests do not pollute output
Result run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + CAPLAB_CLI + " " + args + " 2>" + (fs::temp_directory_path() / "caplab_cli_err.txt").string();
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string stderr_text() {
  std::ifstream is(fs::temp_directory_path() / "caplab_cli_err.txt");
  return {std::istreambuf_iterator<char>(is), {}};
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("caplab_cli_" + std::to_string(::getpid()))) { fs::create_directories(path); }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& text = "") const {
    const auto p = (path / name).string();
    if (!text.empty()) std::ofstream(p) << text;
    return p;
  }
};

}  // namespace

TEST_CASE("help and version") {
  auto h = run("--help");
  CHECK(h.code == 0);
  for (const char* sub : {"capacity", "julia", "curvature", "measures", "motion", "transforms", "classify", "props"})
    CHECK(h.out.find(sub) != std::string::npos);
  CHECK(run("--version").code == 0);
  CHECK(run("").code == 2);
}

TEST_CASE("capacity of the unit disk") {
  TempDir t;
  const auto disk = t.file("disk.json", R"({"kind":"disk","center":[0,0],"radius":1})");
  auto r = run("capacity --set " + disk + " --engine rules");
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["value"] == 1.0);
  CHECK(j["kind"] == "exact");
  CHECK(j.dump().rfind(R"({"value":1.0,"kind":"exact")", 0) == 0);
  // manifest on stderr when only stdout was written
  const auto m = json::parse(stderr_text());
  CHECK(m["command"] == "capacity");
  CHECK(m["parameters"]["engine"] == "rules");
  CHECK(m["outputs"] == json::array({"-"}));
}

TEST_CASE("exit codes") {
  TempDir t;
  const auto bad = t.file("bad.json", "{\n  \"kind\": \"disk\",\n  \"center\": [0, 0]\n  \"radius\": 1\n}\n");
  auto r = run("capacity --set " + bad);
  CHECK(r.code == 2);
  CHECK(stderr_text().find(bad + ":4:") != std::string::npos);

  CHECK(run("capacity --set circle --engin rules").code == 2);
  CHECK(stderr_text().find("did you mean --engine") != std::string::npos);
  CHECK(run("capacity --set circle --engine magic").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("capacity --set /nonexistent/x.json").code == 2);

  // a computation the engines cannot do: γ of a Cantor-type Julia set
  const auto cantor = t.file("cantor.json", R"({"kind":"julia","c":[1,0]})");
  CHECK(run("capacity --set " + cantor).code == 1);
  CHECK_FALSE(stderr_text().empty());
}

TEST_CASE("outputs and manifests") {
  TempDir t;
  const auto out = t.file("scan.csv");
  auto r = run("motion scan --set circle --lambdas \"1/3,0\" --obs gamma,alpha --out " + out);
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  const auto csv = slurp(out);
  CHECK(csv.rfind("lambda_re,lambda_im,observable,value,kind,notes\n", 0) == 0);
  CHECK(csv.find("0.3333333333333333,0,gamma_leja,") != std::string::npos);
  CHECK(csv.find("0,0,alpha_rules,0,exact") != std::string::npos);
  CHECK(csv.find("0.3333333333333333,0,alpha_rules,1,exact") != std::string::npos);
  const auto man = json::parse(slurp(out + ".manifest.json"));
  CHECK(man["outputs"] == json::array({out}));
  CHECK(man["parameters"]["obs"] == "gamma,alpha");
  CHECK(man["version"].is_string());
  CHECK(man.contains("wall_clock_seconds"));

  const auto extra = t.file("copy.json");
  CHECK(run("--manifest " + extra + " classify --set circle").code == 0);
  CHECK(json::parse(slurp(extra))["command"] == "classify");
}

TEST_CASE("determinism") {
  const std::string scan = "motion scan --set circle --lambdas \"1/2,1/4,0\" --obs gamma,length,box_dim --depths 8 --box-depth 10";
  auto a = run("--threads 1 " + scan), b = run("--threads 4 " + scan), c = run(scan);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);

  auto s1 = run("--seed 9 julia sample --c 0.2 --n 50");
  auto s2 = run("julia sample --c 0.2 --n 50", "CAPLAB_SEED=9");
  auto s3 = run("--seed 10 julia sample --c 0.2 --n 50");
  REQUIRE(s1.code == 0);
  CHECK(s1.out == s2.out);
  CHECK(s1.out != s3.out);
  CHECK(json::parse(stderr_text())["seed"]["source"] == "flag");
  CHECK(run("julia sample --n 5", "CAPLAB_SEED=abc").code == 2);
}

TEST_CASE("blaschke scan replicates the inner row at each zero") {
  auto inner = run("motion scan --set circle --lambdas 0 --obs gamma,alpha,length --depths 8");
  auto rep = run("motion blaschke --set circle --zero-list \"0.3,0.5i,-0.7\" --obs gamma,alpha,length --depths 8");
  REQUIRE(inner.code == 0);
  REQUIRE(rep.code == 0);
  // strip the λ columns and compare the rest
  auto tails = [](const std::string& csv) {
    std::vector<std::string> out;
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line)) out.push_back(line.substr(line.find(',', line.find(',') + 1)));
    return out;
  };
  const auto a = tails(inner.out), b = tails(rep.out);
  REQUIRE(b.size() == 3 * a.size());
  for (std::size_t i = 0; i < b.size(); ++i) CHECK(b[i] == a[i % a.size()]);
}

TEST_CASE("other subcommands") {
  TempDir t;
  auto len = run("julia length --c 0 --depths 6,7");
  REQUIRE(len.code == 0);
  CHECK(len.out.rfind("depth,n_angles,length\n6,64,", 0) == 0);

  const auto d0 = t.file("d0.json", R"([{"z":[0,0],"w":1}])");
  auto ct = run("transforms cauchy --measure " + d0 + " --at 2,0");
  CHECK(ct.out == "re,im,value_re,value_im\n2,0,-0.5,0\n");
  CHECK(run("transforms cauchy --measure " + d0 + " --at 0,0").code == 1);

  const auto g = t.file("g.bin"), dg = t.file("dg.bin");
  CHECK(run("transforms sample --function conj --spacing 0.125 --width 9 --height 9 --out " + g).code == 0);
  CHECK(fs::exists(g + ".json"));
  CHECK(run("transforms dbar --in " + g + " --out " + dg).code == 0);
  CHECK(fs::file_size(dg) == 40 + 16 * 81);

  auto cur = run("curvature --set circle --n 60");
  REQUIRE(cur.code == 0);
  CHECK(json::parse(cur.out)["total_curvature"].get<double>() > 0.9);

  auto cls = run("classify --set circle");
  REQUIRE(cls.code == 0);
  CHECK(json::parse(cls.out)["conditions"].size() == 7);

  auto pr = run("--seed 3 props --suite curvature");
  CHECK(pr.code == 0);
  CHECK(json::parse(pr.out)["passed"] == true);
}
