#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using std::numbers::pi;

namespace {

struct Run {
  int rc = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(HYPERHARM_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// Rows of a CSV without quoted fields, after the "# key: value" lines and the header.
std::vector<std::vector<double>> csv_rows(const std::string& text, std::vector<std::string>* header = nullptr) {
  std::istringstream is(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  bool seen_header = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    if (!seen_header) {
      seen_header = true;
      if (header) *header = cells;
      continue;
    }
    std::vector<double> v;
    for (const auto& s : cells) v.push_back(s.empty() ? NAN : std::stod(s));
    rows.push_back(v);
  }
  return rows;
}

std::string tmp(const std::string& name) { return std::string(CLI_TMP_DIR) + "/" + name; }

}  // namespace

TEST_CASE("characters: jacobi table against sin(x)/sinh(x)") {
  const auto r = run("characters --instance jacobi_sl2c --lambda 1 --xmax 5 --points 11");
  REQUIRE(r.rc == 0);
  CHECK(r.out.find("# seed: ") != std::string::npos);
  CHECK(r.out.find("# computes: ") != std::string::npos);
  CHECK(r.out.find("# grid: ") != std::string::npos);
  CHECK(r.out.find("# tolerances: ") != std::string::npos);
  std::vector<std::string> head;
  const auto rows = csv_rows(r.out, &head);
  REQUIRE(rows.size() == 11);
  REQUIRE(head[3] == "closed_re");
  for (const auto& row : rows) {
    const double x = row[0];
    const double ref = x == 0.0 ? 1.0 : std::sin(x) / std::sinh(x);
    CHECK(std::abs(row[3] - ref) < 1e-14);
    CHECK(std::abs(row[5] - ref) < 1e-7);
    CHECK(row[7] < 1e-7);
  }
}

TEST_CASE("characters: mehler lambda = 0 is positive and decreasing") {
  const auto r = run("characters --instance mehler_fock --lambda 0 --xmax 5 --points 26");
  REQUIRE(r.rc == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 26);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i][3] > 0.0);
    if (i) CHECK(rows[i][3] < rows[i - 1][3]);
  }
}

TEST_CASE("usage errors exit with 1") {
  CHECK(run("characters --points 0").rc == 1);
  CHECK(run("characters --lambda ''").rc == 1);
  CHECK(run("characters --instance nowhere").rc == 1);
  CHECK(run("transform --f nothing").rc == 1);
  CHECK(run("geom --n 1").rc == 1);
  CHECK(run("verify --only no_such_criterion").rc == 1);
  CHECK(run("").rc == 1);
}

TEST_CASE("transform: Mehler-Fock transform of sech(x/2)") {
  const auto r = run("transform --instance mehler_fock --f sech_half --lambda 0.5,1,2,4");
  REQUIRE(r.rc == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 4);
  for (const auto& row : rows) {
    const double l = row[0];
    const double ref = 2.0 / (l * std::sinh(pi * l));
    CHECK(std::abs(row[2] / ref - 1.0) < 1e-6);
  }
}

TEST_CASE("transform: Mellin transform of h_2") {
  const auto r = run("transform --mellin --f h_N --N 2 --s 0.5i,1i,2i --format json");
  REQUIRE(r.rc == 0);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j["rows"].size() == 3);
  for (const auto& row : j["rows"]) {
    const double tau = row[1].get<double>();
    CHECK(std::abs(row[2].get<double>() * std::cosh(pi * tau / 4.0) - 1.0) < 1e-7);
  }
  CHECK(j["metadata"].contains("seed"));
}

TEST_CASE("transform: inversion round trips") {
  const auto r = run("transform --inverse --instance mehler_fock --f sech_half --x 0.2,1,3");
  REQUIRE(r.rc == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 3);
  for (const auto& row : rows) CHECK(std::abs(row[1] - 1.0 / std::cosh(0.5 * row[0])) < 1e-4);
  const auto m = run("transform --mellin --inverse --f h_N --N 2 --x 0.5,2");
  REQUIRE(m.rc == 0);
  for (const auto& row : csv_rows(m.out)) {
    const double x = row[0];
    CHECK(std::abs(row[1] - 4.0 / pi * x * x / (1.0 + x * x * x * x)) < 1e-6);
  }
}

TEST_CASE("opcalc: A = 0 gives f^(0) times I") {
  {
    std::ofstream f(tmp("zero.json"));
    f << "[[0, 0], [0, 0]]";
  }
  const auto r = run("opcalc --matrix " + tmp("zero.json") + " --emit ta --center 0 --width 1");
  REQUIRE(r.rc == 0);
  // phi_0(x) = x / sinh x, so T_0(f) = int_0^1 (1 - x^2)^8 x sinh x dx; Simpson
  const int n = 4000;
  auto g = [](double x) { return std::pow(1.0 - x * x, 8) * x * std::sinh(x); };
  double s = g(0.0) + g(1.0);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * g(static_cast<double>(i) / n);
  s /= 3.0 * n;
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 4);
  for (const auto& row : rows) {
    const double expect = row[0] == row[1] ? s : 0.0;
    CHECK(std::abs(row[2] - expect) < 1e-10);
    CHECK(row[3] == 0.0);
  }
}

TEST_CASE("opcalc: seeded batteries give identical bytes") {
  const auto a = run("opcalc --emit homomorphism --trials 2 --seed 11");
  const auto b = run("opcalc --emit homomorphism --trials 2 --seed 11");
  REQUIRE(a.rc == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("# seed: 11") != std::string::npos);
  CHECK(a.out.find("# rng: splitmix64-counter") != std::string::npos);
  const auto c = run("opcalc --emit homomorphism --trials 2 --seed 12");
  CHECK(c.out != a.out);
  const auto s = run("opcalc --emit sweep --xmax 3 --dim 3");
  REQUIRE(s.rc == 0);
  for (const auto& row : csv_rows(s.out)) CHECK(row[1] <= row[2] + 1e-8);
}

TEST_CASE("verify: subset, fault injection, report") {
  const auto ok = run("verify --only hypergroup_axioms");
  REQUIRE(ok.rc == 0);
  const auto j = nlohmann::json::parse(ok.out);
  CHECK(j["all_passed"] == true);
  REQUIRE(j["criteria"].size() == 1);
  CHECK(j["criteria"][0]["name"] == "hypergroup_axioms");

  const auto bad = run("verify --only plancherel_round_trips --inject-fault plancherel");
  CHECK(bad.rc == 2);
  const auto jb = nlohmann::json::parse(bad.out);
  CHECK(jb["all_passed"] == false);
  REQUIRE(jb["failing"].size() == 1);
  CHECK(jb["failing"][0] == "plancherel_round_trips");

  const auto a1 = run("verify --only laplace_bounds,geometry_witnesses --seed 3");
  const auto a2 = run("verify --only laplace_bounds,geometry_witnesses --seed 3");
  CHECK(a1.out == a2.out);
}

TEST_CASE("config file sets defaults and flags override it") {
  {
    std::ofstream f(tmp("cfg.json"));
    f << R"({"characters": {"instance": "jacobi_sl2c", "lambda": [2], "points": 4, "xmax": 3}})";
  }
  const auto r = run("--config " + tmp("cfg.json") + " characters");
  REQUIRE(r.rc == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0][1] == 2.0);
  CHECK(rows.back()[0] == 3.0);
  const auto o = run("--config " + tmp("cfg.json") + " characters --points 2");
  REQUIRE(o.rc == 0);
  CHECK(csv_rows(o.out).size() == 2);
  {
    std::ofstream f(tmp("bad.json"));
    f << "{not json";
  }
  CHECK(run("--config " + tmp("bad.json") + " characters").rc == 1);
}

TEST_CASE("geom witnesses are nonpositive") {
  const auto r = run("geom --n 2,4,6 --points 30");
  REQUIRE(r.rc == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 90);
  for (const auto& row : rows) {
    CHECK(row[2] <= 0.0);
    CHECK(row[3] <= 0.0);
    CHECK(row[4] <= 1e-8);
    CHECK(std::abs(row[5] - (row[0] - 1.0)) < 1e-3);
  }
}
