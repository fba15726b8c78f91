#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(QPHASE_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  int raw = pclose(p);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("density CSV schema") {
  auto r = run("density --f constant --y-max 3.2 --steps 5");
  REQUIRE(r.status == 0);
  auto ls = lines(r.out);
  REQUIRE(ls.size() == 6);
  CHECK(ls[0] == "y,density");
  CHECK(ls[3].rfind("0,0.3183098861", 0) == 0);
}

TEST_CASE("density has a zero at pi for the constant") {
  auto r = run("density --f constant --y-min 3.141592653589793 --y-max 4 --steps 2");
  REQUIRE(r.status == 0);
  auto ls = lines(r.out);
  REQUIRE(ls.size() == 3);
  double d = std::stod(ls[1].substr(ls[1].find(',') + 1));
  CHECK(d < 1e-20);
}

TEST_CASE("tails CSV schema and explicit ladder") {
  auto r = run("tails --f dirichlet --m 1 --y 2,4");
  REQUIRE(r.status == 0);
  auto ls = lines(r.out);
  REQUIRE(ls.size() == 5);
  CHECK(ls[0] == "f_label,y,tail,log_tail,flagged");
  CHECK(ls[1].rfind("dirichlet_1,2,", 0) == 0);
  CHECK(ls[3].rfind("min_tail,2,", 0) == 0);
}

TEST_CASE("JSON output parses") {
  auto r = run("--format json lambda --R 2");
  REQUIRE(r.status == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["lambda"].get<double>() == doctest::Approx(0.8805599223).epsilon(1e-9));
  auto cr = nlohmann::json::parse(run("--format json cramer-rao --f constant").out);
  CHECK(cr["variance"].is_null());
}

TEST_CASE("sampling is reproducible from the seed") {
  auto a = run("--seed 17 sample --f dirichlet --m 1 --n 20 --count 50");
  auto b = run("--seed 17 sample --f dirichlet --m 1 --n 20 --count 50");
  auto c = run("--seed 18 sample --f dirichlet --m 1 --n 20 --count 50");
  REQUIRE(a.status == 0);
  CHECK(lines(a.out)[0] == "index,theta_hat");
  CHECK(lines(a.out).size() == 51);
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);
}

TEST_CASE("exit codes") {
  CHECK(run("density --f nope").status == 2);
  CHECK(run("no-such-command").status == 2);
  CHECK(run("design-interval --beta 0.9 --n 5").status == 2);
  CHECK(run("design-interval --beta 0.001 --n 200").status == 2);
  CHECK(run("--grid-points 16 prolate --R 30").status == 2);
  CHECK(run("required-applications --f constant --B 1 --eps 1e-12").status == 2);
  CHECK(run("verify variance").status == 0);
}

TEST_CASE("design-interval coverage row") {
  auto r = run("design-interval --beta 0.9 --n 100 --trials 10000");
  REQUIRE(r.status == 0);
  auto ls = lines(r.out);
  REQUIRE(ls.size() == 2);
  CHECK(ls[0] == "beta,n,trials,coverage,stderr");
  CHECK(ls[1].rfind("0.9,100,10000,", 0) == 0);
}
