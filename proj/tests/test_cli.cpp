#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() /
          ("pcurl-cli-" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string file(const std::string& name, const std::string& body) const {
    fs::path p = dir / name;
    std::ofstream(p, std::ios::binary) << body;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

RunResult run(const Scratch& s, const std::string& args) {
  fs::path so = s.dir / "stdout.txt";
  fs::path se = s.dir / "stderr.txt";
  std::string cmd = std::string(PCURL_BIN) + " " + args + " > " + so.string() +
                    " 2> " + se.string();
  int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(so);
  r.err = slurp(se);
  return r;
}

}  // namespace

TEST_CASE("norm subcommand reproduces the closed forms") {
  Scratch s;
  std::string two_step = s.file("two.dat", "2 1\n1 7\n");
  RunResult r = run(s, "lorentz " + two_step + " --m 3 --p 1");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "9.00000000000\n");

  std::string indicator = s.file("ind.dat", "# comment line\n1 8\n");
  r = run(s, "lorentz " + indicator + " --m 3 --p 1");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "6.00000000000\n");

  r = run(s, "lorentz " + indicator + " --m 3 --p inf");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "2.00000000000\n");
}

TEST_CASE("norm subcommand rejects bad data files") {
  Scratch s;
  std::string empty = s.file("empty.dat", "");
  RunResult r = run(s, "lorentz " + empty + " --m 3 --p 1");
  CHECK(r.exit_code == 2);

  std::string malformed = s.file("bad.dat", "1 1\n2 3 4\n");
  r = run(s, "lorentz " + malformed + " --m 3 --p 1");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("line 2") != std::string::npos);

  std::string negative = s.file("neg.dat", "-1 1\n");
  r = run(s, "lorentz " + negative + " --m 3 --p 1");
  CHECK(r.exit_code == 2);
}

TEST_CASE("configuration errors exit 2 and write nothing") {
  Scratch s;
  std::string cfg = s.file("nop.cfg", "nx = 8\nny = 8\nnz = 8\n");
  RunResult r = run(s, "solve --config " + cfg + " --out " + s.path("out1"));
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("p") != std::string::npos);
  CHECK_FALSE(fs::exists(s.path("out1") + "/summary.json"));

  std::string unknown =
      s.file("unk.cfg", "p = 2\nnx = 8\nny = 8\nnz = 8\nbogus_key = 1\n");
  r = run(s, "solve --config " + unknown + " --out " + s.path("out2"));
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("bogus_key") != std::string::npos);

  std::string badsched = s.file(
      "sched.cfg", "p = 1.5\nnx = 8\nny = 8\nnz = 8\neps_schedule = 1e-2,0\n");
  r = run(s, "solve --config " + badsched + " --out " + s.path("out3"));
  CHECK(r.exit_code == 2);

  r = run(s, "definitely-not-a-subcommand");
  CHECK(r.exit_code == 2);

  r = run(s, "--help");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("solve") != std::string::npos);
}

TEST_CASE("zero source solves trivially with full artifacts") {
  Scratch s;
  std::string cfg =
      s.file("zero.cfg", "p = 2\nnx = 6\nny = 6\nnz = 6\nsource = zero\n");
  std::string out = s.path("out");
  RunResult r = run(s, "solve --config " + cfg + " --out " + out);
  CHECK(r.exit_code == 0);
  REQUIRE(fs::exists(out + "/summary.json"));
  CHECK(fs::exists(out + "/u.field"));
  CHECK(fs::exists(out + "/curl_u.field"));
  CHECK(fs::exists(out + "/curl_mag.field"));
  CHECK(fs::exists(out + "/trace.csv"));

  nlohmann::json summary = nlohmann::json::parse(slurp(out + "/summary.json"));
  CHECK(summary["result"]["converged"].get<bool>());
  CHECK(summary["result"]["total_iterations"].get<int>() == 0);
  CHECK(summary["result"]["norm_curl_inf"].get<double>() == 0.0);
}

TEST_CASE("repeated runs are byte-identical and the config echo reruns") {
  Scratch s;
  std::string cfg = s.file("m.cfg",
                           "p = 2\nnx = 8\nny = 8\nnz = 8\n"
                           "source = manufactured\ngrad_tol = 1e-7\n");
  RunResult r1 = run(s, "solve --config " + cfg + " --out " + s.path("a"));
  RunResult r2 = run(s, "solve --config " + cfg + " --out " + s.path("b"));
  REQUIRE(r1.exit_code == 0);
  REQUIRE(r2.exit_code == 0);
  CHECK(slurp(s.path("a") + "/u.field") == slurp(s.path("b") + "/u.field"));
  CHECK(slurp(s.path("a") + "/summary.json") ==
        slurp(s.path("b") + "/summary.json"));

  // The echoed configuration is complete: rerunning from it reproduces the
  // fields byte for byte.
  nlohmann::json summary =
      nlohmann::json::parse(slurp(s.path("a") + "/summary.json"));
  std::ostringstream echo;
  for (auto& [key, value] : summary["config"].items())
    echo << key << " = " << value.get<std::string>() << "\n";
  std::string cfg2 = s.file("echo.cfg", echo.str());
  RunResult r3 = run(s, "solve --config " + cfg2 + " --out " + s.path("c"));
  REQUIRE(r3.exit_code == 0);
  CHECK(slurp(s.path("a") + "/u.field") == slurp(s.path("c") + "/u.field"));
}

TEST_CASE("solver failure exits 3 but keeps the report") {
  Scratch s;
  std::string cfg = s.file("cap.cfg",
                           "p_list = 3\nn_list = 8\nseed_list = 1\n"
                           "max_iters = 10\n");
  std::string out = s.path("out");
  RunResult r = run(s, "verify --config " + cfg + " --out " + out);
  CHECK(r.exit_code == 3);
  REQUIRE(fs::exists(out + "/reports.json"));
  nlohmann::json reports = nlohmann::json::parse(slurp(out + "/reports.json"));
  CHECK(reports["verification"]["reports"][0]["converged"].get<bool>() ==
        false);
  CHECK(fs::exists(out + "/table.csv"));
}

TEST_CASE("estimate violation exits 4 with the flag on stderr") {
  Scratch s;
  std::string cfg = s.file("flag.cfg",
                           "p_list = 3\nn_list = 4,8\nseed_list = 4\n"
                           "smoothness = 6\n");
  std::string out = s.path("out");
  RunResult r = run(s, "verify --config " + cfg + " --out " + out);
  CHECK(r.exit_code == 4);
  CHECK(r.err.find("c_emp_inf grew") != std::string::npos);
  REQUIRE(fs::exists(out + "/reports.json"));
  nlohmann::json reports = nlohmann::json::parse(slurp(out + "/reports.json"));
  CHECK(reports["verification"]["any_flag"].get<bool>());
}

TEST_CASE("refinement command emits the study table") {
  Scratch s;
  std::string cfg = s.file("conv.cfg", "n_list = 8\n");
  std::string out = s.path("out");
  RunResult r = run(s, "convergence --config " + cfg + " --out " + out);
  CHECK(r.exit_code == 0);
  REQUIRE(fs::exists(out + "/convergence.json"));
  nlohmann::json j = nlohmann::json::parse(slurp(out + "/convergence.json"));
  REQUIRE(j["rows"].size() == 1);
  CHECK(j["rows"][0]["order_curl_max"].is_null());
  REQUIRE(fs::exists(out + "/convergence.csv"));
  CHECK(slurp(out + "/convergence.csv").find("err_curl_max") != std::string::npos);
  CHECK(r.out.find("err(curl)") != std::string::npos);
}
