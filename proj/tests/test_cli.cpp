#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef ARITHVOL_CLI_PATH
#error "ARITHVOL_CLI_PATH must point at the built binary"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Pulls the first numeric value following `"key": ` out of a JSON dump.
double json_number(const std::string& text, const std::string& key) {
  const std::string needle = "\"" + key + "\": ";
  const std::size_t at = text.find(needle);
  REQUIRE(at != std::string::npos);
  return std::strtod(text.c_str() + at + needle.size(), nullptr);
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const std::string out_path =
      "cli_out_" + std::to_string(counter++) + ".tmp";
  const std::string cmd = std::string(ARITHVOL_CLI_PATH) + " " + args + " > " +
                          out_path + " 2> /dev/null";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = (status >= 0 && status % 256 == 0) ? status / 256 : status;
#ifdef WEXITSTATUS
  r.exit_code = WEXITSTATUS(status);
#endif
  r.out = slurp(out_path);
  std::remove(out_path.c_str());
  return r;
}

}  // namespace

TEST_CASE("classify emits a schema-1 JSON verdict") {
  const RunResult r = run_cli("classify --a 2,2");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"schema\": 1") != std::string::npos);
  CHECK(r.out.find("\"ample\": true") != std::string::npos);
  CHECK(r.out.find("\"label\": \"Ample\"") != std::string::npos);
  CHECK(r.out.find("\"a_rational\"") != std::string::npos);
}

TEST_CASE("volume and degree agree with the closed forms") {
  const RunResult v = run_cli("volume --a 1,1");
  CHECK(v.exit_code == 0);
  CHECK(json_number(v.out, "value") == Catch::Approx(0.5).margin(1e-7));
  const RunResult d = run_cli("degree --a 2,2 --tol 1e-9");
  CHECK(d.exit_code == 0);
  CHECK(json_number(d.out, "value") ==
        Catch::Approx(0.5 + std::log(2.0)).margin(1e-7));
}

TEST_CASE("exact rational inputs round-trip") {
  const RunResult r = run_cli("classify --a 0.4,2/5");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"2/5\"") != std::string::npos);
  CHECK(r.out.find("\"label\": \"NotPsef\"") != std::string::npos);
}

TEST_CASE("domain errors exit with code 2") {
  const RunResult r = run_cli("zariski --a 0.4,0.4");
  CHECK(r.exit_code == 2);
  CHECK(r.out.empty());
}

TEST_CASE("parse errors exit with code 1") {
  CHECK(run_cli("classify --a banana,1").exit_code == 1);
  CHECK(run_cli("classify --a 1").exit_code == 1);
  CHECK(run_cli("volume").exit_code == 1);
  CHECK(run_cli("no-such-command").exit_code == 1);
}

TEST_CASE("budget errors exit with code 3") {
  const RunResult r =
      run_cli("sections --a 3,3 --l 6 --max-scans 1000");
  CHECK(r.exit_code == 3);
}

TEST_CASE("sections JSON carries the basis and the count") {
  const RunResult r = run_cli("sections --a 1,1 --l 2");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"count\": 13") != std::string::npos);
  CHECK(r.out.find("\"boundary\": true") != std::string::npos);
}

TEST_CASE("count brackets and exact counts") {
  const RunResult r = run_cli("count --a 1,1 --l 1 --mode exact");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"count\": \"9\"") != std::string::npos);
  const RunResult b = run_cli("count --a 2,2 --levels 50,100");
  CHECK(b.exit_code == 0);
  CHECK(b.out.find("\"normalized_low\"") != std::string::npos);
}

TEST_CASE("zariski JSON plus CSV profile") {
  const std::string prof = "cli_profile.tmp";
  const RunResult r = run_cli("zariski --a 1/2,1/2 --profile " + prof +
                              " --points 11");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"vartheta\": 0.5") != std::string::npos);
  CHECK(r.out.find("\"mu\"") != std::string::npos);
  const std::string csv = slurp(prof);
  std::remove(prof.c_str());
  CHECK(csv.rfind("r,g_a,p_a,n_a\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 12);
}

TEST_CASE("geography CSV has one row per cell plus a header") {
  const RunResult r = run_cli("geography --resolution 8");
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("a0,a1,ample,nef,big,pseudo_effective,label\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 65);
}

TEST_CASE("theta outline emits function samples") {
  const RunResult r = run_cli("theta --a 2,1/2 --samples 9");
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("x,phi_tilde\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 10);
}

TEST_CASE("gram entries are exact rational strings") {
  const RunResult r = run_cli("gram --a 1,1 --l 1");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"value\": \"1/2\"") != std::string::npos);
}

TEST_CASE("fujita certificate carries the delta and the trace") {
  const RunResult r = run_cli("fujita --a 1,1 --epsilon 0.05");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"q\": 16") != std::string::npos);
  CHECK(r.out.find("\"delta\": 0.03125") != std::string::npos);
  CHECK(r.out.find("\"1/16\"") != std::string::npos);
}

TEST_CASE("output is byte-identical across reruns") {
  const RunResult a = run_cli("volume --a 2,1/2 --tol 1e-7");
  const RunResult b = run_cli("volume --a 2,1/2 --tol 1e-7");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  const RunResult c = run_cli("fujita --a 2,2 --epsilon 0.1");
  const RunResult d = run_cli("fujita --a 2,2 --epsilon 0.1");
  CHECK(c.out == d.out);
  CHECK_FALSE(c.out.empty());
}

TEST_CASE("--out writes the same bytes to a file") {
  const std::string path = "cli_file.tmp";
  const RunResult direct = run_cli("classify --a 1,1");
  const RunResult filed = run_cli("classify --a 1,1 --out " + path);
  CHECK(filed.exit_code == 0);
  CHECK(filed.out.empty());
  CHECK(slurp(path) == direct.out);
  std::remove(path.c_str());
}
