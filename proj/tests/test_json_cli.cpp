#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <string>

#include "matrixcs/corpus.hpp"
#include "matrixcs/ensembles.hpp"
#include "matrixcs/matrix_json.hpp"

using namespace matrixcs;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

/// Runs the CLI binary (path from MATRIXCS_CLI) with the given arguments,
/// capturing stdout+stderr.
RunResult run_cli(const std::string &args, const std::string &env = "") {
  const char *cli = std::getenv("MATRIXCS_CLI");
  REQUIRE(cli != nullptr);
  const std::string cmd = env + " '" + std::string(cli) + "' " + args + " 2>&1";
  std::array<char, 4096> buffer{};
  std::string output;
  FILE *pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  size_t n;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
    output.append(buffer.data(), n);
  const int status = pclose(pipe);
  RunResult r;
  r.output = output;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

} // namespace

TEST_CASE("matrix JSON: round trip preserves every entry") {
  RngStream rng(257);
  const CMatrix m = draw_ginibre(rng, 4);
  const CMatrix back = matrix_from_string(matrix_to_string(m));
  CHECK((back - m).norm() == 0.0);

  save_matrix("/tmp/matrixcs_roundtrip.json", m);
  const CMatrix loaded = load_matrix("/tmp/matrixcs_roundtrip.json");
  CHECK((loaded - m).norm() == 0.0);
}

TEST_CASE("matrix JSON: malformed documents are rejected") {
  CHECK_THROWS_AS(matrix_from_string("not json"), Error);
  CHECK_THROWS_AS(matrix_from_string("{\"rows\":2,\"cols\":2,\"data\":[[1,0]]}"),
                  Error);
  CHECK_THROWS_AS(matrix_from_string("{\"rows\":0,\"cols\":1,\"data\":[]}"), Error);
  CHECK_THROWS_AS(
      matrix_from_string("{\"rows\":1,\"cols\":1,\"data\":[[1,0,0]]}"), Error);
  CHECK_THROWS_AS(load_matrix("/nonexistent/matrix.json"), Error);
}

TEST_CASE("cli: unknown check name exits 2 with a diagnostic") {
  const RunResult r = run_cli("verify --checks nosuch");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("nosuch") != std::string::npos);
}

TEST_CASE("cli: bad subcommand usage exits 2") {
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("verify --format yaml").exit_code == 2);
  CHECK(run_cli("verify --dims 1").exit_code == 2);
}

TEST_CASE("cli: repeated verify runs are byte-identical") {
  const std::string args =
      "verify --checks check_nee1 --trials 1 --dims 3 --seed 7";
  const RunResult a = run_cli(args + " --output /tmp/matrixcs_rep_a.json");
  const RunResult b = run_cli(args + " --output /tmp/matrixcs_rep_b.json");
  CHECK(a.exit_code == 0);
  CHECK(b.exit_code == 0);
  CHECK(read_file("/tmp/matrixcs_rep_a.json") ==
        read_file("/tmp/matrixcs_rep_b.json"));
}

TEST_CASE("cli: eval --det on the identity prints 1") {
  save_matrix("/tmp/matrixcs_id3.json", CMatrix::Identity(3, 3));
  const RunResult r = run_cli("eval --det /tmp/matrixcs_id3.json");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("1") != std::string::npos);
}

TEST_CASE("cli: eval --kyfan 2 on |T| + |T*| prints 3") {
  const CMatrix t = counterexample_matrix();
  const PolarParts parts = polar_parts(t);
  save_matrix("/tmp/matrixcs_abs_sum.json",
              CMatrix(parts.abs_t + parts.abs_tstar));
  const RunResult r = run_cli("eval --kyfan 2 /tmp/matrixcs_abs_sum.json");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("3") != std::string::npos);
}

TEST_CASE("cli: eval --gm matches the library mean") {
  RngStream rng(263);
  const CMatrix a = draw_pd(rng, 3);
  const CMatrix b = draw_pd(rng, 3);
  save_matrix("/tmp/matrixcs_gm_a.json", a);
  save_matrix("/tmp/matrixcs_gm_b.json", b);
  const RunResult r =
      run_cli("eval --gm /tmp/matrixcs_gm_a.json /tmp/matrixcs_gm_b.json");
  CHECK(r.exit_code == 0);
  const CMatrix printed = matrix_from_string(r.output);
  CHECK((printed - geom_mean(a, b)).norm() < 1e-12);
}

TEST_CASE("cli: counterexample prints the sigma lists and exits 0") {
  const RunResult r = run_cli("counterexample");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("sigma(|T| + |T*|) = 2 1 1") != std::string::npos);
  CHECK(r.output.find("1.41421356237") != std::string::npos);
  CHECK(r.output.find("order violation confirmed") != std::string::npos);
}

TEST_CASE("cli: decompose diag(I2, I2) has residual 0") {
  save_matrix("/tmp/matrixcs_id4.json", CMatrix::Identity(4, 4));
  const RunResult r = run_cli(
      "decompose /tmp/matrixcs_id4.json --n 2 --outdir /tmp/matrixcs_dec");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("residual") != std::string::npos);
  const CMatrix u = load_matrix("/tmp/matrixcs_dec/u.json");
  const CMatrix top = load_matrix("/tmp/matrixcs_dec/top.json");
  CHECK((u.adjoint() * u - CMatrix::Identity(4, 4)).norm() < 1e-10);
  CHECK((top - CMatrix::Identity(2, 2)).norm() < 1e-10);
}

TEST_CASE("cli: decompose a random PSD block reconstructs") {
  RngStream rng(269);
  const CMatrix w = draw_psd(rng, 8);
  save_matrix("/tmp/matrixcs_block8.json", w);
  const RunResult r = run_cli("decompose /tmp/matrixcs_block8.json --n 4 "
                              "--outdir /tmp/matrixcs_dec8");
  CHECK(r.exit_code == 0);
}

TEST_CASE("cli: decompose rejects a non-PSD matrix with exit 4") {
  CMatrix m(2, 2);
  m << 1, 2, 2, 1;
  save_matrix("/tmp/matrixcs_notpsd.json", m);
  const RunResult r = run_cli("decompose /tmp/matrixcs_notpsd.json --n 1");
  CHECK(r.exit_code == 4);
  CHECK(r.output.find("lambda_min") != std::string::npos);
}

TEST_CASE("cli: decompose rejects unparseable input with exit 2") {
  std::ofstream("/tmp/matrixcs_garbage.json") << "not a matrix";
  const RunResult r = run_cli("decompose /tmp/matrixcs_garbage.json --n 1");
  CHECK(r.exit_code == 2);
}

TEST_CASE("cli: decompose --from-matrix runs the factor-block path") {
  RngStream rng(271);
  const CMatrix t = draw_ginibre(rng, 3);
  save_matrix("/tmp/matrixcs_t3.json", t);
  const RunResult r = run_cli("decompose /tmp/matrixcs_t3.json --from-matrix "
                              "--pair sqrt --outdir /tmp/matrixcs_dec_t");
  CHECK(r.exit_code == 0);
}

TEST_CASE("cli: MATRIXCS_THREADS does not change the report") {
  const std::string args = "verify --checks check_lemma04,check_thm02 "
                           "--trials 10 --dims 2,3 --seed 5";
  const RunResult one =
      run_cli(args + " --output /tmp/matrixcs_t1.json", "MATRIXCS_THREADS=1");
  const RunResult many =
      run_cli(args + " --output /tmp/matrixcs_t8.json", "MATRIXCS_THREADS=8");
  CHECK(one.exit_code == 0);
  CHECK(many.exit_code == 0);
  CHECK(read_file("/tmp/matrixcs_t1.json") == read_file("/tmp/matrixcs_t8.json"));
}
