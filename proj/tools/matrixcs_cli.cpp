// matrixcs command-line front end: corpus verification, the fixed
// counterexample demonstration, block decompositions, and scalar/matrix
// evaluation of user-supplied JSON matrices.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "matrixcs/blocks.hpp"
#include "matrixcs/corpus.hpp"
#include "matrixcs/matrix_json.hpp"
#include "matrixcs/means.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInconclusive = 3;
constexpr int kExitPrecondition = 4;

using matrixcs::CMatrix;
using matrixcs::Tolerance;

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

void print_matrix(const std::string &label, const CMatrix &m) {
  std::cout << label << " =\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::cout << " ";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const matrixcs::Complex z = m(i, j);
      std::cout << "  " << fmt(z.real());
      if (std::abs(z.imag()) > 0.0) std::cout << (z.imag() >= 0 ? "+" : "") << fmt(z.imag()) << "i";
    }
    std::cout << "\n";
  }
}

std::vector<std::string> split_list(const std::string &text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int cmd_verify(const matrixcs::RunConfig &config, const std::string &output_path,
               const std::string &format) {
  const matrixcs::Report report = matrixcs::run_corpus(config);
  const std::string rendered = (format == "csv") ? matrixcs::report_to_csv(report)
                                                 : matrixcs::report_to_json(report);
  if (output_path.empty()) {
    std::cout << rendered;
  } else {
    std::ofstream out(output_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot open " << output_path << " for writing\n";
      return kExitUsage;
    }
    out << rendered;
  }

  uint64_t failures = 0, inconclusive = 0, trials = 0;
  for (const auto &[id, s] : report.summary) {
    failures += s.failures;
    inconclusive += s.inconclusive;
    trials += s.trials;
  }
  std::cerr << "verify: " << trials << " outcomes, " << failures << " failures, "
            << inconclusive << " inconclusive\n";
  if (inconclusive > 0) return kExitInconclusive;
  return failures == 0 ? kExitPass : kExitFail;
}

int cmd_counterexample() {
  const Tolerance tol;
  const CMatrix t = matrixcs::counterexample_matrix();
  const matrixcs::PolarParts parts = matrixcs::polar_parts(t, tol);
  const CMatrix abs_sum = parts.abs_t + parts.abs_tstar;
  const CMatrix herm_sum = t + t.adjoint();

  print_matrix("T", t);
  print_matrix("|T| + |T*|", abs_sum);
  print_matrix("T + T*", herm_sum);

  const matrixcs::SvdDecomp s_abs = matrixcs::svd(abs_sum, tol);
  const matrixcs::SvdDecomp s_herm = matrixcs::svd(herm_sum, tol);
  std::cout << "sigma(|T| + |T*|) =";
  for (Eigen::Index i = 0; i < s_abs.singular_values.size(); ++i)
    std::cout << " " << fmt(s_abs.singular_values(i));
  std::cout << "\nsigma(T + T*)     =";
  for (Eigen::Index i = 0; i < s_herm.singular_values.size(); ++i)
    std::cout << " " << fmt(s_herm.singular_values(i));
  std::cout << "\n";

  const CMatrix abs_herm = matrixcs::polar_parts(herm_sum, tol).abs_t;
  const matrixcs::EigDecomp gap = matrixcs::herm_eig(CMatrix(abs_sum - abs_herm), tol);
  const Eigen::Index last = gap.eigenvalues.size() - 1;
  std::cout << "lambda_min(|T| + |T*| - |T + T*|) = " << fmt(gap.eigenvalues(last))
            << "\nviolating eigendirection =";
  for (Eigen::Index i = 0; i < gap.basis.rows(); ++i) {
    const matrixcs::Complex z = gap.basis(i, last);
    std::cout << " (" << fmt(z.real()) << ", " << fmt(z.imag()) << ")";
  }
  std::cout << "\n";

  const matrixcs::CheckOutcome o = matrixcs::reproduce_counterexample();
  std::cout << (o.pass ? "order violation confirmed: |T + T*| <= |T| + |T*| fails"
                       : "FAILED to confirm the order violation")
            << "\n";
  return o.pass ? kExitPass : kExitFail;
}

int cmd_decompose(const std::string &input_path, int split, bool from_matrix,
                  const std::string &pair_name, const std::string &outdir) {
  const Tolerance tol;
  const CMatrix input = matrixcs::load_matrix(input_path);
  matrixcs::PinchDecomp dec;
  CMatrix target;
  if (from_matrix) {
    const matrixcs::FactorPair pair = matrixcs::parse_pair(pair_name);
    dec = matrixcs::remark13_decompose(input, pair, tol);
    target = matrixcs::lemma03_block(input, pair, tol).assembled;
  } else {
    const Eigen::Index n = split > 0 ? split : input.rows() / 2;
    const matrixcs::PsdWitness cert = matrixcs::is_psd(input, tol);
    if (!cert.psd) {
      std::cerr << "error [NotPsd]: lambda_min = " << fmt(cert.lambda_min) << "\n";
      return kExitPrecondition;
    }
    dec = matrixcs::pinch_decompose(matrixcs::split_block(input, n), tol);
    target = input;
  }
  std::filesystem::create_directories(outdir.empty() ? "." : outdir);
  const std::string base = outdir.empty() ? "" : outdir + "/";
  matrixcs::save_matrix(base + "u.json", dec.u);
  matrixcs::save_matrix(base + "v.json", dec.v);
  matrixcs::save_matrix(base + "top.json", dec.top);
  matrixcs::save_matrix(base + "bottom.json", dec.bottom);
  const double residual = (dec.reconstruct() - target).norm();
  std::cout << "residual = " << fmt(residual) << "\n";
  return residual <= tol.slack(target.norm()) ? kExitPass : kExitFail;
}

int cmd_eval(const std::vector<std::string> &inputs, const std::string &functional,
             const std::string &norm, bool gm) {
  const Tolerance tol;
  if (gm) {
    if (inputs.size() != 2) {
      std::cerr << "error: --gm needs exactly two input files\n";
      return kExitUsage;
    }
    const CMatrix a = matrixcs::load_matrix(inputs[0]);
    const CMatrix b = matrixcs::load_matrix(inputs[1]);
    const CMatrix m = matrixcs::geom_mean(a, b, tol);
    std::cout << matrixcs::matrix_to_string(m) << "\n";
    return kExitPass;
  }
  if (inputs.size() != 1) {
    std::cerr << "error: eval needs exactly one input file\n";
    return kExitUsage;
  }
  const CMatrix m = matrixcs::load_matrix(inputs[0]);
  if (!norm.empty()) {
    const matrixcs::LiebFunctional f = matrixcs::parse_functional(norm);
    if (f.tag != matrixcs::LiebFunctional::Tag::UINorm) {
      std::cerr << "error: --norm expects a norm name\n";
      return kExitUsage;
    }
    std::cout << fmt(f.norm.eval(m, tol)) << "\n";
    return kExitPass;
  }
  const matrixcs::LiebFunctional f = matrixcs::parse_functional(
      functional.empty() ? std::string("det") : functional);
  const matrixcs::Complex v = matrixcs::lieb_eval(f, m, tol);
  if (std::abs(v.imag()) > tol.slack(std::abs(v)))
    std::cout << fmt(v.real()) << (v.imag() >= 0 ? "+" : "") << fmt(v.imag()) << "i\n";
  else
    std::cout << fmt(v.real()) << "\n";
  return kExitPass;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"matrixcs: matrix Cauchy-Schwarz verification harness"};
  app.require_subcommand(1);

  // verify
  matrixcs::RunConfig config;
  std::string dims_text = "2,3";
  std::string checks_text = "all";
  std::string functionals_text;
  std::string pairs_text;
  std::string output_path;
  std::string format = "json";
  auto *verify = app.add_subcommand("verify", "Run the verification corpus");
  verify->add_option("--seed", config.seed, "RNG seed");
  verify->add_option("--trials", config.trials, "Trials per check and dimension");
  verify->add_option("--dims", dims_text, "Comma-separated dimensions");
  verify->add_option("--tol-abs", config.tol_abs, "Absolute tolerance");
  verify->add_option("--tol-rel", config.tol_rel, "Relative tolerance");
  verify->add_option("--checks", checks_text, "Comma-separated check ids or 'all'");
  verify->add_option("--functionals", functionals_text,
                     "Comma-separated functional names (default family if empty)");
  verify->add_option("--pairs", pairs_text,
                     "Comma-separated factor-pair names (default family if empty)");
  verify->add_option("--threads", config.threads,
                     "Worker threads (0: MATRIXCS_THREADS or hardware)");
  verify->add_option("--output", output_path, "Write the report to this file");
  verify->add_option("--format", format, "Report format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  // counterexample
  auto *counter = app.add_subcommand(
      "counterexample", "Reproduce the 3x3 order-violation example");

  // decompose
  std::string dec_input;
  std::string dec_pair = "sqrt";
  std::string dec_outdir;
  int dec_split = 0;
  bool from_matrix = false;
  auto *decompose =
      app.add_subcommand("decompose", "Pinch-decompose a PSD block matrix");
  decompose->add_option("input", dec_input, "Matrix JSON file")->required();
  decompose->add_option("--n", dec_split, "Top block dimension (default: half)");
  decompose->add_flag("--from-matrix", from_matrix,
                      "Treat the input as a square T and decompose its factor block");
  decompose->add_option("--pair", dec_pair, "Factor pair for --from-matrix");
  decompose->add_option("--outdir", dec_outdir, "Directory for the output files");

  // eval
  std::vector<std::string> eval_inputs;
  std::string eval_functional;
  std::string eval_norm;
  bool eval_gm = false;
  bool flag_det = false, flag_per = false, flag_rho = false;
  int flag_kyfan = 0;
  double flag_schatten = 0.0;
  auto *eval = app.add_subcommand("eval", "Evaluate a functional, norm, or mean");
  eval->add_option("inputs", eval_inputs, "Matrix JSON file(s)")->required();
  eval->add_option("--functional", eval_functional,
                   "Functional name (det, per, rho, eK, norm names)");
  eval->add_option("--norm", eval_norm, "Norm name (operator, trace, ...)");
  eval->add_flag("--det", flag_det, "Determinant");
  eval->add_flag("--per", flag_per, "Permanent");
  eval->add_flag("--rho", flag_rho, "Spectral radius");
  eval->add_option("--kyfan", flag_kyfan, "Ky Fan k-norm");
  eval->add_option("--schatten", flag_schatten, "Schatten p-norm");
  eval->add_flag("--gm", eval_gm, "Geometric mean of two PD matrices");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (*verify) {
      config.dims.clear();
      for (const std::string &d : split_list(dims_text))
        config.dims.push_back(std::stoi(d));
      config.checks = split_list(checks_text);
      config.functionals = split_list(functionals_text);
      config.pairs = split_list(pairs_text);
      matrixcs::validate_config(config);
      return cmd_verify(config, output_path, format);
    }
    if (*counter) return cmd_counterexample();
    if (*decompose)
      return cmd_decompose(dec_input, dec_split, from_matrix, dec_pair, dec_outdir);
    if (*eval) {
      if (flag_det) eval_functional = "det";
      if (flag_per) eval_functional = "per";
      if (flag_rho) eval_functional = "rho";
      if (flag_kyfan > 0) eval_norm = "kyfan" + std::to_string(flag_kyfan);
      if (flag_schatten > 0) {
        std::ostringstream ss;
        ss << "schatten" << flag_schatten;
        eval_norm = ss.str();
      }
      return cmd_eval(eval_inputs, eval_functional, eval_norm, eval_gm);
    }
  } catch (const matrixcs::Error &e) {
    std::cerr << "error [" << matrixcs::error_code_name(e.code()) << "]: " << e.what()
              << "\n";
    switch (e.code()) {
    case matrixcs::ErrorCode::NotPsd:
    case matrixcs::ErrorCode::NotPositiveDefinite:
      return kExitPrecondition;
    case matrixcs::ErrorCode::NoConvergence:
    case matrixcs::ErrorCode::RootFindingFailed:
      return kExitInconclusive;
    default:
      return kExitUsage;
    }
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
