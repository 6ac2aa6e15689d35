#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "slinv/cli.hpp"

namespace {

struct Common {
  slinv::cli::SolverFlags solver;
  std::optional<std::string> out;
  std::optional<long long> seed;  // reserved; every algorithm is deterministic
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--steps", c.solver.steps, "RK4 steps on [0,1]")->check(CLI::Range(16, 1000000));
  cmd->add_option("--scan-per-pi", c.solver.scan_points_per_pi, "scan points per pi of frequency")
      ->check(CLI::Range(8, 100000));
  cmd->add_option("--tol", c.solver.root_tolerance, "root tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", c.seed, "reserved, unused");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace slinv;
  CLI::App app{"Forward and inverse solver for Sturm-Liouville problems with non-separated boundary conditions"};
  app.require_subcommand(1);
  Common common;

  auto* forward = app.add_subcommand("forward", "fundamental solutions and determinants at one lambda");
  std::string forward_problem;
  double lambda = 0.0;
  forward->add_option("problem", forward_problem, "problem file")->required();
  forward->add_option("--lambda", lambda, "spectral parameter")->required();
  add_common(forward, common);

  auto* spectrum = app.add_subcommand("spectrum", "first eigenvalues of L, L1 or L2 as CSV");
  std::string spectrum_problem, kind_text = "L";
  int count = 10;
  spectrum->add_option("problem", spectrum_problem, "problem file")->required();
  spectrum->add_option("--kind", kind_text, "L, L1 or L2")->check(CLI::IsMember({"L", "L1", "L2"}));
  spectrum->add_option("--count", count, "number of eigenvalues")->check(CLI::PositiveNumber);
  spectrum->add_option("--out", common.out, "output CSV (default stdout)");
  add_common(spectrum, common);

  auto* invert = app.add_subcommand("invert", "recover the problem from the spectra of L, L1 and L2");
  std::string csv_l, csv_l1, csv_l2;
  int basis_size = 6;
  invert->add_option("L", csv_l, "spectrum of L")->required();
  invert->add_option("L1", csv_l1, "spectrum of L1")->required();
  invert->add_option("L2", csv_l2, "spectrum of L2")->required();
  invert->add_option("--basis-size", basis_size, "highest cosine index of the recovered potential")
      ->check(CLI::NonNegativeNumber);
  invert->add_option("--out", common.out, "recovered problem file")->required();
  add_common(invert, common);

  auto* decompose = app.add_subcommand("decompose", "fit the large-s basis to the full determinant");
  std::string decompose_problem;
  double s_min = 20.0;
  std::optional<double> s_max;
  int samples = cli::kDefaultDecomposeSamples;
  decompose->add_option("problem", decompose_problem, "problem file")->required();
  decompose->add_option("--s-min", s_min, "lowest frequency (>= 20)");
  decompose->add_option("--s-max", s_max, "highest frequency (default s-min + 10 pi)");
  decompose->add_option("--samples", samples, "number of samples (>= 25)");
  decompose->add_option("--out", common.out, "output report (default stdout)");
  add_common(decompose, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kInputError;
  }

  std::optional<cli::Path> out;
  if (common.out) out = *common.out;

  if (*forward) return cli::cmd_forward(forward_problem, lambda, common.solver, std::cout, std::cerr);
  if (*spectrum)
    return cli::cmd_spectrum(spectrum_problem, *parse_problem_kind(kind_text), count, out,
                             common.solver, std::cout, std::cerr);
  if (*invert)
    return cli::cmd_invert(csv_l, csv_l1, csv_l2, basis_size, *out, common.solver, std::cout,
                           std::cerr);
  return cli::cmd_decompose(decompose_problem, s_min, s_max, samples, out, common.solver,
                            std::cout, std::cerr);
}
