// Command-line front end: experiment runner plus file-based CP and discord
// certification. Exit codes: 0 pass, 1 internal error, 2 invalid input,
// 3 verdict fail.

#include <iostream>

#include <CLI11.hpp>

#include "oqslab/io.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitFail = 3;

void emit_error(const std::string& error, const std::string& detail) {
  oqslab::json j;
  j["error"] = error;
  j["detail"] = detail;
  std::cerr << oqslab::dump_json(j) << std::endl;
}

int run_command(const std::string& name, oqslab::ExperimentConfig cfg,
                const std::string& out_path,
                const std::string& unitary_file,
                const std::string& delta_file) {
  if (!unitary_file.empty())
    cfg.unitary_override = oqslab::matrix_from_json(
        oqslab::parse_file(unitary_file));
  if (!delta_file.empty())
    cfg.delta_override =
        oqslab::matrix_from_json(oqslab::parse_file(delta_file));
  const oqslab::ExperimentReport rep = oqslab::run_experiment(name, cfg);
  const oqslab::json j = oqslab::report_to_json(rep);
  if (out_path.empty()) {
    std::cout << oqslab::dump_json(j) << std::endl;
  } else {
    std::ofstream out(out_path);
    if (!out) throw oqslab::ParseError("cannot write: " + out_path);
    oqslab::dump_json_to(out, j);
    out << '\n';
  }
  return rep.verdict ? kExitPass : kExitFail;
}

int check_cp_command(const std::string& path, double cp_tol) {
  const oqslab::Superoperator l = oqslab::load_superop(path);
  const oqslab::CPVerdict v = oqslab::cp_verdict(l, cp_tol);
  std::cout << oqslab::dump_json(oqslab::cp_verdict_to_json(v)) << std::endl;
  return v.is_cp ? kExitPass : kExitFail;
}

int discord_command(const std::string& path, double discord_tol,
                    double gap_tol) {
  const oqslab::BipartiteState rho = oqslab::load_bipartite(path);
  const oqslab::DiscordVerdict v =
      oqslab::zero_discord_test(rho, discord_tol, gap_tol);
  std::cout << oqslab::dump_json(oqslab::discord_verdict_to_json(v))
            << std::endl;
  return v.is_zero ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Open-system dynamics laboratory: assignment families, induced maps, "
      "CP certification, and discord testing"};
  app.require_subcommand(1);

  std::string experiment;
  std::string out_path;
  std::string unitary_file;
  std::string delta_file;
  oqslab::ExperimentConfig cfg;

  auto* run = app.add_subcommand("run", "Run a named experiment");
  run->add_option("experiment", experiment,
                  "One of: folklore-cp, property1-witness, "
                  "hadamard-constraint, theorem2-pipeline, commuting-gap, "
                  "sl-necessity")
      ->required();
  run->add_option("--dim-s", cfg.dim_s, "System dimension")->check(CLI::Range(2, 64));
  run->add_option("--dim-b", cfg.dim_b, "Bath dimension")->check(CLI::Range(2, 64));
  run->add_option("--trials", cfg.trials, "Trial / sample count")
      ->check(CLI::PositiveNumber);
  run->add_option("--seed", cfg.seed, "Master 64-bit seed");
  run->add_option("--eps", cfg.eps, "Correlation strength (sl-necessity)");
  run->add_option("--budget", cfg.budget, "Unitary search budget")
      ->check(CLI::PositiveNumber);
  run->add_option("--cp-tol", cfg.cp_tol, "CP tolerance");
  run->add_option("--discord-tol", cfg.discord_tol, "Discord tolerance");
  run->add_option("--gap-tol", cfg.gap_tol, "Spectral gap tolerance");
  run->add_option("--out", out_path, "Report output path (default stdout)");
  run->add_option("--unitary-file", unitary_file,
                  "Matrix file overriding the sampled joint unitary");
  run->add_option("--delta-file", delta_file,
                  "Matrix file overriding the sampled perturbation");

  std::string map_path;
  auto* check_cp = app.add_subcommand(
      "check-cp", "Certify complete positivity of a superoperator file");
  check_cp->add_option("map", map_path, "Superoperator JSON file")->required();
  check_cp->add_option("--cp-tol", cfg.cp_tol, "CP tolerance");

  std::string state_path;
  auto* discord = app.add_subcommand(
      "discord", "Classify a bipartite state file as zero-discord or not");
  discord->add_option("state", state_path, "Bipartite state JSON file")
      ->required();
  discord->add_option("--discord-tol", cfg.discord_tol, "Discord tolerance");
  discord->add_option("--gap-tol", cfg.gap_tol, "Spectral gap tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    emit_error("invalid arguments", e.what());
    return kExitInvalid;
  }

  try {
    if (run->parsed())
      return run_command(experiment, cfg, out_path, unitary_file, delta_file);
    if (check_cp->parsed()) return check_cp_command(map_path, cfg.cp_tol);
    if (discord->parsed())
      return discord_command(state_path, cfg.discord_tol, cfg.gap_tol);
    emit_error("invalid arguments", "no subcommand given");
    return kExitInvalid;
  } catch (const oqslab::ParseError& e) {
    emit_error("invalid input", e.what());
    return kExitInvalid;
  } catch (const oqslab::Error& e) {
    emit_error("computation failed", e.what());
    return kExitInternal;
  } catch (const std::exception& e) {
    emit_error("internal error", e.what());
    return kExitInternal;
  }
}
