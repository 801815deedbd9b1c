#include "cascade_vqa/cli.hpp"

#include <CLI11.hpp>

#include <ios>
#include <ostream>

#include "cascade_vqa/errors.hpp"
#include "common.hpp"

namespace cvqa::cli {

namespace {

void add_campaign_options(CLI::App& cmd, CampaignOptions& o, bool cascade) {
  cmd.add_option("-c,--config", o.config, "JSON campaign config");
  cmd.add_option("--qubits", o.qubits, "Grid qubits (multiple of 3)");
  cmd.add_option("--family", o.family, "Ansatz family, e.g. RxRyCnot");
  cmd.add_option("--params", o.params, "Parameter count (selects the depth)");
  cmd.add_option("--reps", o.reps, "Entangling repetitions");
  cmd.add_option("--final-layer", o.final_layer, "single or double");
  if (!cascade) cmd.add_option("--strategy", o.strategy, "cold, uniform or cascade");
  cmd.add_option("--runs", o.runs, "Number of independent runs");
  cmd.add_option("--max-evals", o.max_evals, "Cost evaluations per run");
  cmd.add_option("--time-budget", o.time_budget, "Wall-clock seconds per run (0 = none)");
  cmd.add_option("--trust-radius", o.trust_radius, "Initial trust radius (radians)");
  cmd.add_option("--method", o.method, "newuoa or nelder-mead");
  cmd.add_option("--seed", o.seed, "Master seed");
  cmd.add_option("--jobs", o.jobs, "Parallel runs (default $CASCADE_VQA_JOBS or 1)");
  cmd.add_option("-o,--output", o.output, "Campaign output directory");
  auto* src = cmd.add_option("--source", o.source, "Coarse campaign directory or run JSON");
  if (cascade) src->required();
  cmd.add_option("--min-source-accuracy", o.min_source_accuracy,
                 "Minimum energy accuracy (%) of the cascade source");
}

void add_state_options(CLI::App& cmd, StateOptions& o) {
  cmd.add_option("--state", o.state, "Statevector file");
  cmd.add_option("--campaign", o.campaign, "Campaign directory (uses best_state.bin and config.json)");
  cmd.add_option("-c,--config", o.config, "JSON config providing the grid section");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variational solver for the FEM heat equation with cascade warm starts",
               "cascade_vqa"};
  app.require_subcommand(1);

  SolveOptions solve;
  auto* solve_cmd = app.add_subcommand("solve", "Assemble the system and solve it classically");
  solve_cmd->add_option("-c,--config", solve.config, "JSON config with a grid section");
  solve_cmd->add_option("--qubits", solve.qubits, "Grid qubits (multiple of 3)");
  solve_cmd->add_option("-o,--output", solve.output, "Output directory");
  solve_cmd->add_flag("--mtx", solve.export_mtx, "Also write K and f in Matrix Market format");

  CampaignOptions campaign;
  auto* campaign_cmd = app.add_subcommand("campaign", "Run seeded optimization runs");
  add_campaign_options(*campaign_cmd, campaign, false);

  CampaignOptions cascade;
  auto* cascade_cmd =
      app.add_subcommand("cascade", "Campaign warm-started from a coarser campaign");
  add_campaign_options(*cascade_cmd, cascade, true);

  SampleOptions sample;
  auto* sample_cmd = app.add_subcommand("sample", "Finite-shot sampling of a stored state");
  add_state_options(*sample_cmd, sample.input);
  sample_cmd->add_option("--shots", sample.shots, "Number of shots")->capture_default_str();
  sample_cmd->add_option("--seed", sample.seed, "Sampling seed")->capture_default_str();
  sample_cmd->add_option("-o,--output", sample.output, "Directory for shots.json and sample.json");

  StateOptions metrics;
  auto* metrics_cmd = app.add_subcommand("metrics", "Energy accuracy and fidelity of a stored state");
  add_state_options(*metrics_cmd, metrics);

  SliceOptions slice;
  auto* slice_cmd = app.add_subcommand("slice", "Export a 2D slice of the temperature field");
  add_state_options(*slice_cmd, slice.input);
  slice_cmd->add_flag("--classical", slice.classical, "Slice the classical solution instead");
  slice_cmd->add_option("--axis", slice.axis, "Slice normal: x, y or z")->capture_default_str();
  slice_cmd->add_option("--layer", slice.layer, "Layer index (default: middle)");
  slice_cmd->add_option("--format", slice.format, "csv or pgm")->capture_default_str();
  slice_cmd->add_option("--upsample", slice.upsample, "Lanczos-3 upsampling factor")
      ->capture_default_str();
  slice_cmd->add_option("-o,--output", slice.output, "Output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(solve, out, err);
    if (campaign_cmd->parsed()) return cmd_campaign(campaign, false, out, err);
    if (cascade_cmd->parsed()) return cmd_campaign(cascade, true, out, err);
    if (sample_cmd->parsed()) return cmd_sample(sample, out, err);
    if (metrics_cmd->parsed()) return cmd_metrics(metrics, out, err);
    if (slice_cmd->parsed()) return cmd_slice(slice, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputMissing;
  } catch (const OutputError& e) {
    err << "output error: " << e.what() << '\n';
    return kOutputError;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const NoSuccessfulRuns& e) {
    err << "error: " << e.what() << '\n';
    return kNoSuccessfulRuns;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kUsage;
}

}  // namespace cvqa::cli
