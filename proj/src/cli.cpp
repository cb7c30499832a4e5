#include "bmcap/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bmcap/capacity.hpp"
#include "bmcap/coding_sim.hpp"
#include "bmcap/common.hpp"
#include "bmcap/gm_reduction.hpp"
#include "bmcap/spec_io.hpp"

namespace bmcap {

namespace {

struct CommonOpts {
  double tol = 1e-9;
  int max_iter = 100000;
  std::uint64_t cap = kDefaultStrategyCap;
  bool serial = false;
  std::string out;

  SolverOptions solver() const {
    return {tol, max_iter, serial ? ExecMode::Serial : ExecMode::Parallel};
  }
};

void add_solver_flags(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--tol", opts.tol, "convergence gap, bits per channel use");
  cmd->add_option("--max-iter", opts.max_iter, "iteration limit");
  cmd->add_option("--cap", opts.cap, "strategy enumeration cap");
  cmd->add_flag("--serial", opts.serial, "disable OpenMP kernels");
  cmd->add_option("--out", opts.out, "write the result here instead of stdout");
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write output file: " + out_path);
  out << text;
}

int map_exception(const char* verb) {
  try {
    throw;
  } catch (const CapExceededError& e) {
    std::cerr << "bmcap " << verb << ": " << e.what() << "\n";
    return kExitCapExceeded;
  } catch (const ParseError& e) {
    std::cerr << "bmcap " << verb << ": " << e.what() << "\n";
    return kExitValidation;
  } catch (const ValidationError& e) {
    std::cerr << "bmcap " << verb << ": " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "bmcap " << verb << ": " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "bmcap " << verb << ": " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{
      "capacity of finite block-memoryless channels with causal side "
      "information at transmitter and receiver"};
  app.require_subcommand(1);

  std::string spec_path;

  // validate
  auto* validate = app.add_subcommand("validate", "check a channel spec file");
  validate->add_option("spec", spec_path, "spec file")->required();
  std::string validate_out;
  validate->add_option("--out", validate_out, "write the report here");
  validate->callback([&]() {
    BlockChannelSpec spec = parse_spec_unvalidated(spec_path);
    ValidationReport report = validate_spec(spec);
    emit(validation_report_json(report, spec.name), validate_out);
    if (!report.ok()) throw ValidationError("spec invalid");
  });

  // capacity
  auto* capacity = app.add_subcommand(
      "capacity", "capacity over causal strategy distributions");
  CommonOpts cap_opts;
  capacity->add_option("spec", spec_path, "spec file")->required();
  add_solver_flags(capacity, cap_opts);
  bool capacity_converged = true;
  capacity->callback([&]() {
    BlockChannelSpec spec = parse_spec(spec_path);
    CapacityResult result = capacity_bm(spec, cap_opts.solver(), cap_opts.cap);
    emit(capacity_result_json(result, spec.name), cap_opts.out);
    capacity_converged = result.converged;
  });

  // gm-capacity
  auto* gm = app.add_subcommand(
      "gm-capacity",
      "multiplexed-coding capacity (n0 = 1, CSIT a function of CSIR)");
  CommonOpts gm_opts;
  gm->add_option("spec", spec_path, "spec file")->required();
  add_solver_flags(gm, gm_opts);
  bool gm_converged = true;
  gm->callback([&]() {
    BlockChannelSpec spec = parse_spec(spec_path);
    GmResult result = capacity_gm(spec, gm_opts.solver());
    emit(gm_result_json(result, spec.name), gm_opts.out);
    gm_converged = result.converged;
  });

  // verify-reduction
  auto* verify = app.add_subcommand(
      "verify-reduction",
      "cross-check the strategy capacity against the multiplexed formula");
  CommonOpts verify_opts;
  int verify_samples = 20;
  std::uint64_t verify_seed = 1;
  verify->add_option("spec", spec_path, "spec file")->required();
  add_solver_flags(verify, verify_opts);
  verify->add_option("--samples", verify_samples,
                     "sampled strategy distributions");
  verify->add_option("--seed", verify_seed, "sampling seed");
  bool verify_converged = true;
  verify->callback([&]() {
    BlockChannelSpec spec = parse_spec(spec_path);
    ReductionReport report = verify_reduction(
        spec, verify_opts.tol, verify_samples, verify_seed,
        verify_opts.solver());
    emit(reduction_report_json(report, spec.name), verify_opts.out);
    verify_converged = report.solvers_converged;
  });

  // equiv-channel
  auto* equiv = app.add_subcommand(
      "equiv-channel", "export the strategy-to-observation channel matrix");
  CommonOpts equiv_opts;
  std::string equiv_format = "json";
  equiv->add_option("spec", spec_path, "spec file")->required();
  equiv->add_option("--out", equiv_opts.out, "output path")->required();
  equiv->add_option("--cap", equiv_opts.cap, "strategy enumeration cap");
  equiv->add_flag("--serial", equiv_opts.serial, "disable OpenMP kernels");
  equiv->add_option("--format", equiv_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  equiv->callback([&]() {
    BlockChannelSpec spec = parse_spec(spec_path);
    EquivalentChannel channel = build_equivalent_channel(
        spec, equiv_opts.cap,
        equiv_opts.serial ? ExecMode::Serial : ExecMode::Parallel);
    emit(equiv_format == "json" ? equivalent_channel_json(channel)
                                : equivalent_channel_csv(channel),
         equiv_opts.out);
  });

  // simulate
  auto* simulate = app.add_subcommand(
      "simulate", "Monte Carlo error rate of a random strategy code");
  CommonOpts sim_opts;
  double sim_rate = 0.0;
  int sim_blocks = 1;
  long sim_trials = 1000;
  std::uint64_t sim_seed = 1;
  bool sim_resample = false;
  std::string sim_format = "json";
  simulate->add_option("spec", spec_path, "spec file")->required();
  simulate->add_option("--rate", sim_rate, "bits per channel use")->required();
  simulate->add_option("--blocks", sim_blocks, "codeword length in blocks (J)")
      ->required();
  simulate->add_option("--trials", sim_trials, "Monte Carlo trials")
      ->required();
  simulate->add_option("--seed", sim_seed, "master seed");
  simulate->add_flag("--resample-codebook", sim_resample,
                     "fresh codebook per trial (ensemble average)");
  simulate->add_option("--format", sim_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  add_solver_flags(simulate, sim_opts);
  simulate->callback([&]() {
    BlockChannelSpec spec = parse_spec(spec_path);
    SimOptions options;
    options.resample_codebook = sim_resample;
    options.strategy_cap = sim_opts.cap;
    options.exec = sim_opts.serial ? ExecMode::Serial : ExecMode::Parallel;
    options.solver = sim_opts.solver();
    SimulationReport report =
        estimate_error_rate(spec, sim_rate, sim_blocks, sim_trials, sim_seed,
                            options);
    if (sim_format == "json") {
      emit(simulation_report_json(report, spec.name), sim_opts.out);
    } else {
      emit(std::string(kSweepCsvHeader) + "\n" +
               simulation_report_csv_row(report) + "\n",
           sim_opts.out);
    }
  });

  // sweep
  auto* sweep = app.add_subcommand(
      "sweep", "error-rate table over rates and block counts (CSV)");
  CommonOpts sweep_opts;
  std::vector<double> sweep_rates;
  std::vector<int> sweep_blocks;
  long sweep_trials = 1000;
  std::uint64_t sweep_seed = 1;
  bool sweep_resample = false;
  sweep->add_option("spec", spec_path, "spec file")->required();
  sweep->add_option("--rates", sweep_rates, "rates, bits per channel use")
      ->required()
      ->delimiter(',');
  sweep->add_option("--blocks", sweep_blocks, "block counts (J)")
      ->required()
      ->delimiter(',');
  sweep->add_option("--trials", sweep_trials, "trials per point");
  sweep->add_option("--seed", sweep_seed, "master seed");
  sweep->add_flag("--resample-codebook", sweep_resample,
                  "fresh codebook per trial");
  add_solver_flags(sweep, sweep_opts);
  sweep->callback([&]() {
    BlockChannelSpec spec = parse_spec(spec_path);
    SimOptions options;
    options.resample_codebook = sweep_resample;
    options.strategy_cap = sweep_opts.cap;
    options.exec = sweep_opts.serial ? ExecMode::Serial : ExecMode::Parallel;
    options.solver = sweep_opts.solver();
    std::string csv = std::string(kSweepCsvHeader) + "\n";
    for (double rate : sweep_rates)
      for (int blocks : sweep_blocks) {
        SimulationReport report = estimate_error_rate(
            spec, rate, blocks, sweep_trials, sweep_seed, options);
        csv += simulation_report_csv_row(report) + "\n";
      }
    emit(csv, sweep_opts.out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (...) {
    return map_exception(app.get_subcommands().empty()
                             ? "run"
                             : app.get_subcommands()[0]->get_name().c_str());
  }

  if (capacity->parsed() && !capacity_converged) {
    std::cerr << "bmcap capacity: solver did not reach the requested gap\n";
    return kExitNoConvergence;
  }
  if (gm->parsed() && !gm_converged) {
    std::cerr << "bmcap gm-capacity: solver did not reach the requested gap\n";
    return kExitNoConvergence;
  }
  if (verify->parsed() && !verify_converged) {
    std::cerr
        << "bmcap verify-reduction: a solver did not reach the requested gap\n";
    return kExitNoConvergence;
  }
  return kExitOk;
}

}  // namespace bmcap
