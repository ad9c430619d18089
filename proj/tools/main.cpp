// Command-line front end: sweep experiments, figure presets, theory-vs-
// simulation verification, and parameter-allocation advice.

#include <CLI11.hpp>

#include "translin/csv.hpp"
#include "translin/driver.hpp"
#include "translin/presets.hpp"
#include "translin/theory.hpp"
#include "translin/verification.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

constexpr int kExitSuccess = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;

namespace fs = std::filesystem;
using namespace translin;

fs::path default_out_dir() {
  if (const char* env = std::getenv("TRANSLIN_OUT_DIR")) return fs::path(env);
  return fs::current_path();
}

struct CommonOptions {
  std::uint64_t seed = 0;
  bool seed_set = false;
  int replicates = 0;
  int threads = 0;
  fs::path out_dir = default_out_dir();
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--seed", opts.seed, "master seed override")->each([&](const std::string&) {
    opts.seed_set = true;
  });
  cmd->add_option("--replicates", opts.replicates, "replicates per grid point override");
  cmd->add_option("--threads", opts.threads, "worker threads");
  cmd->add_option("--out-dir", opts.out_dir,
                  "output directory (default: $TRANSLIN_OUT_DIR or the working directory)");
  cmd->add_option("--format", opts.format, "output format (csv)")
      ->check(CLI::IsMember({"csv"}));
}

void apply_overrides(ExperimentConfig& exp, const CommonOptions& opts) {
  if (opts.seed_set) exp.seed = opts.seed;
  if (opts.replicates > 0) exp.replicates = opts.replicates;
  if (opts.threads > 0) exp.threads = opts.threads;
}

int cmd_sweep(const std::string& config_path, const CommonOptions& opts) {
  ExperimentConfig exp = experiment_from_config(Config::load(config_path));
  apply_overrides(exp, opts);
  const std::string stem = fs::path(config_path).stem().string();
  const RunPaths paths = run_sweep_to_files(exp, opts.out_dir, stem + "_sweep", "sweep");
  std::cout << "wrote " << paths.csv.string() << "\n";
  std::cout << "wrote " << paths.manifest.string() << "\n";
  return kExitSuccess;
}

int cmd_figure(const std::string& name, const CommonOptions& opts) {
  for (const Preset& preset : figure_presets(name)) {
    fs::create_directories(opts.out_dir);
    const fs::path config_path = opts.out_dir / (preset.name + ".config.toml");
    {
      std::ofstream out(config_path, std::ios::binary);
      out << preset.config_text;
    }
    ExperimentConfig exp = experiment_from_config(Config::parse(preset.config_text));
    apply_overrides(exp, opts);
    const RunPaths paths = run_sweep_to_files(exp, opts.out_dir, preset.name, "figure " + name);
    std::cout << "wrote " << paths.csv.string() << "\n";
  }
  return kExitSuccess;
}

int cmd_verify(const CommonOptions& opts) {
  const std::uint64_t seed = opts.seed_set ? opts.seed : 1;
  const int threads = opts.threads > 0 ? opts.threads : 1;
  auto scaled = [&](int dflt) { return opts.replicates > 0 ? opts.replicates : dflt; };

  bool ok = true;
  for (const auto& report : {
           montecarlo::verify_lemma_suite(seed),
           montecarlo::verify_exactness(seed, scaled(10000), threads),
           montecarlo::verify_transfer_bounds(seed, scaled(600), threads),
           montecarlo::verify_descent_floors(seed, scaled(3000), threads),
           montecarlo::verify_budget_monotonicity(seed, scaled(10000), threads),
           montecarlo::verify_sample_transfer(seed, scaled(1500), threads),
           montecarlo::insight_checks(seed, scaled(200), threads),
       }) {
    montecarlo::print_report(report, std::cout);
    ok = ok && report.all_pass();
  }
  std::cout << (ok ? "verification passed\n" : "verification FAILED\n");
  return ok ? kExitSuccess : kExitVerificationFailure;
}

int cmd_advise(const std::string& config_path) {
  const ExperimentConfig exp = experiment_from_config(Config::load(config_path));
  const int budget = exp.learner.p + exp.learner.p1;
  const auto split = theory::allocate_budget(budget, exp.s);
  std::cout << "feature budget C = p + p1 = " << budget << "\n";
  std::cout << "recommended split: p = " << split.p << ", p1 = " << split.p1
            << " (the transferring error is non-decreasing in p at fixed C)\n";

  if (budget > exp.learner.n1 + 1) {
    const auto analysis =
        theory::sacrifice_analysis(budget, exp.learner.n1, exp.sigma1, exp.sacrifice_value);
    std::cout << "sacrifice analysis at sacrifice_value = " << format_double(exp.sacrifice_value)
              << ":\n";
    std::cout << "  keep all true features:  L_co >= Q1 = " << format_double(analysis.q1_bound)
              << "\n";
    std::cout << "  sacrifice one feature:   L_co <= Q2 = " << format_double(analysis.q2_bound)
              << "\n";
    std::cout << (analysis.recommend
                      ? "  recommendation: sacrifice the feature (Q1 > Q2)\n"
                      : "  recommendation: keep all true features (Q1 <= Q2)\n");
  } else {
    std::cout << "sacrifice analysis unavailable: needs C > n1 + 1 (overparameterized source)\n";
  }
  return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"transfer-learning linear regression: theory and simulation"};
  app.require_subcommand(1);

  CommonOptions opts;
  std::string config_path;
  std::string figure_name;

  CLI::App* sweep = app.add_subcommand("sweep", "run the sweep described by a config file");
  sweep->add_option("config", config_path, "config file path")->required();
  add_common(sweep, opts);

  CLI::App* figure =
      app.add_subcommand("figure", "run a built-in figure preset (fig1a, fig1b, fig1c, tightness)");
  figure->add_option("name", figure_name, "figure name")
      ->required()
      ->check(CLI::IsMember(figure_names()));
  add_common(figure, opts);

  CLI::App* verify = app.add_subcommand("verify", "check theory against simulation");
  add_common(verify, opts);

  CLI::App* advise =
      app.add_subcommand("advise", "parameter-allocation advice for a config file");
  advise->add_option("config", config_path, "config file path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitSuccess : kExitUsage;
  }

  try {
    if (sweep->parsed()) return cmd_sweep(config_path, opts);
    if (figure->parsed()) return cmd_figure(figure_name, opts);
    if (verify->parsed()) return cmd_verify(opts);
    if (advise->parsed()) return cmd_advise(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
