#pragma once

#include "translin/config.hpp"
#include "translin/montecarlo.hpp"

#include <filesystem>
#include <string>

namespace translin {

inline constexpr const char* kToolVersion = "0.1.0";

/// Fully resolved experiment description: ground truth, learner budget, run
/// policy, and the sweep. Mirrors the config file sections one-to-one.
struct ExperimentConfig {
  // [ground_truth]
  int s = 5, s1 = 5, s2 = 5;
  double norm_w1 = 1.0;
  double delta = 0.0;
  std::string w_mode = "equal";  // equal | opposite | offset
  double norm_q1 = 0.0, norm_q2 = 0.0;
  double sigma1 = 0.0, sigma2 = 0.0;

  // [learner]
  LearnerConfig learner;

  // [experiment]
  std::string method = "option_a";
  std::string quantity = "model_error";
  int replicates = 100;
  std::uint64_t seed = 1;
  int threads = 1;
  double sacrifice_value = 0.1;

  // [sweep]
  std::string variable = "p1";
  std::vector<double> grid;
};

ExperimentConfig experiment_from_config(const Config& cfg);
Config experiment_to_config(const ExperimentConfig& exp);

GroundTruth make_ground_truth(const ExperimentConfig& exp);
montecarlo::SweepSpec make_sweep_spec(const ExperimentConfig& exp);

montecarlo::TransferMethod parse_method(const std::string& name);
montecarlo::Quantity parse_quantity(const std::string& name);
montecarlo::SweepVariable parse_variable(const std::string& name);
TruthMode parse_truth_mode(const std::string& name);

struct RunPaths {
  std::filesystem::path csv;
  std::filesystem::path manifest;
};

/// Runs the configured sweep and writes `<stem>.csv` plus
/// `<stem>.manifest.toml` under out_dir. The manifest embeds the resolved
/// config, so feeding it back as a config reproduces the CSV byte-for-byte.
RunPaths run_sweep_to_files(const ExperimentConfig& exp, const std::filesystem::path& out_dir,
                            const std::string& stem, const std::string& command);

}  // namespace translin
