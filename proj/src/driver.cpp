#include "translin/driver.hpp"

#include "translin/csv.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

namespace translin {
namespace {

std::string iso_utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

std::string grid_to_string(const std::vector<double>& grid) {
  std::string out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i) out += ",";
    out += format_double(grid[i]);
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write file: " + path.string());
  out << content;
}

}  // namespace

montecarlo::TransferMethod parse_method(const std::string& name) {
  using montecarlo::TransferMethod;
  if (name == "option_a") return TransferMethod::OptionA;
  if (name == "option_b") return TransferMethod::OptionB;
  if (name == "sample_transfer") return TransferMethod::SampleTransfer;
  if (name == "sample_transfer_fine_tuned") return TransferMethod::SampleTransferFineTuned;
  throw ConfigError("unknown method '" + name +
                    "' (expected option_a, option_b, sample_transfer, "
                    "sample_transfer_fine_tuned)");
}

montecarlo::Quantity parse_quantity(const std::string& name) {
  if (name == "model_error") return montecarlo::Quantity::ModelError;
  if (name == "transfer_error") return montecarlo::Quantity::TransferError;
  throw ConfigError("unknown quantity '" + name + "' (expected model_error, transfer_error)");
}

montecarlo::SweepVariable parse_variable(const std::string& name) {
  using montecarlo::SweepVariable;
  if (name == "p") return SweepVariable::P;
  if (name == "p1") return SweepVariable::P1;
  if (name == "p2") return SweepVariable::P2;
  if (name == "n1") return SweepVariable::N1;
  if (name == "n2") return SweepVariable::N2;
  if (name == "sigma1") return SweepVariable::Sigma1;
  if (name == "sigma2") return SweepVariable::Sigma2;
  throw ConfigError("unknown sweep variable '" + name + "'");
}

TruthMode parse_truth_mode(const std::string& name) {
  if (name == "equal") return TruthMode::Equal;
  if (name == "opposite") return TruthMode::Opposite;
  if (name == "offset") return TruthMode::Offset;
  throw ConfigError("unknown w_mode '" + name + "' (expected equal, opposite, offset)");
}

ExperimentConfig experiment_from_config(const Config& cfg) {
  ExperimentConfig exp;
  exp.s = static_cast<int>(cfg.get_int("ground_truth", "s"));
  exp.s1 = static_cast<int>(cfg.get_int("ground_truth", "s1"));
  exp.s2 = static_cast<int>(cfg.get_int("ground_truth", "s2"));
  exp.norm_w1 = cfg.get_double("ground_truth", "norm_w1");
  exp.delta = cfg.get_double_or("ground_truth", "delta", 0.0);
  exp.w_mode = cfg.get_string_or("ground_truth", "w_mode", "equal");
  exp.norm_q1 = cfg.get_double_or("ground_truth", "norm_q1", 0.0);
  exp.norm_q2 = cfg.get_double_or("ground_truth", "norm_q2", 0.0);
  exp.sigma1 = cfg.get_double_or("ground_truth", "sigma1", 0.0);
  exp.sigma2 = cfg.get_double_or("ground_truth", "sigma2", 0.0);

  exp.learner.p = static_cast<int>(cfg.get_int("learner", "p"));
  exp.learner.p1 = static_cast<int>(cfg.get_int("learner", "p1"));
  exp.learner.p2 = static_cast<int>(cfg.get_int("learner", "p2"));
  exp.learner.n1 = static_cast<int>(cfg.get_int("learner", "n1"));
  exp.learner.n2 = static_cast<int>(cfg.get_int("learner", "n2"));

  exp.method = cfg.get_string_or("experiment", "method", "option_a");
  exp.quantity = cfg.get_string_or("experiment", "quantity", "model_error");
  exp.replicates = static_cast<int>(cfg.get_int_or("experiment", "replicates", 100));
  exp.seed = cfg.get_uint64_or("experiment", "seed", 1);
  exp.threads = static_cast<int>(cfg.get_int_or("experiment", "threads", 1));
  exp.sacrifice_value = cfg.get_double_or("experiment", "sacrifice_value", 0.1);

  exp.variable = cfg.get_string_or("sweep", "variable", "p1");
  exp.grid = parse_grid(cfg.get_string("sweep", "grid"));

  // Fail early on enum typos.
  parse_method(exp.method);
  parse_quantity(exp.quantity);
  parse_variable(exp.variable);
  parse_truth_mode(exp.w_mode);
  return exp;
}

Config experiment_to_config(const ExperimentConfig& exp) {
  Config cfg;
  cfg.set("ground_truth", "s", std::to_string(exp.s));
  cfg.set("ground_truth", "s1", std::to_string(exp.s1));
  cfg.set("ground_truth", "s2", std::to_string(exp.s2));
  cfg.set("ground_truth", "norm_w1", format_double(exp.norm_w1));
  cfg.set("ground_truth", "delta", format_double(exp.delta));
  cfg.set("ground_truth", "w_mode", exp.w_mode);
  cfg.set("ground_truth", "norm_q1", format_double(exp.norm_q1));
  cfg.set("ground_truth", "norm_q2", format_double(exp.norm_q2));
  cfg.set("ground_truth", "sigma1", format_double(exp.sigma1));
  cfg.set("ground_truth", "sigma2", format_double(exp.sigma2));

  cfg.set("learner", "p", std::to_string(exp.learner.p));
  cfg.set("learner", "p1", std::to_string(exp.learner.p1));
  cfg.set("learner", "p2", std::to_string(exp.learner.p2));
  cfg.set("learner", "n1", std::to_string(exp.learner.n1));
  cfg.set("learner", "n2", std::to_string(exp.learner.n2));

  cfg.set("experiment", "method", exp.method);
  cfg.set("experiment", "quantity", exp.quantity);
  cfg.set("experiment", "replicates", std::to_string(exp.replicates));
  cfg.set("experiment", "seed", std::to_string(exp.seed));
  cfg.set("experiment", "threads", std::to_string(exp.threads));
  cfg.set("experiment", "sacrifice_value", format_double(exp.sacrifice_value));

  cfg.set("sweep", "variable", exp.variable);
  cfg.set("sweep", "grid", grid_to_string(exp.grid));
  return cfg;
}

GroundTruth make_ground_truth(const ExperimentConfig& exp) {
  GroundTruth gt;
  gt.s = exp.s;
  gt.s1 = exp.s1;
  gt.s2 = exp.s2;
  auto [w1, w2] = make_truth_vectors(exp.s, exp.norm_w1, exp.delta, parse_truth_mode(exp.w_mode));
  gt.w1 = w1;
  gt.w2 = w2;
  gt.q1 = uniform_norm_vector(exp.s1, exp.norm_q1);
  gt.q2 = uniform_norm_vector(exp.s2, exp.norm_q2);
  gt.sigma1 = exp.sigma1;
  gt.sigma2 = exp.sigma2;
  gt.validate();
  return gt;
}

montecarlo::SweepSpec make_sweep_spec(const ExperimentConfig& exp) {
  montecarlo::SweepSpec spec;
  spec.variable = parse_variable(exp.variable);
  spec.grid = exp.grid;
  spec.replicates = exp.replicates;
  spec.master_seed = exp.seed;
  spec.method = parse_method(exp.method);
  spec.quantity = parse_quantity(exp.quantity);
  spec.threads = exp.threads;
  spec.validate();
  return spec;
}

RunPaths run_sweep_to_files(const ExperimentConfig& exp, const std::filesystem::path& out_dir,
                            const std::string& stem, const std::string& command) {
  std::filesystem::create_directories(out_dir);
  const GroundTruth gt = make_ground_truth(exp);
  const montecarlo::SweepSpec spec = make_sweep_spec(exp);
  const auto records = montecarlo::run_sweep(spec, gt, exp.learner);

  RunPaths paths;
  paths.csv = out_dir / (stem + ".csv");
  paths.manifest = out_dir / (stem + ".manifest.toml");
  write_file(paths.csv, sweep_to_csv(spec, records));

  Config manifest = experiment_to_config(exp);
  manifest.set("manifest", "command", command);
  manifest.set("manifest", "tool_version", kToolVersion);
  manifest.set("manifest", "master_seed", std::to_string(exp.seed));
  manifest.set("manifest", "wall_clock", iso_utc_now());
  manifest.set("manifest", "output", paths.csv.filename().string());
  write_file(paths.manifest, manifest.serialize());
  return paths;
}

}  // namespace translin
