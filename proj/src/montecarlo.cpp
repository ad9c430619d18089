#include "translin/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>

namespace translin {
namespace montecarlo {
namespace {

void check(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

double kahan_sum(std::span<const double> values) {
  double sum = 0.0, carry = 0.0;
  for (double v : values) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

/// Applies one grid value of the swept variable. Integer variables take the
/// rounded grid value.
void apply_variable(SweepVariable var, double value, GroundTruth& gt, LearnerConfig& cfg) {
  const int iv = static_cast<int>(std::llround(value));
  switch (var) {
    case SweepVariable::P: cfg.p = iv; return;
    case SweepVariable::P1: cfg.p1 = iv; return;
    case SweepVariable::P2: cfg.p2 = iv; return;
    case SweepVariable::N1: cfg.n1 = iv; return;
    case SweepVariable::N2: cfg.n2 = iv; return;
    case SweepVariable::Sigma1: gt.sigma1 = value; return;
    case SweepVariable::Sigma2: gt.sigma2 = value; return;
  }
  throw std::invalid_argument("apply_variable: unknown sweep variable");
}

Regime record_regime(const SweepSpec& spec, const LearnerConfig& cfg) {
  if (spec.quantity == Quantity::TransferError)
    return classify_regime(cfg.p + cfg.p1, cfg.n1);
  switch (spec.method) {
    case TransferMethod::OptionA: return classify_regime(cfg.p2, cfg.n2);
    case TransferMethod::OptionB: return classify_regime(cfg.p + cfg.p2, cfg.n2);
    default: return classify_regime(cfg.p, cfg.n1 + cfg.n2);
  }
}

std::optional<theory::TheoryResult> record_theory(const SweepSpec& spec, const GroundTruth& gt,
                                                  const LearnerConfig& cfg) {
  try {
    const theory::ScenarioParams sp = theory::ScenarioParams::from(gt, cfg);
    if (spec.quantity == Quantity::TransferError) return theory::transferring_error(sp);
    switch (spec.method) {
      case TransferMethod::OptionA:
        return theory::option_a_error(sp, theory::transferring_error(sp));
      case TransferMethod::OptionB:
        return theory::option_b_error(sp, theory::transferring_error(sp));
      case TransferMethod::SampleTransfer:
        return theory::sample_transfer_theory(sp).total();
      case TransferMethod::SampleTransferFineTuned:
        return std::nullopt;  // no closed-form total; term means carry the theory
    }
  } catch (const TheoryUndefinedAtThreshold&) {
  } catch (const std::invalid_argument&) {
  }
  return std::nullopt;
}

}  // namespace

const char* to_string(TransferMethod m) {
  switch (m) {
    case TransferMethod::OptionA: return "option_a";
    case TransferMethod::OptionB: return "option_b";
    case TransferMethod::SampleTransfer: return "sample_transfer";
    default: return "sample_transfer_fine_tuned";
  }
}

const char* to_string(Quantity q) {
  return q == Quantity::ModelError ? "model_error" : "transfer_error";
}

const char* to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::P: return "p";
    case SweepVariable::P1: return "p1";
    case SweepVariable::P2: return "p2";
    case SweepVariable::N1: return "n1";
    case SweepVariable::N2: return "n2";
    case SweepVariable::Sigma1: return "sigma1";
    default: return "sigma2";
  }
}

void SweepSpec::validate() const {
  check(!grid.empty(), "SweepSpec: empty grid");
  check(replicates >= 2, "SweepSpec: need at least 2 replicates");
  check(threads >= 1, "SweepSpec: need at least 1 thread");
}

ReplicateResult run_replicate(const ExtendedTruth& truth, const LearnerConfig& cfg,
                              TransferMethod method, Quantity quantity, Rng& rng) {
  ReplicateResult out;
  if (method == TransferMethod::SampleTransfer ||
      method == TransferMethod::SampleTransferFineTuned) {
    const bool fine_tune = method == TransferMethod::SampleTransferFineTuned;
    const TransferOutcome outcome = sample_transfer(truth, cfg, rng, fine_tune);
    out.value = quantity == Quantity::ModelError ? outcome.model_error : outcome.transfer_error;
    if (fine_tune) {
      out.term1 = outcome.decomposition.t_bias;
      out.term2 = outcome.decomposition.t_var;
    } else {
      out.term1 = outcome.decomposition.k_bias;
      out.term2 = outcome.decomposition.k_noise;
    }
    return out;
  }

  auto [source_model, source_data] = train_source(truth, cfg, rng);
  if (quantity == Quantity::TransferError) {
    out.value = (truth.w2e - source_model.w_tilde).squaredNorm();
    return out;
  }
  const TransferOutcome outcome = method == TransferMethod::OptionA
                                      ? transfer_option_a(source_model, truth, cfg, rng)
                                      : transfer_option_b(source_model, truth, cfg, rng);
  out.value = outcome.model_error;
  return out;
}

std::vector<SweepRecord> run_sweep(const SweepSpec& spec, const GroundTruth& gt,
                                   const LearnerConfig& cfg) {
  spec.validate();
  gt.validate();
  cfg.validate();

  std::vector<SweepRecord> records;
  records.reserve(spec.grid.size());

  for (std::size_t point = 0; point < spec.grid.size(); ++point) {
    GroundTruth point_gt = gt;
    LearnerConfig point_cfg = cfg;
    apply_variable(spec.variable, spec.grid[point], point_gt, point_cfg);
    point_gt.validate();
    point_cfg.validate();
    const ExtendedTruth truth = extend_truth(point_gt, point_cfg);

    const int reps = spec.replicates;
    std::vector<double> values(reps);
    std::vector<double> term1(reps, std::numeric_limits<double>::quiet_NaN());
    std::vector<double> term2(reps, std::numeric_limits<double>::quiet_NaN());
    bool has_terms = false;

    auto worker = [&](int tid, int stride) {
      for (int rep = tid; rep < reps; rep += stride) {
        Rng rng(Rng::derive(spec.master_seed, point, static_cast<std::uint64_t>(rep)));
        const ReplicateResult r =
            run_replicate(truth, point_cfg, spec.method, spec.quantity, rng);
        values[rep] = r.value;
        if (r.term1) term1[rep] = *r.term1;
        if (r.term2) term2[rep] = *r.term2;
      }
    };

    const int threads = std::min(spec.threads, reps);
    if (threads <= 1) {
      worker(0, 1);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(threads);
      for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t, threads);
      for (auto& t : pool) t.join();
    }
    has_terms = !std::isnan(term1[0]);

    SweepRecord rec;
    rec.value = spec.grid[point];
    rec.regime = record_regime(spec, point_cfg);
    const MeanSe agg = aggregate(values);
    rec.empirical_mean = agg.mean;
    rec.empirical_se = agg.se;
    if (has_terms) {
      rec.term1_mean = aggregate(term1).mean;
      rec.term2_mean = aggregate(term2).mean;
    }
    rec.theory = record_theory(spec, point_gt, point_cfg);
    if (spec.quantity == Quantity::TransferError && rec.regime == Regime::Overparameterized) {
      try {
        rec.bias_bounds = theory::bias_bounds(theory::ScenarioParams::from(point_gt, point_cfg));
      } catch (const std::invalid_argument&) {
      }
    }
    records.push_back(std::move(rec));
  }
  return records;
}

MeanSe aggregate(std::span<const double> values) {
  MeanSe out;
  out.count = static_cast<int>(values.size());
  if (values.empty()) return out;
  out.mean = kahan_sum(values) / out.count;
  if (out.count < 2) return out;
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - out.mean;
    sq[i] = d * d;
  }
  const double variance = kahan_sum(sq) / (out.count - 1);
  out.se = std::sqrt(variance / out.count);
  return out;
}

ExactCheck check_exact(const SweepRecord& record) {
  check(record.theory.has_value() && record.theory->is_exact(),
        "check_exact: record has no exact theory value");
  const double diff = record.empirical_mean - record.theory->value;
  ExactCheck out;
  if (record.empirical_se == 0.0) {
    out.z = diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  } else {
    out.z = diff / record.empirical_se;
  }
  out.pass = std::abs(diff) <= 3.0 * record.empirical_se;
  return out;
}

bool check_bounds(const SweepRecord& record, double slack) {
  check(record.theory.has_value(), "check_bounds: record has no theory value");
  const double lo = record.theory->lower - slack * record.empirical_se;
  const double hi = record.theory->upper + slack * record.empirical_se;
  return record.empirical_mean >= lo && record.empirical_mean <= hi;
}

bool Report::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
}

void print_report(const Report& report, std::ostream& os) {
  os << "== " << report.title << " ==\n";
  for (const CheckRow& row : report.rows) {
    os << (row.pass ? "[PASS] " : "[FAIL] ") << row.name << ": measured " << row.measured
       << ", reference " << row.reference << " (" << row.criterion << ")\n";
  }
}

}  // namespace montecarlo
}  // namespace translin
