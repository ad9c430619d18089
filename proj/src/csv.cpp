#include "translin/csv.hpp"

#include "translin/config.hpp"

#include <algorithm>

namespace translin {

std::string sweep_to_csv(const montecarlo::SweepSpec& spec,
                         const std::vector<montecarlo::SweepRecord>& records) {
  using montecarlo::SweepRecord;
  const bool with_bounds =
      std::any_of(records.begin(), records.end(),
                  [](const SweepRecord& r) { return r.bias_bounds.has_value(); });

  std::string out =
      "sweep_var,value,regime,empirical_mean,empirical_se,theory_kind,theory_value,"
      "theory_lower,theory_upper,term1,term2";
  if (with_bounds) out += ",b1_sq,b2_sq,b3_sq";
  out += "\n";

  auto field = [](double v) { return format_double(v); };
  for (const SweepRecord& r : records) {
    out += to_string(spec.variable);
    out += ',';
    out += field(r.value);
    out += ',';
    out += to_string(r.regime);
    out += ',';
    out += field(r.empirical_mean);
    out += ',';
    out += field(r.empirical_se);
    out += ',';
    if (r.theory) {
      const bool exact = r.theory->is_exact();
      out += exact ? "exact" : "bounds";
      out += ',';
      if (exact) out += field(r.theory->value);
      out += ',';
      if (!exact) out += field(r.theory->lower);
      out += ',';
      if (!exact) out += field(r.theory->upper);
    } else {
      out += ",,,";
    }
    out += ',';
    if (r.term1_mean)
      out += field(*r.term1_mean);
    else if (r.theory && r.theory->term1)
      out += field(*r.theory->term1);
    out += ',';
    if (r.term2_mean)
      out += field(*r.term2_mean);
    else if (r.theory && r.theory->term2)
      out += field(*r.theory->term2);
    if (with_bounds) {
      out += ',';
      if (r.bias_bounds) {
        out += field(r.bias_bounds->b1 * r.bias_bounds->b1);
        out += ',';
        out += field(r.bias_bounds->b2 * r.bias_bounds->b2);
        out += ',';
        out += field(r.bias_bounds->b3 * r.bias_bounds->b3);
      } else {
        out += ",,";
      }
    }
    out += '\n';
  }
  return out;
}

}  // namespace translin
