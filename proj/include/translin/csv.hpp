#pragma once

#include "translin/montecarlo.hpp"

#include <string>
#include <vector>

namespace translin {

/// Renders sweep records as CSV. Columns, in order:
///   sweep_var, value, regime, empirical_mean, empirical_se,
///   theory_kind, theory_value, theory_lower, theory_upper, term1, term2
/// Non-applicable fields stay empty; floats carry 12 significant digits;
/// lines end with LF. With bias bounds attached, three extra columns
/// b1_sq, b2_sq, b3_sq follow.
std::string sweep_to_csv(const montecarlo::SweepSpec& spec,
                         const std::vector<montecarlo::SweepRecord>& records);

}  // namespace translin
