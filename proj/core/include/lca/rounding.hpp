/** \file  rounding.hpp
 *  \brief Half-up decimal rendering used by every report.
 */
#pragma once

#include <cstdint>
#include <string>

namespace lca {

/// Rounds the shortest decimal representation of `value` half-up (away from zero) to `decimals`.
std::string format_fixed(double value, int decimals);

/// 100 * numerator / denominator, computed exactly and rounded half-up. Requires denominator > 0.
std::string format_percent(std::uint64_t numerator, std::uint64_t denominator, int decimals = 2);

} // namespace lca
