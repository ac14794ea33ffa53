#pragma once

#include <cstdint>
#include <vector>

namespace qpurify {

struct ChiSquareResult {
  double statistic = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 1.0;
};

/// Pearson goodness of fit of `observed` counts against cell probabilities.
/// Cells with zero expected probability are skipped; a count landing in one
/// gives p_value = 0.
ChiSquareResult chi_square_goodness_of_fit(const std::vector<std::uint64_t>& observed,
                                           const std::vector<double>& probabilities);

/// Two-sample test that two histograms share one distribution (totals may
/// differ). Cells empty in both samples are skipped.
ChiSquareResult chi_square_two_sample(const std::vector<std::uint64_t>& first,
                                      const std::vector<std::uint64_t>& second);

}  // namespace qpurify
