#include "qpurify/statistics.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace qpurify {

namespace {

double upper_tail(double statistic, int dof) {
  if (dof <= 0) return 1.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * statistic);
}

}  // namespace

ChiSquareResult chi_square_goodness_of_fit(const std::vector<std::uint64_t>& observed,
                                           const std::vector<double>& probabilities) {
  if (observed.size() != probabilities.size()) {
    throw std::invalid_argument("chi_square_goodness_of_fit: size mismatch");
  }
  const double total = std::accumulate(observed.begin(), observed.end(), 0.0);
  ChiSquareResult r;
  int cells = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (probabilities[i] <= 0.0) {
      if (observed[i] > 0) {
        r.statistic = INFINITY;
        r.p_value = 0.0;
        return r;
      }
      continue;
    }
    const double expected = total * probabilities[i];
    const double diff = static_cast<double>(observed[i]) - expected;
    r.statistic += diff * diff / expected;
    ++cells;
  }
  r.degrees_of_freedom = cells - 1;
  r.p_value = upper_tail(r.statistic, r.degrees_of_freedom);
  return r;
}

ChiSquareResult chi_square_two_sample(const std::vector<std::uint64_t>& first,
                                      const std::vector<std::uint64_t>& second) {
  if (first.size() != second.size()) {
    throw std::invalid_argument("chi_square_two_sample: size mismatch");
  }
  const double n1 = std::accumulate(first.begin(), first.end(), 0.0);
  const double n2 = std::accumulate(second.begin(), second.end(), 0.0);
  if (n1 <= 0.0 || n2 <= 0.0) throw std::invalid_argument("chi_square_two_sample: empty sample");
  const double k1 = std::sqrt(n2 / n1);
  const double k2 = std::sqrt(n1 / n2);
  ChiSquareResult r;
  int cells = 0;
  for (std::size_t i = 0; i < first.size(); ++i) {
    const double a = static_cast<double>(first[i]);
    const double b = static_cast<double>(second[i]);
    if (a + b == 0.0) continue;
    const double diff = k1 * a - k2 * b;
    r.statistic += diff * diff / (a + b);
    ++cells;
  }
  r.degrees_of_freedom = cells - 1;
  r.p_value = upper_tail(r.statistic, r.degrees_of_freedom);
  return r;
}

}  // namespace qpurify
