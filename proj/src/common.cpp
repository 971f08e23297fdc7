#include "shiftcut/common.hpp"

namespace shiftcut {

double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 64) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(v.data(), v.size());
}

double accumulate_row(const double* x, std::size_t n) {
  if (n <= 2048) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  return pairwise_sum(x, n);
}

}  // namespace shiftcut
