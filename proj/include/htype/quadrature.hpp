#pragma once

#include <span>
#include <vector>

namespace htype {

/// Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree 2n - 1.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendreRule gauss_legendre(int n);

/// Recursive pairwise summation with a fixed split (halves, base case of 8
/// sequential adds), so the result depends only on the order of `values`.
double pairwise_sum(std::span<const double> values);

}  // namespace htype
