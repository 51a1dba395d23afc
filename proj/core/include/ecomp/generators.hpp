#pragma once

#include <cstddef>
#include <cstdint>

#include "ecomp/polynomial.hpp"

namespace ecomp {

// f(v) = C.v + v.J.v with C_i ~ U(-1, 1) and J = Q diag(d) Q^T for a random
// orthogonal Q. The eigenvalue magnitudes are U(0.1, 1); a fraction
// `nonconvexity` of them (rounded) is negative, so 0 gives a convex problem
// and anything above makes J indefinite.
struct QpConfig {
  std::size_t vars = 50;
  double nonconvexity = 0.5;
  double sum_constraint = 1.0;
  bool slack = false;
};

PolynomialProgram generate_nonconvex_qp(const QpConfig& config, std::uint64_t seed);

}  // namespace ecomp
