#include "ecomp/generators.hpp"

#include <gtest/gtest.h>

#include <random>

namespace ecomp {
namespace {

// d.J.d from the order-2 terms. d may have negative entries here.
double curvature_along(const PolynomialProgram& p, const std::vector<double>& d) {
  double q = 0.0;
  for (const auto& term : p.terms()) {
    if (term.order() == 2) q += term.coefficient() * term.product(d);
  }
  return q;
}

TEST(NonconvexQp, ShapeAndDeterminism) {
  QpConfig c;
  c.vars = 10;
  const auto a = generate_nonconvex_qp(c, 4);
  EXPECT_EQ(a, generate_nonconvex_qp(c, 4));
  EXPECT_NE(a, generate_nonconvex_qp(c, 5));
  EXPECT_EQ(a.num_vars(), 10u);
  EXPECT_EQ(a.sum_constraint(), 1.0);
  EXPECT_EQ(a.max_order(), 2u);
  c.slack = true;
  EXPECT_EQ(generate_nonconvex_qp(c, 4).num_vars(), 11u);
}

TEST(NonconvexQp, NonconvexityControlsCurvatureSign) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 1.0);
  QpConfig c;
  c.vars = 6;
  for (double kappa : {0.0, 1.0}) {
    c.nonconvexity = kappa;
    const auto p = generate_nonconvex_qp(c, 9);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> d(c.vars);
      for (auto& x : d) x = g(rng);
      const double q = curvature_along(p, d);
      if (kappa == 0.0) {
        EXPECT_GT(q, 0.0);
      } else {
        EXPECT_LT(q, 0.0);
      }
    }
  }
  c.nonconvexity = 0.5;
  const auto mixed = generate_nonconvex_qp(c, 9);
  bool saw_positive = false;
  bool saw_negative = false;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> d(c.vars);
    for (auto& x : d) x = g(rng);
    const double q = curvature_along(mixed, d);
    saw_positive |= q > 0.0;
    saw_negative |= q < 0.0;
  }
  EXPECT_TRUE(saw_positive && saw_negative);
}

TEST(NonconvexQp, RejectsBadConfig) {
  QpConfig c;
  c.vars = 0;
  EXPECT_THROW(generate_nonconvex_qp(c, 0), std::invalid_argument);
  c.vars = 3;
  c.nonconvexity = 1.5;
  EXPECT_THROW(generate_nonconvex_qp(c, 0), std::invalid_argument);
}

}  // namespace
}  // namespace ecomp
