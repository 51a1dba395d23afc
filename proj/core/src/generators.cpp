#include "ecomp/generators.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace ecomp {

namespace {

// Columns of a random orthogonal matrix via Gram-Schmidt on Gaussian vectors.
std::vector<std::vector<double>> random_orthogonal(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::vector<double>> q;
  while (q.size() < n) {
    std::vector<double> col(n);
    for (auto& x : col) x = gauss(rng);
    for (const auto& prev : q) {
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += col[i] * prev[i];
      for (std::size_t i = 0; i < n; ++i) col[i] -= dot * prev[i];
    }
    double norm = 0.0;
    for (double x : col) norm += x * x;
    norm = std::sqrt(norm);
    if (norm < 1e-8) continue;  // nearly dependent draw, try again
    for (auto& x : col) x /= norm;
    q.push_back(std::move(col));
  }
  return q;
}

}  // namespace

PolynomialProgram generate_nonconvex_qp(const QpConfig& config, std::uint64_t seed) {
  const std::size_t n = config.vars;
  if (n < 1) throw std::invalid_argument("QP needs at least one variable");
  if (!(config.nonconvexity >= 0.0 && config.nonconvexity <= 1.0)) {
    throw std::invalid_argument("nonconvexity must be in [0, 1]");
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> magnitude(0.1, 1.0);

  std::vector<double> c(n);
  for (auto& x : c) x = unit(rng);

  const auto negatives =
      static_cast<std::size_t>(std::lround(config.nonconvexity * static_cast<double>(n)));
  std::vector<double> eig(n);
  for (std::size_t k = 0; k < n; ++k) eig[k] = (k < negatives ? -1.0 : 1.0) * magnitude(rng);
  const auto q = random_orthogonal(n, rng);

  std::vector<RawTerm> terms;
  for (std::size_t i = 0; i < n; ++i) terms.push_back({{i}, c[i]});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double jij = 0.0;
      for (std::size_t k = 0; k < n; ++k) jij += eig[k] * q[k][i] * q[k][j];
      // v.J.v counts an off-diagonal pair twice.
      terms.push_back({{i, j}, i == j ? jij : 2.0 * jij});
    }
  }
  auto program = build_program(terms, n, config.sum_constraint);
  return config.slack ? add_slack(program) : program;
}

}  // namespace ecomp
