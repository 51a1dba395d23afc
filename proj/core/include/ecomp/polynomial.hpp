#pragma once

// Sparse polynomial cost functions of order 1..5 over non-negative
// variables, together with the fixed-sum constraint sum(v) = R.
//
// A monomial stores its variable indices as a sorted multiset; repeated
// indices are powers, so (0, 0, 1) is v0^2 * v1. Symmetric interaction
// tensors therefore collapse to one canonical entry per index multiset.

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace ecomp {

inline constexpr std::size_t kMaxOrder = 5;

using VarIndex = std::uint32_t;

class Monomial {
 public:
  Monomial() = default;
  // Indices are sorted on construction. Requires 1 <= size <= kMaxOrder.
  Monomial(std::span<const VarIndex> indices, double coefficient);
  Monomial(std::initializer_list<VarIndex> indices, double coefficient);

  std::span<const VarIndex> indices() const noexcept {
    return {indices_.data(), order_};
  }
  std::size_t order() const noexcept { return order_; }
  double coefficient() const noexcept { return coefficient_; }

  // Product of v over the indices (without the coefficient).
  double product(std::span<const double> v) const noexcept;

  // Adds coefficient * d/dv_i of the product to grad for every distinct i.
  void accumulate_gradient(std::span<const double> v, std::span<double> grad) const noexcept;

  friend bool operator==(const Monomial&, const Monomial&) = default;

 private:
  friend class PolynomialProgram;

  std::array<VarIndex, kMaxOrder> indices_{};
  std::uint8_t order_ = 0;
  double coefficient_ = 0.0;
};

// One term as supplied by a caller, before canonicalization.
struct RawTerm {
  std::vector<std::size_t> indices;
  double coefficient = 0.0;
};

class PolynomialProgram {
 public:
  PolynomialProgram() = default;

  std::size_t num_vars() const noexcept { return num_vars_; }
  double sum_constraint() const noexcept { return sum_constraint_; }
  std::span<const Monomial> terms() const noexcept { return terms_; }
  std::size_t max_order() const noexcept;
  bool empty() const noexcept { return terms_.empty(); }

  friend bool operator==(const PolynomialProgram&, const PolynomialProgram&) = default;

 private:
  friend PolynomialProgram build_program(std::span<const RawTerm>, std::size_t, double);
  friend PolynomialProgram with_sum_constraint(const PolynomialProgram&, double);
  friend PolynomialProgram add_slack(const PolynomialProgram&);

  std::size_t num_vars_ = 0;
  double sum_constraint_ = 1.0;
  std::vector<Monomial> terms_;  // sorted by (order, indices), unique, non-zero
};

// Canonicalizes raw terms: sorts each index list, merges equal multisets and
// drops exact zeros. Throws std::invalid_argument on an empty index list, an
// order above kMaxOrder, an index >= num_vars, num_vars == 0 or R <= 0.
PolynomialProgram build_program(std::span<const RawTerm> raw_terms, std::size_t num_vars,
                                double sum_constraint);

PolynomialProgram with_sum_constraint(const PolynomialProgram& program, double sum_constraint);

// Energy at v. Throws std::invalid_argument on a size mismatch or a negative
// component.
double evaluate(const PolynomialProgram& program, std::span<const double> v);

// dE/dv at v, checked like evaluate.
std::vector<double> gradient(const PolynomialProgram& program, std::span<const double> v);

// Allocation-free gradient for hot loops; out must have num_vars entries.
// No validation of v.
void gradient_into(const PolynomialProgram& program, std::span<const double> v,
                   std::span<double> out) noexcept;
double evaluate_unchecked(const PolynomialProgram& program, std::span<const double> v) noexcept;

// Appends one variable that no term references. It absorbs the unused part
// of the sum constraint, turning sum(v) = R into sum(v) <= R for the others.
PolynomialProgram add_slack(const PolynomialProgram& program);

struct ShiftedProgram {
  PolynomialProgram program;
  // evaluate(program, u) == evaluate(original, u + offsets) - constant
  double constant = 0.0;
};

// Substitutes v = u + offsets and re-expands every monomial.
// Throws std::invalid_argument on a size mismatch, a non-finite offset, or
// std::overflow_error when an expanded coefficient is not finite.
ShiftedProgram shift_variables(const PolynomialProgram& program, std::span<const double> offsets);

}  // namespace ecomp
