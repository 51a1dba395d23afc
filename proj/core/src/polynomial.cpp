#include "ecomp/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace ecomp {

Monomial::Monomial(std::span<const VarIndex> indices, double coefficient)
    : coefficient_(coefficient) {
  if (indices.empty() || indices.size() > kMaxOrder) {
    throw std::invalid_argument("monomial order must be in [1, 5], got " +
                                std::to_string(indices.size()));
  }
  std::copy(indices.begin(), indices.end(), indices_.begin());
  order_ = static_cast<std::uint8_t>(indices.size());
  std::sort(indices_.begin(), indices_.begin() + order_);
}

Monomial::Monomial(std::initializer_list<VarIndex> indices, double coefficient)
    : Monomial(std::span<const VarIndex>(indices.begin(), indices.size()), coefficient) {}

double Monomial::product(std::span<const double> v) const noexcept {
  double p = 1.0;
  for (std::size_t k = 0; k < order_; ++k) p *= v[indices_[k]];
  return p;
}

void Monomial::accumulate_gradient(std::span<const double> v,
                                   std::span<double> grad) const noexcept {
  // Indices are sorted, so each run of equal indices is one power p of v_i:
  // d/dv_i (v_i^p * rest) = p * v_i^(p-1) * rest.
  std::size_t k = 0;
  while (k < order_) {
    const VarIndex var = indices_[k];
    std::size_t run_end = k;
    while (run_end < order_ && indices_[run_end] == var) ++run_end;
    const auto power = static_cast<double>(run_end - k);

    double rest = 1.0;
    for (std::size_t j = 0; j < order_; ++j) {
      if (j < k || j >= run_end) rest *= v[indices_[j]];
    }
    for (std::size_t j = k + 1; j < run_end; ++j) rest *= v[var];
    grad[var] += coefficient_ * power * rest;
    k = run_end;
  }
}

std::size_t PolynomialProgram::max_order() const noexcept {
  std::size_t order = 0;
  for (const auto& t : terms_) order = std::max(order, t.order());
  return order;
}

namespace {

struct IndexKeyLess {
  bool operator()(const std::vector<VarIndex>& a, const std::vector<VarIndex>& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

using TermMap = std::map<std::vector<VarIndex>, double, IndexKeyLess>;

std::vector<Monomial> canonical_terms(const TermMap& merged) {
  std::vector<Monomial> terms;
  terms.reserve(merged.size());
  for (const auto& [key, coeff] : merged) {
    if (coeff != 0.0) terms.emplace_back(key, coeff);
  }
  return terms;
}

void check_point(const PolynomialProgram& program, std::span<const double> v) {
  if (v.size() != program.num_vars()) {
    throw std::invalid_argument("point has " + std::to_string(v.size()) +
                                " components, program has " +
                                std::to_string(program.num_vars()) + " variables");
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] >= 0.0)) {
      throw std::invalid_argument("variable " + std::to_string(i) +
                                  " is negative or NaN: " + std::to_string(v[i]));
    }
  }
}

}  // namespace

PolynomialProgram build_program(std::span<const RawTerm> raw_terms, std::size_t num_vars,
                                double sum_constraint) {
  if (num_vars == 0) throw std::invalid_argument("program needs at least one variable");
  if (!(sum_constraint > 0.0) || !std::isfinite(sum_constraint)) {
    throw std::invalid_argument("sum constraint must be positive and finite");
  }

  TermMap merged;
  for (std::size_t t = 0; t < raw_terms.size(); ++t) {
    const auto& raw = raw_terms[t];
    if (raw.indices.empty()) {
      throw std::invalid_argument("term " + std::to_string(t) + " has no indices");
    }
    if (raw.indices.size() > kMaxOrder) {
      throw std::invalid_argument("term " + std::to_string(t) + " has order " +
                                  std::to_string(raw.indices.size()) + " > 5");
    }
    std::vector<VarIndex> key;
    key.reserve(raw.indices.size());
    for (std::size_t idx : raw.indices) {
      if (idx >= num_vars) {
        throw std::invalid_argument("term " + std::to_string(t) + " index " +
                                    std::to_string(idx) + " out of range for " +
                                    std::to_string(num_vars) + " variables");
      }
      key.push_back(static_cast<VarIndex>(idx));
    }
    std::sort(key.begin(), key.end());
    merged[std::move(key)] += raw.coefficient;
  }

  PolynomialProgram program;
  program.num_vars_ = num_vars;
  program.sum_constraint_ = sum_constraint;
  program.terms_ = canonical_terms(merged);
  return program;
}

PolynomialProgram with_sum_constraint(const PolynomialProgram& program, double sum_constraint) {
  if (!(sum_constraint > 0.0) || !std::isfinite(sum_constraint)) {
    throw std::invalid_argument("sum constraint must be positive and finite");
  }
  PolynomialProgram out = program;
  out.sum_constraint_ = sum_constraint;
  return out;
}

double evaluate_unchecked(const PolynomialProgram& program, std::span<const double> v) noexcept {
  double energy = 0.0;
  for (const auto& term : program.terms()) energy += term.coefficient() * term.product(v);
  return energy;
}

double evaluate(const PolynomialProgram& program, std::span<const double> v) {
  check_point(program, v);
  return evaluate_unchecked(program, v);
}

void gradient_into(const PolynomialProgram& program, std::span<const double> v,
                   std::span<double> out) noexcept {
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto& term : program.terms()) term.accumulate_gradient(v, out);
}

std::vector<double> gradient(const PolynomialProgram& program, std::span<const double> v) {
  check_point(program, v);
  std::vector<double> grad(program.num_vars());
  gradient_into(program, v, grad);
  return grad;
}

PolynomialProgram add_slack(const PolynomialProgram& program) {
  PolynomialProgram out = program;
  out.num_vars_ = program.num_vars_ + 1;
  return out;
}

ShiftedProgram shift_variables(const PolynomialProgram& program,
                               std::span<const double> offsets) {
  if (offsets.size() != program.num_vars()) {
    throw std::invalid_argument("offset vector has " + std::to_string(offsets.size()) +
                                " entries, program has " +
                                std::to_string(program.num_vars()) + " variables");
  }
  double offset_sum = 0.0;
  for (double o : offsets) {
    if (!std::isfinite(o)) throw std::invalid_argument("offsets must be finite");
    offset_sum += o;
  }
  const double shifted_sum = program.sum_constraint() - offset_sum;
  if (!(shifted_sum > 0.0)) {
    throw std::invalid_argument("shifted sum constraint R - sum(offsets) must stay positive");
  }

  // prod_k (u_k + o_k) = sum over subsets S of prod_{k in S} u_k * prod_{k not in S} o_k
  TermMap merged;
  double constant = 0.0;
  std::vector<VarIndex> key;
  for (const auto& term : program.terms()) {
    const auto idx = term.indices();
    const std::size_t order = idx.size();
    for (unsigned mask = 0; mask < (1u << order); ++mask) {
      double coeff = term.coefficient();
      key.clear();
      for (std::size_t k = 0; k < order; ++k) {
        if (mask & (1u << k)) {
          key.push_back(idx[k]);
        } else {
          coeff *= offsets[idx[k]];
        }
      }
      if (coeff == 0.0) continue;
      if (key.empty()) {
        constant += coeff;
      } else {
        merged[key] += coeff;  // key stays sorted: subsequence of sorted indices
      }
    }
  }

  for (const auto& [key, coeff] : merged) {
    if (!std::isfinite(coeff)) throw std::overflow_error("shifted coefficient overflowed");
  }
  if (!std::isfinite(constant)) throw std::overflow_error("shift constant overflowed");

  std::vector<RawTerm> raw;
  raw.reserve(merged.size());
  for (const auto& [key, coeff] : merged) {
    raw.push_back({std::vector<std::size_t>(key.begin(), key.end()), coeff});
  }
  return {build_program(raw, program.num_vars(), shifted_sum), constant};
}

}  // namespace ecomp
