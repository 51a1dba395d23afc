#pragma once

// Max-k-cut as a polynomial program. Node i gets a block of k variables
// s_{i,0..k-1} (program index i*k + c); a one-hot block means "node i has
// color c". The cost is
//
//   sum_edges w_ij sum_c s_ic s_jc  +  lambda sum_i (1 - sum_c s_ic)^2
//
// The first part counts uncut edge weight on one-hot points; the second pulls
// every block toward unit mass. The constant n*lambda of the penalty is not a
// monomial and is reported separately.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "ecomp/polynomial.hpp"

namespace ecomp {

struct Edge {
  std::size_t u = 0;  // u < v
  std::size_t v = 0;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

class Graph {
 public:
  Graph() = default;
  // Normalizes each edge to u < v. Throws std::invalid_argument on
  // self-loops, duplicates, or endpoints >= num_nodes.
  Graph(std::size_t num_nodes, std::vector<Edge> edges);

  std::size_t num_nodes() const noexcept { return num_nodes_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  double total_weight() const noexcept;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::size_t num_nodes_ = 0;
  std::vector<Edge> edges_;
};

// Erdos-Renyi G(n, p): every pair independently with probability p.
Graph random_graph(std::size_t n, double p, std::uint64_t seed);

struct PottsEncoding {
  std::size_t graph_nodes = 0;
  std::size_t num_colors = 0;
  double lambda = 0.0;
  // Constant dropped from the penalty; add it to the program energy to get
  // the full cost.
  double constant = 0.0;

  std::size_t var_index(std::size_t node, std::size_t color) const noexcept {
    return node * num_colors + color;
  }
  std::size_t num_vars() const noexcept { return graph_nodes * num_colors; }
};

struct EncodedProblem {
  PolynomialProgram program;
  PottsEncoding encoding;
};

inline constexpr double kDefaultLambda = 5.0;

// Throws std::invalid_argument for k < 2, lambda < 0 or R <= 0.
EncodedProblem encode_max_k_cut(const Graph& graph, std::size_t k, double lambda,
                                double sum_constraint);

// One unit of mass per node.
inline double default_cut_sum(const Graph& graph) {
  return static_cast<double>(graph.num_nodes());
}

// Program energy plus the dropped constant.
double encoded_energy(const EncodedProblem& problem, std::span<const double> v);

using CutAssignment = std::vector<std::size_t>;

// Per node, the color with the largest variable; ties go to the lowest color.
CutAssignment decode(std::span<const double> v, const PottsEncoding& encoding);

// Indicator vector for an assignment: 1 at (i, colors[i]), 0 elsewhere.
std::vector<double> one_hot(const CutAssignment& colors, std::size_t k);

double cut_size(const Graph& graph, const CutAssignment& colors);

// Text format: header `graph n m`, then m lines `i j [w]`, '#' comments.
Graph read_graph(std::istream& in);
Graph read_graph_file(const std::filesystem::path& path);
void write_graph(std::ostream& out, const Graph& graph);

}  // namespace ecomp
