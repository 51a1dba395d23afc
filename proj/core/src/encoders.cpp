#include "ecomp/encoders.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

#include "ecomp/errors.hpp"
#include "ecomp/program_io.hpp"
#include "text_util.hpp"

namespace ecomp {

Graph::Graph(std::size_t num_nodes, std::vector<Edge> edges)
    : num_nodes_(num_nodes), edges_(std::move(edges)) {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (auto& e : edges_) {
    if (e.u == e.v) throw std::invalid_argument("self-loop on node " + std::to_string(e.u));
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.v >= num_nodes_) {
      throw std::invalid_argument("edge endpoint " + std::to_string(e.v) + " out of range");
    }
    if (!seen.emplace(e.u, e.v).second) {
      throw std::invalid_argument("duplicate edge " + std::to_string(e.u) + "-" +
                                  std::to_string(e.v));
    }
  }
}

double Graph::total_weight() const noexcept {
  double w = 0.0;
  for (const auto& e : edges_) w += e.weight;
  return w;
}

Graph random_graph(std::size_t n, double p, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("graph needs at least one node");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("edge probability must be in [0, 1]");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (coin(rng)) edges.push_back({i, j, 1.0});
    }
  }
  return Graph(n, std::move(edges));
}

EncodedProblem encode_max_k_cut(const Graph& graph, std::size_t k, double lambda,
                                double sum_constraint) {
  if (k < 2) throw std::invalid_argument("max-k-cut needs k >= 2");
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  if (!(sum_constraint > 0.0)) throw std::invalid_argument("sum constraint must be > 0");

  PottsEncoding enc{graph.num_nodes(), k, lambda, 0.0};
  std::vector<RawTerm> terms;
  for (const auto& e : graph.edges()) {
    for (std::size_t c = 0; c < k; ++c) {
      terms.push_back({{enc.var_index(e.u, c), enc.var_index(e.v, c)}, e.weight});
    }
  }
  if (lambda != 0.0) {
    // lambda (1 - sum_c s_c)^2 = lambda - 2 lambda sum_c s_c + lambda (sum_c s_c)^2
    for (std::size_t i = 0; i < graph.num_nodes(); ++i) {
      for (std::size_t c = 0; c < k; ++c) {
        const std::size_t a = enc.var_index(i, c);
        terms.push_back({{a}, -2.0 * lambda});
        terms.push_back({{a, a}, lambda});
        for (std::size_t d = c + 1; d < k; ++d) {
          terms.push_back({{a, enc.var_index(i, d)}, 2.0 * lambda});
        }
      }
    }
    enc.constant = lambda * static_cast<double>(graph.num_nodes());
  }
  return {build_program(terms, enc.num_vars(), sum_constraint), enc};
}

double encoded_energy(const EncodedProblem& problem, std::span<const double> v) {
  return evaluate(problem.program, v) + problem.encoding.constant;
}

CutAssignment decode(std::span<const double> v, const PottsEncoding& encoding) {
  if (v.size() != encoding.num_vars()) {
    throw std::invalid_argument("decode: vector length does not match the encoding");
  }
  CutAssignment colors(encoding.graph_nodes, 0);
  for (std::size_t i = 0; i < encoding.graph_nodes; ++i) {
    const auto block = v.subspan(i * encoding.num_colors, encoding.num_colors);
    // max_element returns the first maximum, which is the documented tie-break.
    colors[i] = static_cast<std::size_t>(std::max_element(block.begin(), block.end()) -
                                         block.begin());
  }
  return colors;
}

std::vector<double> one_hot(const CutAssignment& colors, std::size_t k) {
  std::vector<double> v(colors.size() * k, 0.0);
  for (std::size_t i = 0; i < colors.size(); ++i) {
    if (colors[i] >= k) throw std::invalid_argument("color out of range");
    v[i * k + colors[i]] = 1.0;
  }
  return v;
}

double cut_size(const Graph& graph, const CutAssignment& colors) {
  if (colors.size() != graph.num_nodes()) {
    throw std::invalid_argument("assignment length does not match the graph");
  }
  double cut = 0.0;
  for (const auto& e : graph.edges()) {
    if (colors[e.u] != colors[e.v]) cut += e.weight;
  }
  return cut;
}

Graph read_graph(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t n = 0;
  std::size_t m = 0;
  bool have_header = false;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = detail::split_fields(detail::strip_comment(line));
    if (fields.empty()) continue;
    if (!have_header) {
      if (fields.size() != 3 || fields[0] != "graph") {
        throw ParseError("expected header 'graph n m'", line_no);
      }
      n = detail::parse_size(fields[1], line_no);
      m = detail::parse_size(fields[2], line_no);
      if (n == 0) throw ParseError("graph needs at least one node", line_no);
      have_header = true;
      continue;
    }
    if (fields.size() < 2 || fields.size() > 3) {
      throw ParseError("expected edge line 'i j [w]'", line_no);
    }
    Edge e;
    e.u = detail::parse_size(fields[0], line_no);
    e.v = detail::parse_size(fields[1], line_no);
    if (fields.size() == 3) e.weight = detail::parse_double(fields[2], line_no);
    if (e.u >= n || e.v >= n) throw ParseError("edge endpoint out of range", line_no);
    if (e.u == e.v) throw ParseError("self-loop", line_no);
    edges.push_back(e);
  }
  if (!have_header) throw ParseError("missing 'graph n m' header");
  if (edges.size() != m) {
    throw ParseError("header declares " + std::to_string(m) + " edges, found " +
                     std::to_string(edges.size()));
  }
  try {
    return Graph(n, std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

Graph read_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open graph file '" + path.string() + "'");
  return read_graph(in);
}

void write_graph(std::ostream& out, const Graph& graph) {
  out << "graph " << graph.num_nodes() << ' ' << graph.edges().size() << '\n';
  for (const auto& e : graph.edges()) {
    out << e.u << ' ' << e.v;
    if (e.weight != 1.0) out << ' ' << format_double(e.weight);
    out << '\n';
  }
}

}  // namespace ecomp
