#include "ecomp/program_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "ecomp/errors.hpp"
#include "text_util.hpp"

namespace ecomp {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

PolynomialProgram read_program(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::size_t num_vars = 0;
  double sum_constraint = 0.0;
  std::vector<RawTerm> raw;

  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = detail::split_fields(detail::strip_comment(line));
    if (fields.empty()) continue;

    if (!have_header) {
      if (fields.size() != 3 || fields[0] != "poly") {
        throw ParseError("expected header 'poly N R'", line_no);
      }
      num_vars = detail::parse_size(fields[1], line_no);
      sum_constraint = detail::parse_double(fields[2], line_no);
      if (num_vars == 0) throw ParseError("N must be positive", line_no);
      if (!(sum_constraint > 0.0)) throw ParseError("R must be positive", line_no);
      have_header = true;
      continue;
    }

    if (fields.size() < 2) throw ParseError("term needs a coefficient and an index", line_no);
    if (fields.size() > kMaxOrder + 1) throw ParseError("term order exceeds 5", line_no);
    RawTerm term;
    term.coefficient = detail::parse_double(fields[0], line_no);
    for (std::size_t k = 1; k < fields.size(); ++k) {
      const std::size_t idx = detail::parse_size(fields[k], line_no);
      if (idx >= num_vars) {
        throw ParseError("index " + std::to_string(idx) + " out of range", line_no);
      }
      term.indices.push_back(idx);
    }
    raw.push_back(std::move(term));
  }

  if (!have_header) throw ParseError("missing 'poly N R' header", line_no);
  return build_program(raw, num_vars, sum_constraint);
}

PolynomialProgram read_program_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return read_program(in);
}

void write_program(std::ostream& out, const PolynomialProgram& program,
                   const std::string& comment) {
  if (!comment.empty()) {
    std::istringstream lines(comment);
    std::string line;
    while (std::getline(lines, line)) out << "# " << line << '\n';
  }
  out << "poly " << program.num_vars() << ' ' << format_double(program.sum_constraint())
      << '\n';
  for (const auto& term : program.terms()) {
    out << format_double(term.coefficient());
    for (VarIndex i : term.indices()) out << ' ' << i;
    out << '\n';
  }
}

void write_program_file(const std::filesystem::path& path, const PolynomialProgram& program,
                        const std::string& comment) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_program(out, program, comment);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace ecomp
