#include "ecomp/errors.hpp"

namespace ecomp {

namespace {

std::string with_line(const std::string& what, std::size_t line) {
  if (line == 0) return what;
  return "line " + std::to_string(line) + ": " + what;
}

}  // namespace

ParseError::ParseError(const std::string& what, std::size_t line)
    : std::runtime_error(with_line(what, line)), line_(line) {}

SolverError::SolverError(const std::string& what, std::size_t run_index)
    : std::runtime_error("run " + std::to_string(run_index) + ": " + what),
      run_index_(run_index) {}

}  // namespace ecomp
