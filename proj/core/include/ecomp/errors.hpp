#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ecomp {

// Malformed input text (problem, graph, schedule, summary files).
// line() is 1-based, 0 when the error is not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Every bin of the feedback loop went dark: no photons to normalize.
class DegenerateStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An exhaustive search would exceed its configured work limit.
class GuardExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Solver failure inside a batch, tagged with the run that failed.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::size_t run_index);

  std::size_t run_index() const noexcept { return run_index_; }

 private:
  std::size_t run_index_;
};

}  // namespace ecomp
