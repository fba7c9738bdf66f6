#pragma once

#include <stdexcept>
#include <string>

namespace sendovlab {

// Violated precondition or inconsistent input.
struct contract_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Exceeds a configured capacity limit (e.g. maximum polynomial degree).
struct capacity_error : contract_error {
  using contract_error::contract_error;
};

// Numerical failure: non-convergence, lost precision, singular systems.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Data sits too close to a stratum boundary to classify reliably
// (e.g. a critical point within the separation tolerance of a zero).
struct degeneracy_error : numeric_error {
  using numeric_error::numeric_error;
};

// Continuation reached the boundary of the current stratum.
struct boundary_error : numeric_error {
  using numeric_error::numeric_error;
};

// Malformed textual input; carries a 1-based line and column.
struct parse_error : contract_error {
  parse_error(const std::string& msg, int line, int column)
      : contract_error(msg + " (line " + std::to_string(line) + ", column " +
                       std::to_string(column) + ")"),
        line(line),
        column(column) {}
  int line;
  int column;
};

}  // namespace sendovlab
