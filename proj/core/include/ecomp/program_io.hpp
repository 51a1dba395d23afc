#pragma once

// Text format for polynomial programs:
//
//   # comment
//   poly N R
//   c i1 [i2 [i3 [i4 [i5]]]]
//
// Indices are 0-based; '#' starts a comment anywhere on a line.
// Coefficients are written with 17 significant digits.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "ecomp/polynomial.hpp"

namespace ecomp {

PolynomialProgram read_program(std::istream& in);
PolynomialProgram read_program_file(const std::filesystem::path& path);

void write_program(std::ostream& out, const PolynomialProgram& program,
                   const std::string& comment = {});
void write_program_file(const std::filesystem::path& path, const PolynomialProgram& program,
                        const std::string& comment = {});

// Shortest round-trippable text for a double ("%.17g").
std::string format_double(double value);

}  // namespace ecomp
