#pragma once

#include <string>

#include "conal/symmat.hpp"

namespace conal {

// Scalar arithmetic for matrix entries: numbers, the constants e and pi,
// + - * / ^ and parentheses, e.g. "1/e", "e^2", "-(3+pi)/2".
double parse_scalar(const std::string& text);

// Matrix shorthand accepted on the command line and in config files:
//   I<k>            identity of dimension k
//   diag(a, b, ...) diagonal with scalar-expression entries
//   [[a,b],[c,d]]   row-major nested array of scalar expressions
// Malformed input raises ValidationError.
Matrix parse_matrix(const std::string& text);

}  // namespace conal
