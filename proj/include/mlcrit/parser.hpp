#pragma once

#include "mlcrit/polynomial.hpp"

#include <string_view>

namespace mlcrit {

// Parse the textual polynomial grammar: integer and rational (a/b) constants,
// ring variables, + - * / ^ and parentheses, with ^ binding tightest. There is
// no implicit multiplication. Division is only defined by nonzero constants.
// Throws ParseError (with a byte offset) or UnknownVariableError.
Polynomial parse_polynomial(const RingPtr& ring, std::string_view text);

} // namespace mlcrit
