#pragma once
#include <stdexcept>
#include <string>

#include "cdo/forms.hpp"

namespace cdo {

struct ParseError : std::runtime_error {
  int line, column;
  std::string message;  // without the position
  ParseError(int l, int c, const std::string& msg);
};

// Expressions over b1..bd, B1..Bd (conjugates), db1.., dB1.., the unit i, rational
// literals and + - * / ^ with parentheses. '*' between forms is the wedge product.
// line/col locate the first character of text inside a larger file.
PQForm parse_form(const std::string& text, int line = 1, int col = 1);
SmoothPoly parse_poly(const std::string& text, int line = 1, int col = 1);
// printed in the grammar above, so parse_form(form_expr(w)) == w
std::string form_expr(const PQForm& w);

}  // namespace cdo
