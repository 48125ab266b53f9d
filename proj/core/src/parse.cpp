#include "cdo/parse.hpp"

#include <cctype>

namespace cdo {

ParseError::ParseError(int l, int c, const std::string& msg)
    : std::runtime_error("line " + std::to_string(l) + ", column " + std::to_string(c) + ": " + msg), line(l), column(c), message(msg) {}

namespace {

class ExprParser {
 public:
  ExprParser(const std::string& s, int line, int col) : s_(s), line_(line), col0_(col) {}

  PQForm run() {
    skip();
    if (pos_ >= s_.size()) fail("empty expression");
    PQForm r = expr();
    skip();
    if (pos_ < s_.size()) fail(std::string("unexpected '") + s_[pos_] + "'");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(line_, col0_ + static_cast<int>(pos_), msg);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  long uint() {
    skip();
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected a number");
    long v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = 10 * v + (s_[pos_++] - '0');
      if (v > 1000000000L) fail("number too large");
    }
    return v;
  }

  PQForm expr() {
    PQForm r = term();
    for (;;) {
      if (eat('+')) r += term();
      else if (eat('-')) r -= term();
      else return r;
    }
  }

  PQForm term() {
    PQForm r = factor();
    for (;;) {
      if (eat('*')) {
        r = wedge(r, factor());
      } else if (eat('/')) {
        size_t at = pos_;
        PQForm den = factor();
        SmoothPoly c = den.function();
        if (!den.is_type(0, 0) || !c.is_constant() || c.is_zero()) {
          pos_ = at;
          fail("division only by a nonzero constant");
        }
        r = (GaussRat(1) / c.constant_term()) * r;
      } else {
        return r;
      }
    }
  }

  PQForm factor() {
    if (eat('-')) return -factor();
    if (eat('+')) return factor();
    PQForm base = atom();
    if (eat('^')) {
      long e = uint();
      if (e > 64) fail("exponent too large");
      PQForm r(SmoothPoly(1));
      for (long k = 0; k < e; ++k) r = wedge(r, base);
      return r;
    }
    return base;
  }

  int index_after(size_t start) {
    pos_ = start;
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected a variable index");
    long v = uint();
    if (v < 1 || v > kMaxDim) fail("variable index out of range");
    return static_cast<int>(v);
  }

  PQForm atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      PQForm r = expr();
      if (!eat(')')) fail("expected ')'");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return PQForm(SmoothPoly(uint()));
    if (c == 'i' && !(pos_ + 1 < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_ + 1])))) {
      ++pos_;
      return PQForm(SmoothPoly(I_unit));
    }
    if (c == 'b' || c == 'B') return PQForm(SmoothPoly::var(index_after(pos_ + 1), c == 'B'));
    if (c == 'd' && pos_ + 1 < s_.size() && (s_[pos_ + 1] == 'b' || s_[pos_ + 1] == 'B')) {
      bool bar = s_[pos_ + 1] == 'B';
      int i = index_after(pos_ + 2);
      return bar ? PQForm::dbbar(i) : PQForm::db(i);
    }
    fail(std::string("unexpected '") + c + "'");
  }

  const std::string& s_;
  size_t pos_ = 0;
  int line_, col0_;
};

}  // namespace

PQForm parse_form(const std::string& text, int line, int col) { return ExprParser(text, line, col).run(); }

SmoothPoly parse_poly(const std::string& text, int line, int col) {
  PQForm f = parse_form(text, line, col);
  if (!f.is_type(0, 0)) throw ParseError(line, col, "expected a function, found a differential form");
  return f.function();
}

std::string form_expr(const PQForm& w) {
  if (w.is_zero()) return "0";
  std::string out;
  for (auto& [m, f] : w.terms()) {
    std::string basis;
    for (int i = 1; i <= kMaxDim; ++i)
      if (m & hol_bit(i)) basis += "*db" + std::to_string(i);
    for (int i = 1; i <= kMaxDim; ++i)
      if (m & bar_bit(i)) basis += "*dB" + std::to_string(i);
    if (!out.empty()) out += " + ";
    out += basis.empty() ? "(" + f.str() + ")" : "(" + f.str() + ")" + basis;
  }
  return out;
}

}  // namespace cdo
