#include <cctype>
#include <charconv>
#include <cstdio>
#include <string>

#include "fatou/algebra.hpp"

namespace fatou {

namespace {

// Recursive-descent reader for polynomial expressions over z, w with
// complex literals. Grammar:
//   expr   := [+|-] term { (+|-) term }
//   term   := power { * power }
//   power  := atom [ ^ integer ]
//   atom   := number[i] | i | z | w | ( expr )
class PolyReader {
 public:
  explicit PolyReader(std::string_view text) : text_(text) {}

  BivarPoly read() {
    BivarPoly p = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::Parse, msg + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  BivarPoly expr() {
    BivarPoly acc;
    bool negate = false;
    if (accept('-')) negate = true;
    else accept('+');
    BivarPoly first = term();
    acc = negate ? -first : first;
    for (;;) {
      if (accept('+')) acc = acc + term();
      else if (accept('-')) acc = acc - term();
      else break;
    }
    return acc;
  }

  BivarPoly term() {
    BivarPoly acc = power();
    while (accept('*')) acc = acc * power();
    return acc;
  }

  BivarPoly power() {
    BivarPoly base = atom();
    if (accept('^')) {
      skip_space();
      int n = 0;
      auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), n);
      if (ec != std::errc() || n < 0) fail("expected a non-negative integer exponent");
      pos_ = static_cast<std::size_t>(ptr - text_.data());
      base = base.pow(n);
    }
    return base;
  }

  BivarPoly atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      BivarPoly inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (c == 'z') {
      ++pos_;
      return BivarPoly::z();
    }
    if (c == 'w') {
      ++pos_;
      return BivarPoly::w();
    }
    if (c == 'i') {
      ++pos_;
      return BivarPoly::constant(Complex(0.0, 1.0));
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
      if (ec != std::errc()) fail("malformed number");
      pos_ = static_cast<std::size_t>(ptr - text_.data());
      if (pos_ < text_.size() && text_[pos_] == 'i') {
        ++pos_;
        return BivarPoly::constant(Complex(0.0, value));
      }
      return BivarPoly::constant(value);
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);
  return buf;
}

}  // namespace

BivarPoly parse_poly(std::string_view text) { return PolyReader(text).read(); }

std::string format_complex(Complex c) {
  std::string im = format_double(c.imag());
  if (im.front() != '-') im.insert(im.begin(), '+');
  return "(" + format_double(c.real()) + im + "i)";
}

std::string format_poly(const BivarPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& [e, c] : p.terms()) {
    if (!out.empty()) out += " + ";
    out += format_complex(c);
    if (e.first > 0) out += e.first == 1 ? "*z" : "*z^" + std::to_string(e.first);
    if (e.second > 0) out += e.second == 1 ? "*w" : "*w^" + std::to_string(e.second);
  }
  return out;
}

}  // namespace fatou
