#include "chcross/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace chcross {

namespace {

using Fn = std::function<double(double, double)>;

struct Parser {
  const std::string& text;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("expression error at position " +
                                std::to_string(pos + 1) + ": " + what);
  }

  void skip_space() {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
  }

  bool consume(char c) {
    skip_space();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  bool consume_word(const char* word) {
    skip_space();
    std::size_t k = 0;
    while (word[k] != '\0') {
      if (pos + k >= text.size() || text[pos + k] != word[k]) return false;
      ++k;
    }
    // a word must not run into another identifier character
    if (pos + k < text.size() &&
        std::isalpha(static_cast<unsigned char>(text[pos + k]))) {
      return false;
    }
    pos += k;
    return true;
  }

  Fn parse() {
    Fn e = sum();
    skip_space();
    if (pos != text.size()) fail("unexpected trailing input");
    return e;
  }

  Fn sum() {
    Fn lhs = product();
    for (;;) {
      if (consume('+')) {
        Fn rhs = product();
        lhs = [lhs, rhs](double x, double y) { return lhs(x, y) + rhs(x, y); };
      } else if (consume('-')) {
        Fn rhs = product();
        lhs = [lhs, rhs](double x, double y) { return lhs(x, y) - rhs(x, y); };
      } else {
        return lhs;
      }
    }
  }

  Fn product() {
    Fn lhs = unary();
    for (;;) {
      if (consume('*')) {
        Fn rhs = unary();
        lhs = [lhs, rhs](double x, double y) { return lhs(x, y) * rhs(x, y); };
      } else if (consume('/')) {
        Fn rhs = unary();
        lhs = [lhs, rhs](double x, double y) { return lhs(x, y) / rhs(x, y); };
      } else {
        return lhs;
      }
    }
  }

  Fn unary() {
    if (consume('-')) {
      Fn inner = unary();
      return [inner](double x, double y) { return -inner(x, y); };
    }
    if (consume('+')) return unary();
    return primary();
  }

  Fn primary() {
    skip_space();
    if (pos >= text.size()) fail("expected a value");
    if (consume('(')) {
      Fn inner = sum();
      if (!consume(')')) fail("expected ')'");
      return inner;
    }
    if (consume_word("cos")) return call(std::cos);
    if (consume_word("sin")) return call(std::sin);
    if (consume_word("x")) {
      return [](double x, double) { return x; };
    }
    if (consume_word("y")) {
      return [](double, double y) { return y; };
    }
    return number();
  }

  Fn call(double (*fn)(double)) {
    if (!consume('(')) fail("expected '(' after function name");
    Fn arg = sum();
    if (!consume(')')) fail("expected ')'");
    return [fn, arg](double x, double y) { return fn(arg(x, y)); };
  }

  Fn number() {
    skip_space();
    double value = 0.0;
    const char* begin = text.data() + pos;
    const char* end = text.data() + text.size();
    const std::from_chars_result res = std::from_chars(begin, end, value);
    if (res.ec != std::errc() || res.ptr == begin) fail("expected a number");
    pos = static_cast<std::size_t>(res.ptr - text.data());
    return [value](double, double) { return value; };
  }
};

}  // namespace

std::function<double(double, double)> parse_expression(const std::string& text) {
  Parser parser{text};
  return parser.parse();
}

}  // namespace chcross
