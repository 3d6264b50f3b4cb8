#pragma once

#include <functional>
#include <string>

namespace chcross {

// Compiles a tiny arithmetic expression in x and y into an evaluator.
// Grammar: decimal literals, the variables x and y, + - * /, unary minus,
// cos(...), sin(...) and parentheses; nothing else. Throws
// std::invalid_argument naming the offending character position.
std::function<double(double, double)> parse_expression(const std::string& text);

}  // namespace chcross
