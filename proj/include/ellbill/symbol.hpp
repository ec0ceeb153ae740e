#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace ellbill {

/// A compiled scalar expression in one variable.
///
/// Grammar (whitespace ignored):
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := '-' unary | '+' unary | power
///   power   := primary ('^' unary)?        right associative, -2^2 = -4
///   primary := number | 'pi' | variable | func '(' expr ')' | '(' expr ')'
///   func    := cos | sin | exp | sqrt | abs
/// The variable name is fixed at compile time ("theta" or "u").
class Expression {
public:
    Expression(std::string_view text, std::string variable);

    double operator()(double x) const;
    const std::string& text() const { return text_; }
    const std::string& variable() const { return variable_; }

    struct Node;

private:
    std::string text_;
    std::string variable_;
    std::shared_ptr<const Node> root_;
};

}  // namespace ellbill
