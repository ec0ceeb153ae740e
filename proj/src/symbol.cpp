#include "ellbill/symbol.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "ellbill/error.hpp"

namespace ellbill {

struct Expression::Node {
    enum class Kind { Number, Variable, Neg, Add, Sub, Mul, Div, Pow, Cos, Sin, Exp, Sqrt, Abs } kind;
    double number = 0;
    std::shared_ptr<const Node> lhs, rhs;

    double eval(double x) const {
        switch (kind) {
            case Kind::Number: return number;
            case Kind::Variable: return x;
            case Kind::Neg: return -lhs->eval(x);
            case Kind::Add: return lhs->eval(x) + rhs->eval(x);
            case Kind::Sub: return lhs->eval(x) - rhs->eval(x);
            case Kind::Mul: return lhs->eval(x) * rhs->eval(x);
            case Kind::Div: return lhs->eval(x) / rhs->eval(x);
            case Kind::Pow: return std::pow(lhs->eval(x), rhs->eval(x));
            case Kind::Cos: return std::cos(lhs->eval(x));
            case Kind::Sin: return std::sin(lhs->eval(x));
            case Kind::Exp: return std::exp(lhs->eval(x));
            case Kind::Sqrt: return std::sqrt(lhs->eval(x));
            case Kind::Abs: return std::abs(lhs->eval(x));
        }
        return 0;
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr, double v = 0) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = k;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    n->number = v;
    return n;
}

class Parser {
public:
    Parser(std::string_view s, const std::string& var) : s_(s), var_(var) {}

    NodePtr parse() {
        NodePtr n = expr();
        skip();
        if (pos_ != s_.size()) error("unexpected trailing input");
        return n;
    }

private:
    [[noreturn]] void error(const std::string& what) const {
        fail(ErrorCode::ParseError, what + " at position " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr n = term();
        for (;;) {
            if (accept('+')) n = make(Kind::Add, n, term());
            else if (accept('-')) n = make(Kind::Sub, n, term());
            else return n;
        }
    }

    NodePtr term() {
        NodePtr n = unary();
        for (;;) {
            if (accept('*')) n = make(Kind::Mul, n, unary());
            else if (accept('/')) n = make(Kind::Div, n, unary());
            else return n;
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Kind::Neg, unary());
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return make(Kind::Pow, base, unary());
        return base;
    }

    NodePtr primary() {
        skip();
        if (pos_ >= s_.size()) error("unexpected end of input");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr n = expr();
            if (!accept(')')) error("expected ')'");
            return n;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            const std::string name(s_.substr(start, pos_ - start));
            if (name == var_) return make(Kind::Variable);
            if (name == "pi") return make(Kind::Number, nullptr, nullptr, std::numbers::pi);
            Kind k;
            if (name == "cos") k = Kind::Cos;
            else if (name == "sin") k = Kind::Sin;
            else if (name == "exp") k = Kind::Exp;
            else if (name == "sqrt") k = Kind::Sqrt;
            else if (name == "abs") k = Kind::Abs;
            else {
                pos_ = start;
                error("unknown identifier '" + name + "'");
            }
            if (!accept('(')) error("expected '(' after " + name);
            NodePtr arg = expr();
            if (!accept(')')) error("expected ')'");
            return make(k, arg);
        }
        error(std::string("unexpected character '") + c + "'");
    }

    NodePtr number() {
        const std::string rest(s_.substr(pos_));
        char* end = nullptr;
        const double v = std::strtod(rest.c_str(), &end);
        if (end == rest.c_str()) error("malformed number");
        pos_ += static_cast<std::size_t>(end - rest.c_str());
        return make(Kind::Number, nullptr, nullptr, v);
    }

    std::string_view s_;
    const std::string& var_;
    std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression(std::string_view text, std::string variable) : text_(text), variable_(std::move(variable)) {
    root_ = Parser(text_, variable_).parse();
}

double Expression::operator()(double x) const { return root_->eval(x); }

}  // namespace ellbill
