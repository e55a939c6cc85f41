#include "ermakov/errors.hpp"
#include "ermakov/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace ermakov {

namespace {

class Parser {
public:
    Parser(std::string_view src, std::string_view var) : src_(src), var_(var) {}

    NodePtr parse_all() {
        NodePtr e = expr();
        skip_ws();
        if (pos_ < src_.size()) fail(std::string("unexpected '") + src_[pos_] + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError("syntax error: " + what, pos_); }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+'))
                lhs = detail::make_binary(Op::add, lhs, term());
            else if (accept('-'))
                lhs = detail::make_binary(Op::sub, lhs, term());
            else
                return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*'))
                lhs = detail::make_binary(Op::mul, lhs, unary());
            else if (accept('/'))
                lhs = detail::make_binary(Op::div, lhs, unary());
            else
                return lhs;
        }
    }

    // Unary minus binds looser than '^': -t^2 == -(t^2).
    NodePtr unary() {
        if (accept('-')) return detail::make_unary(Op::neg, unary());
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) {
            skip_ws();
            double sign = 1.0;
            if (pos_ < src_.size() && (src_[pos_] == '-' || src_[pos_] == '+')) {
                if (src_[pos_] == '-') sign = -1.0;
                ++pos_;
            }
            skip_ws();
            if (pos_ >= src_.size() || !starts_number(src_[pos_]))
                fail("exponent must be a numeric literal");
            base = detail::make_pow(base, sign * number());
            skip_ws();
            if (pos_ < src_.size() && src_[pos_] == '^') fail("chained '^' is not supported; use parentheses");
        }
        return base;
    }

    static bool starts_number(char c) { return std::isdigit(static_cast<unsigned char>(c)) || c == '.'; }

    double number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                ++pos_;
                ++n;
            }
            return n;
        };
        std::size_t n = digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            n += digits();
        }
        if (n == 0) {
            pos_ = start;
            fail("malformed number");
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            const std::size_t mark = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (digits() == 0) pos_ = mark;  // "2e" is 2 followed by an identifier
        }
        double v = 0.0;
        const char* first = src_.data() + start;
        const char* last = src_.data() + pos_;
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
            pos_ = start;
            fail("malformed number");
        }
        return v;
    }

    std::string_view identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        return src_.substr(start, pos_ - start);
    }

    NodePtr primary() {
        skip_ws();
        if (pos_ >= src_.size()) fail("unexpected end of input");
        const char c = src_[pos_];
        if (starts_number(c)) return detail::make_constant(number());
        if (c == '(') {
            ++pos_;
            NodePtr inner = expr();
            expect(')');
            return inner;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            const std::string_view name = identifier();
            skip_ws();
            const bool call = pos_ < src_.size() && src_[pos_] == '(';
            if (call) {
                Op op;
                if (name == "sin") op = Op::sin;
                else if (name == "cos") op = Op::cos;
                else if (name == "exp") op = Op::exp;
                else if (name == "ln") op = Op::ln;
                else if (name == "sqrt") op = Op::sqrt;
                else throw ParseError("unknown function '" + std::string(name) + "'", start);
                ++pos_;
                NodePtr arg = expr();
                expect(')');
                return detail::make_unary(op, arg);
            }
            if (name == var_) return detail::make_variable();
            if (name == "sin" || name == "cos" || name == "exp" || name == "ln" || name == "sqrt")
                throw ParseError("function '" + std::string(name) + "' needs an argument list", start);
            throw ParseError("variable mismatch: '" + std::string(name) + "' is not the declared variable '" +
                                 std::string(var_) + "'",
                             start);
        }
        fail(std::string("unexpected '") + c + "'");
    }

    std::string_view src_;
    std::string_view var_;
    std::size_t pos_ = 0;
};

bool valid_var_name(std::string_view v) {
    if (v.empty() || !(std::isalpha(static_cast<unsigned char>(v[0])) || v[0] == '_')) return false;
    for (char c : v)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return !(v == "sin" || v == "cos" || v == "exp" || v == "ln" || v == "sqrt");
}

} // namespace

Expr parse(std::string_view source, std::string_view var_name) {
    if (!valid_var_name(var_name)) throw ParseError("invalid variable name '" + std::string(var_name) + "'", 0);
    Parser p(source, var_name);
    return {p.parse_all(), std::string(var_name)};
}

} // namespace ermakov
