#include <cctype>
#include <charconv>
#include <numbers>
#include <optional>

#include "jacobi3/errors.hpp"
#include "jacobi3/expr.hpp"

namespace jacobi3 {

namespace {

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, comma, end };

struct Token {
    Tok kind;
    std::size_t offset;
    std::string_view text;
    double number = 0.0;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next()
    {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        const std::size_t start = pos_;
        if (pos_ >= src_.size()) return {Tok::end, start, {}};
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number(start);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
            return {Tok::ident, start, src_.substr(start, pos_ - start)};
        }
        ++pos_;
        switch (c) {
        case '+':
            return {Tok::plus, start, src_.substr(start, 1)};
        case '-':
            return {Tok::minus, start, src_.substr(start, 1)};
        case '*':
            return {Tok::star, start, src_.substr(start, 1)};
        case '/':
            return {Tok::slash, start, src_.substr(start, 1)};
        case '^':
            return {Tok::caret, start, src_.substr(start, 1)};
        case '(':
            return {Tok::lparen, start, src_.substr(start, 1)};
        case ')':
            return {Tok::rparen, start, src_.substr(start, 1)};
        case ',':
            return {Tok::comma, start, src_.substr(start, 1)};
        default:
            throw SyntaxError(std::string("unexpected character '") + c + "'", start);
        }
    }

private:
    Token number(std::size_t start)
    {
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                ++pos_;
                ++n;
            }
            return n;
        };
        std::size_t mantissa = digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            mantissa += digits();
        }
        if (mantissa == 0) throw SyntaxError("malformed number", start);
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t probe = pos_ + 1;
            if (probe < src_.size() && (src_[probe] == '+' || src_[probe] == '-')) ++probe;
            if (probe < src_.size() && std::isdigit(static_cast<unsigned char>(src_[probe]))) {
                pos_ = probe;
                digits();
            }
        }
        const std::string_view text = src_.substr(start, pos_ - start);
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc() || ptr != text.data() + text.size()) throw SyntaxError("malformed number", start);
        return {Tok::number, start, text, value};
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

std::optional<Var> lookup_var(std::string_view name)
{
    for (std::size_t i = 0; i < var_count; ++i) {
        if (var_name(static_cast<Var>(i)) == name) return static_cast<Var>(i);
    }
    return std::nullopt;
}

std::optional<Op> lookup_unary(std::string_view name)
{
    static constexpr std::pair<std::string_view, Op> table[] = {
        {"sin", Op::sin}, {"cos", Op::cos},   {"tan", Op::tan}, {"exp", Op::exp},
        {"ln", Op::ln},   {"sqrt", Op::sqrt}, {"abs", Op::abs}, {"sign", Op::sign},
    };
    for (const auto& [n, op] : table) {
        if (n == name) return op;
    }
    return std::nullopt;
}

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) { advance(); }

    Expr parse_all()
    {
        Expr e = expr();
        if (tok_.kind != Tok::end) throw SyntaxError("unexpected '" + std::string(tok_.text) + "'", tok_.offset);
        return e;
    }

private:
    void advance() { tok_ = lex_.next(); }

    void expect(Tok kind, const char* what)
    {
        if (tok_.kind != kind) {
            throw SyntaxError(std::string("expected ") + what + (tok_.kind == Tok::end ? " before end of input" : ""),
                              tok_.offset);
        }
        advance();
    }

    Expr expr()
    {
        Expr lhs = term();
        while (tok_.kind == Tok::plus || tok_.kind == Tok::minus) {
            const Op op = tok_.kind == Tok::plus ? Op::add : Op::sub;
            advance();
            lhs = Expr::binary(op, lhs, term());
        }
        return lhs;
    }

    Expr term()
    {
        Expr lhs = unary();
        while (tok_.kind == Tok::star || tok_.kind == Tok::slash) {
            const Op op = tok_.kind == Tok::star ? Op::mul : Op::div;
            advance();
            lhs = Expr::binary(op, lhs, unary());
        }
        return lhs;
    }

    Expr unary()
    {
        if (tok_.kind == Tok::minus) {
            advance();
            // A sign directly on a literal is part of the literal, so printed
            // negative constants reparse to the same node.
            if (tok_.kind == Tok::number) {
                const double magnitude = tok_.number;
                advance();
                if (tok_.kind != Tok::caret) return Expr(-magnitude);
                advance();
                return Expr::unary(Op::neg, Expr::binary(Op::pow, Expr(magnitude), unary()));
            }
            return Expr::unary(Op::neg, unary());
        }
        return power();
    }

    Expr power()
    {
        Expr base = atom();
        if (tok_.kind == Tok::caret) {
            advance();
            return Expr::binary(Op::pow, base, unary());
        }
        return base;
    }

    Expr atom()
    {
        const Token t = tok_;
        switch (t.kind) {
        case Tok::number:
            advance();
            return Expr(t.number);
        case Tok::lparen: {
            advance();
            Expr inner = expr();
            expect(Tok::rparen, "')'");
            return inner;
        }
        case Tok::ident:
            advance();
            return identifier(t);
        case Tok::end:
            throw SyntaxError("unexpected end of input", t.offset);
        default:
            throw SyntaxError("unexpected '" + std::string(t.text) + "'", t.offset);
        }
    }

    Expr identifier(const Token& t)
    {
        if (auto v = lookup_var(t.text)) return Expr::variable(*v);
        if (t.text == "pi") return Expr(std::numbers::pi);
        if (t.text == "e") return Expr(std::numbers::e);
        const auto unary_op = lookup_unary(t.text);
        const bool is_atan2 = t.text == "atan2";
        if (!unary_op && !is_atan2) throw UnknownIdentifier(std::string(t.text), t.offset);
        if (tok_.kind != Tok::lparen) throw SyntaxError("expected '(' after " + std::string(t.text), tok_.offset);
        advance();
        Expr first = expr();
        if (is_atan2) {
            expect(Tok::comma, "',' (atan2 takes two arguments)");
            Expr second = expr();
            expect(Tok::rparen, "')'");
            return Expr::binary(Op::atan2, first, second);
        }
        if (tok_.kind == Tok::comma) throw SyntaxError(std::string(t.text) + " takes one argument", tok_.offset);
        expect(Tok::rparen, "')'");
        return Expr::unary(*unary_op, first);
    }

    Lexer lex_;
    Token tok_{Tok::end, 0, {}};
};

} // namespace

Expr parse(std::string_view source) { return Parser(source).parse_all(); }

Expr parse(std::string_view source, VarSet allowed)
{
    Expr e = parse(source);
    const VarSet extra = variables(e) & static_cast<VarSet>(~allowed);
    if (extra != 0) {
        for (std::size_t i = 0; i < var_count; ++i) {
            if (extra & var_bit(static_cast<Var>(i))) {
                const std::string name(var_name(static_cast<Var>(i)));
                const auto at = source.find(name);
                throw UnknownIdentifier(name, at == std::string_view::npos ? 0 : at);
            }
        }
    }
    return e;
}

} // namespace jacobi3
