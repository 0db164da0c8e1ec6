#include <cctype>
#include <charconv>
#include <optional>

#include "crnrobust/ltl.hpp"

namespace crnrobust {

namespace {

enum class Tok {
    End,
    LParen,
    RParen,
    Name,  // [..]
    Number,
    Ident,
    Not,
    And,
    Or,
    Implies,
    Cmp,
    Minus,
};

struct Token {
    Tok kind = Tok::End;
    std::size_t pos = 0;
    std::string text;
    double number = 0.0;
    Cmp cmp = Cmp::Less;
};

class Lexer {
public:
    explicit Lexer(std::string_view s) : s_(s) {}

    Token next() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
        Token t;
        t.pos = i_;
        if (i_ >= s_.size()) return t;
        const char c = s_[i_];
        auto peek = [&](std::size_t k) { return i_ + k < s_.size() ? s_[i_ + k] : '\0'; };
        switch (c) {
            case '(': ++i_; t.kind = Tok::LParen; return t;
            case ')': ++i_; t.kind = Tok::RParen; return t;
            case '!': ++i_; t.kind = Tok::Not; return t;
            case '&': i_ += peek(1) == '&' ? 2 : 1; t.kind = Tok::And; return t;
            case '|': i_ += peek(1) == '|' ? 2 : 1; t.kind = Tok::Or; return t;
            case '-':
                if (peek(1) == '>') {
                    i_ += 2;
                    t.kind = Tok::Implies;
                    return t;
                }
                ++i_;
                t.kind = Tok::Minus;
                return t;
            case '<':
            case '>':
                t.kind = Tok::Cmp;
                if (peek(1) == '=') {
                    t.cmp = c == '<' ? Cmp::LessEq : Cmp::GreaterEq;
                    i_ += 2;
                } else {
                    t.cmp = c == '<' ? Cmp::Less : Cmp::Greater;
                    ++i_;
                }
                return t;
            case '=':
                throw FormulaError(i_, "equality atoms are not supported");
            case '[': {
                const auto close = s_.find(']', i_);
                if (close == std::string_view::npos) throw FormulaError(i_, "unterminated observable name");
                auto name = s_.substr(i_ + 1, close - i_ - 1);
                while (!name.empty() && std::isspace(static_cast<unsigned char>(name.front()))) name.remove_prefix(1);
                while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.remove_suffix(1);
                if (name.empty()) throw FormulaError(i_, "empty observable name");
                t.kind = Tok::Name;
                t.text = std::string(name);
                i_ = close + 1;
                return t;
            }
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(s_.data() + i_, s_.data() + s_.size(), v);
            if (ec != std::errc()) throw FormulaError(i_, "malformed number");
            t.kind = Tok::Number;
            t.number = v;
            i_ = static_cast<std::size_t>(ptr - s_.data());
            return t;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i_;
            while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_')) ++j;
            t.kind = Tok::Ident;
            t.text = std::string(s_.substr(i_, j - i_));
            i_ = j;
            return t;
        }
        throw FormulaError(i_, std::string("unexpected character '") + c + "'");
    }

private:
    std::string_view s_;
    std::size_t i_ = 0;
};

class Parser {
public:
    explicit Parser(std::string_view s) : lex_(s) { advance(); }

    Formula parse() {
        auto f = implication();
        if (cur_.kind != Tok::End) fail("unexpected trailing input");
        return f;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw FormulaError(cur_.pos, cur_.kind == Tok::End ? "unexpected end of input" : msg);
    }

    void advance() { cur_ = lex_.next(); }

    bool is_ident(std::string_view s) const { return cur_.kind == Tok::Ident && cur_.text == s; }

    void expect(Tok k, const char* what) {
        if (cur_.kind != k) fail(std::string("expected ") + what);
        advance();
    }

    Formula implication() {
        auto lhs = disjunction();
        if (cur_.kind == Tok::Implies) {
            advance();
            return Formula::implication(std::move(lhs), implication());
        }
        return lhs;
    }

    Formula disjunction() {
        auto f = conjunction();
        while (cur_.kind == Tok::Or) {
            advance();
            f = Formula::disjunction(std::move(f), conjunction());
        }
        return f;
    }

    Formula conjunction() {
        auto f = until();
        while (cur_.kind == Tok::And) {
            advance();
            f = Formula::conjunction(std::move(f), until());
        }
        return f;
    }

    Formula until() {
        auto lhs = unary();
        if (is_ident("U")) {
            advance();
            return Formula::until(std::move(lhs), until());
        }
        return lhs;
    }

    Formula unary() {
        if (cur_.kind == Tok::Not) {
            advance();
            return Formula::negation(unary());
        }
        if (is_ident("F") || is_ident("G") || is_ident("X")) {
            const char op = cur_.text[0];
            advance();
            auto f = unary();
            return op == 'F' ? Formula::finally(std::move(f)) : op == 'G' ? Formula::globally(std::move(f))
                                                                          : Formula::next(std::move(f));
        }
        return primary();
    }

    Formula primary() {
        if (cur_.kind == Tok::LParen) {
            advance();
            auto f = implication();
            expect(Tok::RParen, "')'");
            return f;
        }
        if (is_ident("true")) {
            advance();
            return Formula::truth();
        }
        if (is_ident("false")) {
            advance();
            return Formula::negation(Formula::truth());
        }
        if (cur_.kind == Tok::Name) return atom();
        fail("expected a formula");
    }

    Formula atom() {
        std::string name = cur_.text;
        advance();
        if (cur_.kind != Tok::Cmp) fail("expected a comparison operator");
        const Cmp op = cur_.cmp;
        advance();
        if (cur_.kind == Tok::Minus) {
            advance();
            if (cur_.kind != Tok::Number) fail("expected a number");
            const double v = -cur_.number;
            advance();
            return Formula::atom(std::move(name), op, v);
        }
        if (cur_.kind == Tok::Number) {
            const double v = cur_.number;
            advance();
            return Formula::atom(std::move(name), op, v);
        }
        if (cur_.kind == Tok::Ident && cur_.text.size() > 1 && cur_.text[0] == 'y') {
            std::size_t k = 0;
            const auto& t = cur_.text;
            auto [ptr, ec] = std::from_chars(t.data() + 1, t.data() + t.size(), k);
            if (ec != std::errc() || ptr != t.data() + t.size() || k == 0) fail("variables are written y1, y2, ...");
            advance();
            return Formula::atom(std::move(name), op, Variable{k - 1});
        }
        fail("expected a number or a variable y<k>");
    }

    Lexer lex_;
    Token cur_;
};

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text).parse(); }

}  // namespace crnrobust
