#include "mlcrit/parser.hpp"

#include "mlcrit/errors.hpp"

#include <cctype>
#include <string>

namespace mlcrit {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t offset;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        std::size_t start = pos_;
        if (pos_ >= src_.size()) {
            tok_ = {Tok::End, "", start};
            return;
        }
        char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            tok_ = {Tok::Number, std::string(src_.substr(start, pos_ - start)), start};
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            tok_ = {Tok::Ident, std::string(src_.substr(start, pos_ - start)), start};
            return;
        }
        ++pos_;
        switch (c) {
        case '+': tok_ = {Tok::Plus, "+", start}; return;
        case '-': tok_ = {Tok::Minus, "-", start}; return;
        case '*': tok_ = {Tok::Star, "*", start}; return;
        case '/': tok_ = {Tok::Slash, "/", start}; return;
        case '^': tok_ = {Tok::Caret, "^", start}; return;
        case '(': tok_ = {Tok::LParen, "(", start}; return;
        case ')': tok_ = {Tok::RParen, ")", start}; return;
        default: throw ParseError(std::string("unexpected character '") + c + "'", start);
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    Token tok_{Tok::End, "", 0};
};

class Parser {
public:
    Parser(RingPtr ring, std::string_view src) : ring_(std::move(ring)), lex_(src) {}

    Polynomial run() {
        Polynomial p = expr();
        if (lex_.peek().kind != Tok::End)
            throw ParseError("unexpected trailing input", lex_.peek().offset);
        return p;
    }

private:
    Polynomial expr() {
        bool negate = false;
        while (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus) {
            if (lex_.take().kind == Tok::Minus) negate = !negate;
        }
        Polynomial acc = term();
        if (negate) acc = -acc;
        while (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus) {
            bool minus = lex_.take().kind == Tok::Minus;
            Polynomial rhs = term();
            acc = minus ? acc - rhs : acc + rhs;
        }
        return acc;
    }

    Polynomial term() {
        Polynomial acc = factor();
        while (lex_.peek().kind == Tok::Star || lex_.peek().kind == Tok::Slash) {
            Token op = lex_.take();
            Polynomial rhs = factor();
            if (op.kind == Tok::Star) {
                acc = acc * rhs;
            } else {
                if (!rhs.is_constant() || rhs.is_zero())
                    throw ParseError("division is only defined by nonzero constants", op.offset);
                acc = acc.scaled(Rat(1) / rhs.constant_value());
            }
        }
        return acc;
    }

    Polynomial factor() {
        Polynomial base = atom();
        if (lex_.peek().kind == Tok::Caret) {
            Token op = lex_.take();
            if (lex_.peek().kind != Tok::Number)
                throw ParseError("exponent must be a nonnegative integer", lex_.peek().offset);
            Token e = lex_.take();
            long exp = std::stol(e.text);
            if (exp > 512) throw ParseError("exponent too large", op.offset);
            base = base.pow(static_cast<int>(exp));
        }
        return base;
    }

    Polynomial atom() {
        Token t = lex_.peek();
        switch (t.kind) {
        case Tok::Number: {
            lex_.take();
            return Polynomial::constant(ring_, Rat(t.text));
        }
        case Tok::Ident: {
            lex_.take();
            auto idx = ring_->var_index(t.text);
            if (!idx) throw UnknownVariableError(t.text);
            return Polynomial::variable(ring_, *idx);
        }
        case Tok::LParen: {
            lex_.take();
            Polynomial inner = expr();
            if (lex_.peek().kind != Tok::RParen)
                throw ParseError("expected ')'", lex_.peek().offset);
            lex_.take();
            return inner;
        }
        case Tok::Minus: {
            lex_.take();
            return -factor();
        }
        default:
            throw ParseError("expected a constant, variable or '('", t.offset);
        }
    }

    RingPtr ring_;
    Lexer lex_;
};

} // namespace

Polynomial parse_polynomial(const RingPtr& ring, std::string_view text) {
    return Parser(ring, text).run();
}

} // namespace mlcrit
