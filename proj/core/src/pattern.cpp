#include "pmcast/pattern.hpp"

#include <algorithm>
#include <cctype>

#include "pmcast/error.hpp"

namespace pmcast {

Pattern Pattern::symbol(Symbol s) {
    return Pattern(std::make_shared<const Node>(Node{Kind::Symbol, s, nullptr, nullptr}));
}

Pattern Pattern::seq(Pattern left, Pattern right) {
    return Pattern(std::make_shared<const Node>(
        Node{Kind::Seq, 0, std::make_shared<const Pattern>(std::move(left)),
             std::make_shared<const Pattern>(std::move(right))}));
}

Pattern Pattern::alt(Pattern left, Pattern right) {
    return Pattern(std::make_shared<const Node>(
        Node{Kind::Or, 0, std::make_shared<const Pattern>(std::move(left)),
             std::make_shared<const Pattern>(std::move(right))}));
}

Pattern Pattern::iter(Pattern body) {
    return Pattern(std::make_shared<const Node>(
        Node{Kind::Iter, 0, std::make_shared<const Pattern>(std::move(body)), nullptr}));
}

std::size_t Pattern::depth() const noexcept {
    switch (kind()) {
    case Kind::Symbol: return 1;
    case Kind::Iter: return 1 + left().depth();
    default: return 1 + std::max(left().depth(), right().depth());
    }
}

std::size_t Pattern::size() const noexcept {
    switch (kind()) {
    case Kind::Symbol: return 1;
    case Kind::Iter: return 1 + left().size();
    default: return 1 + left().size() + right().size();
    }
}

bool operator==(const Pattern& a, const Pattern& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
    case Pattern::Kind::Symbol: return a.sym() == b.sym();
    case Pattern::Kind::Iter: return a.left() == b.left();
    default: return a.left() == b.left() && a.right() == b.right();
    }
}

namespace {

class Parser {
public:
    Parser(std::string_view text, const Alphabet& alphabet) : text_(text), alphabet_(alphabet) {}

    Pattern parse() {
        skip_ws();
        if (pos_ == text_.size()) error("empty pattern");
        Pattern p = expr();
        skip_ws();
        if (pos_ != text_.size()) error(std::string("unexpected '") + text_[pos_] + "'");
        return p;
    }

private:
    Pattern expr() {
        Pattern p = term();
        while (accept('|')) p = Pattern::alt(std::move(p), term());
        return p;
    }

    Pattern term() {
        Pattern p = factor();
        while (accept(';')) p = Pattern::seq(std::move(p), factor());
        return p;
    }

    Pattern factor() {
        Pattern p = base();
        while (accept('*')) p = Pattern::iter(std::move(p));
        return p;
    }

    Pattern base() {
        skip_ws();
        if (accept('(')) {
            Pattern p = expr();
            if (!accept(')')) error("expected ')'");
            return p;
        }
        const std::size_t begin = pos_;
        while (pos_ < text_.size() && is_ident_char(text_[pos_], pos_ == begin)) ++pos_;
        if (pos_ == begin) {
            if (pos_ == text_.size()) error("expected identifier or '(' but reached end of pattern");
            error(std::string("expected identifier or '(' but found '") + text_[pos_] + "'");
        }
        const auto name = text_.substr(begin, pos_ - begin);
        const auto sym = alphabet_.find(name);
        if (!sym)
            throw DomainError("unknown symbol '" + std::string(name) + "' at position " +
                              std::to_string(begin));
        return Pattern::symbol(*sym);
    }

    static bool is_ident_char(char c, bool first) {
        const auto u = static_cast<unsigned char>(c);
        return std::isalpha(u) || c == '_' || (!first && std::isdigit(u));
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    [[noreturn]] void error(const std::string& msg) const {
        throw ParseError("syntax error at position " + std::to_string(pos_) + ": " + msg);
    }

    std::string_view text_;
    const Alphabet& alphabet_;
    std::size_t pos_ = 0;
};

void print_into(const Pattern& e, const Alphabet& alphabet, std::string& out) {
    using K = Pattern::Kind;
    auto wrapped = [&](const Pattern& child, bool parens) {
        if (parens) out += '(';
        print_into(child, alphabet, out);
        if (parens) out += ')';
    };
    switch (e.kind()) {
    case K::Symbol:
        out += alphabet.name(e.sym());
        break;
    case K::Iter:
        wrapped(e.left(), e.left().kind() == K::Seq || e.left().kind() == K::Or);
        out += '*';
        break;
    case K::Seq:
        wrapped(e.left(), e.left().kind() == K::Or);
        out += ';';
        wrapped(e.right(), e.right().kind() == K::Or || e.right().kind() == K::Seq);
        break;
    case K::Or:
        wrapped(e.left(), false);
        out += '|';
        wrapped(e.right(), e.right().kind() == K::Or);
        break;
    }
}

} // namespace

Pattern parse_pattern(std::string_view text, const Alphabet& alphabet) {
    return Parser(text, alphabet).parse();
}

std::string print_pattern(const Pattern& expr, const Alphabet& alphabet) {
    std::string out;
    print_into(expr, alphabet, out);
    return out;
}

bool matches_epsilon(const Pattern& expr) noexcept {
    switch (expr.kind()) {
    case Pattern::Kind::Symbol: return false;
    case Pattern::Kind::Seq: return matches_epsilon(expr.left()) && matches_epsilon(expr.right());
    case Pattern::Kind::Or: return matches_epsilon(expr.left()) || matches_epsilon(expr.right());
    case Pattern::Kind::Iter: return true;
    }
    return false;
}

} // namespace pmcast
