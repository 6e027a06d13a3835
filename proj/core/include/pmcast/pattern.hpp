#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "pmcast/event_model.hpp"

namespace pmcast {

/// Immutable regular-expression AST over an alphabet's symbols.
/// Children are shared, so copies are cheap.
class Pattern {
public:
    enum class Kind { Symbol, Seq, Or, Iter };

    static Pattern symbol(Symbol s);
    static Pattern seq(Pattern left, Pattern right);
    static Pattern alt(Pattern left, Pattern right);
    static Pattern iter(Pattern body);

    Kind kind() const noexcept { return node_->kind; }
    /// Valid only for Kind::Symbol.
    Symbol sym() const noexcept { return node_->sym; }
    /// Left operand of Seq/Or, body of Iter.
    const Pattern& left() const { return *node_->left; }
    /// Right operand of Seq/Or.
    const Pattern& right() const { return *node_->right; }

    std::size_t depth() const noexcept;
    std::size_t size() const noexcept;

    friend bool operator==(const Pattern& a, const Pattern& b);

private:
    struct Node {
        Kind kind;
        Symbol sym = 0;
        std::shared_ptr<const Pattern> left;
        std::shared_ptr<const Pattern> right;
    };
    explicit Pattern(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    std::shared_ptr<const Node> node_;
};

/// Grammar:
///   expr   := term ('|' term)*
///   term   := factor (';' factor)*
///   factor := base '*'*
///   base   := IDENT | '(' expr ')'
/// Whitespace is ignored. Seq and Or are left-associative.
/// Throws ParseError (with a 0-based character position in the message) on
/// bad syntax, DomainError for identifiers outside the alphabet.
Pattern parse_pattern(std::string_view text, const Alphabet& alphabet);

/// Canonical text with the minimum parentheses needed to reparse to the
/// same tree.
std::string print_pattern(const Pattern& expr, const Alphabet& alphabet);

/// True iff the empty word is in the language of `expr`.
bool matches_epsilon(const Pattern& expr) noexcept;

} // namespace pmcast
