#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pmcast/event_model.hpp"
#include "pmcast/pattern.hpp"

namespace pmcast {

using DfaState = std::uint32_t;

/// Complete deterministic automaton with a dense transition table.
/// Every instance satisfies: total delta, all states reachable from start,
/// at least one final state.
class Dfa {
public:
    /// Validates and takes ownership of the table. `delta` is row-major:
    /// delta[state * |alphabet| + symbol].
    Dfa(Alphabet alphabet, DfaState start, std::vector<DfaState> finals,
        std::vector<DfaState> delta);

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    std::size_t num_states() const noexcept { return is_final_.size(); }
    DfaState start() const noexcept { return start_; }
    const std::vector<DfaState>& finals() const noexcept { return finals_; }
    bool is_final(DfaState q) const { return is_final_.at(q) != 0; }

    DfaState step(DfaState q, Symbol s) const {
        return delta_[static_cast<std::size_t>(q) * alphabet_.size() + s];
    }
    bool accepts(std::span<const Symbol> word) const;

    std::span<const DfaState> row(DfaState q) const {
        return {delta_.data() + static_cast<std::size_t>(q) * alphabet_.size(),
                alphabet_.size()};
    }
    const std::vector<DfaState>& table() const noexcept { return delta_; }

    friend bool operator==(const Dfa&, const Dfa&) = default;

private:
    Alphabet alphabet_;
    DfaState start_;
    std::vector<DfaState> finals_;
    std::vector<char> is_final_;
    std::vector<DfaState> delta_;
};

/// Compiles `expr` into the minimal complete DFA for  Sigma* . L(expr):
/// the automaton is in a final state exactly when a match of `expr` ends at
/// the last symbol read. States are numbered breadth-first from the start
/// state, visiting symbols in alphabet order.
///
/// Throws DomainError("pattern matches the empty sequence") for
/// epsilon-accepting patterns and DomainError("pattern has an empty
/// language") when no final state survives.
Dfa compile(const Pattern& expr, const Alphabet& alphabet);

std::string dfa_to_json(const Dfa& dfa);
Dfa dfa_from_json(std::string_view text);
void write_dfa(const Dfa& dfa, const std::filesystem::path& path);
Dfa read_dfa(const std::filesystem::path& path);

} // namespace pmcast
