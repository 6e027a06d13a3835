#pragma once

// Brute-force references used by the unit and acceptance suites. None of
// these call into the automaton compiler or the PMC; they work directly from
// the pattern AST, the DFA table or the symbol model.

#include <cstddef>
#include <cstdint>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "pmcast/automaton.hpp"
#include "pmcast/markov.hpp"
#include "pmcast/pattern.hpp"

namespace pmcast::testing {

/// End positions of every match of `expr` that begins at `start`.
std::set<std::size_t> match_ends(const Pattern& expr, std::span<const Symbol> word, std::size_t start);

/// True iff some suffix of `word` is in L(expr).
bool suffix_matches(const Pattern& expr, std::span<const Symbol> word);

/// Every word over `k` symbols of length exactly `len`, lexicographic.
std::vector<std::vector<Symbol>> all_words(std::size_t k, std::size_t len);

struct CanonicalDfa {
    std::size_t num_states = 0;
    std::vector<DfaState> finals;
    std::vector<DfaState> delta;  // row-major
};

/// Myhill-Nerode quotient of  Sigma* . L(expr): two prefixes are equivalent
/// when they agree on every continuation of length <= `suffix_len`. States
/// are numbered breadth-first from the empty word, symbols in order.
CanonicalDfa myhill_nerode(const Pattern& expr, std::size_t k, std::size_t suffix_len);

/// W(1..kmax) by depth-first enumeration of every word, stopping a branch at
/// its first final state.
std::vector<double> enumerate_first_passage(const Dfa& dfa, const SymbolModel& model,
                                            DfaState q, ContextId context, std::size_t kmax);

/// W(1..h) by pushing the probability mass forward one event at a time.
std::vector<double> propagate_first_passage(const Dfa& dfa, const SymbolModel& model,
                                            DfaState q, ContextId context, std::size_t h);

struct Window {
    std::size_t start = 0;  // 1-based
    std::size_t end = 0;
    bool found = false;
};

/// Scans every window, shortest first then earliest.
Window brute_force_window(std::span<const double> w, double theta);

/// Random AST with depth <= max_depth over `k` symbols.
Pattern random_pattern(std::mt19937_64& rng, std::size_t k, std::size_t max_depth);

/// Model from explicit rows, one row of |Sigma| probabilities per context.
SymbolModel make_model(const Alphabet& alphabet, std::size_t order,
                       const std::vector<std::vector<double>>& rows);

struct CorpusEntry {
    std::string pattern;
    Alphabet alphabet;
};

/// Patterns over 2-3 symbols covering sequence, disjunction and iteration.
const std::vector<CorpusEntry>& corpus();

/// Fixed nonuniform models for an alphabet of size 2 or 3, orders 0 and 1.
std::vector<SymbolModel> corpus_models(const Alphabet& alphabet);

} // namespace pmcast::testing
