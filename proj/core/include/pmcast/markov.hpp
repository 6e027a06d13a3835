#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "pmcast/automaton.hpp"
#include "pmcast/event_model.hpp"

namespace pmcast {

/// Index of a length-m context in [0, |Sigma|^m). The oldest symbol is the
/// most significant digit in base |Sigma|.
using ContextId = std::uint64_t;

/// Upper bound on |Sigma|^m for the dense context table.
inline constexpr std::uint64_t kMaxContexts = 1'000'000;

class ContextCodec {
public:
    /// Throws DomainError when |Sigma|^order exceeds kMaxContexts.
    ContextCodec(std::size_t alphabet_size, std::size_t order);

    std::size_t order() const noexcept { return order_; }
    std::uint64_t count() const noexcept { return count_; }

    /// Drop the oldest symbol, append `s`.
    ContextId shift(ContextId c, Symbol s) const noexcept {
        return count_ == 1 ? 0 : (c * radix_ + s) % count_;
    }
    ContextId encode(std::span<const Symbol> symbols) const;
    std::vector<Symbol> decode(ContextId c) const;
    std::string to_string(ContextId c, const Alphabet& alphabet) const;
    ContextId parse(std::string_view text, const Alphabet& alphabet) const;

    friend bool operator==(const ContextCodec&, const ContextCodec&) = default;

private:
    std::uint64_t radix_;
    std::size_t order_;
    std::uint64_t count_;
};

/// Order-m conditional symbol distribution, dense over all |Sigma|^m
/// contexts. A context row may be undefined only when smoothing is 0 and the
/// context never occurred in training.
class SymbolModel {
public:
    /// `table` is row-major, one row of |Sigma| probabilities per context;
    /// rows listed in `undefined` are ignored. Every defined row must be
    /// nonnegative and sum to 1 within 1e-12.
    SymbolModel(Alphabet alphabet, std::size_t order, double smoothing,
                std::vector<double> table, std::vector<ContextId> undefined = {});

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    std::size_t order() const noexcept { return codec_.order(); }
    double smoothing() const noexcept { return smoothing_; }
    const ContextCodec& contexts() const noexcept { return codec_; }

    bool defined(ContextId c) const { return defined_.at(c) != 0; }
    /// P(. | c); throws DomainError for an undefined context.
    std::span<const double> distribution(ContextId c) const;
    double probability(ContextId c, Symbol s) const { return distribution(c)[s]; }

    friend bool operator==(const SymbolModel&, const SymbolModel&) = default;

private:
    Alphabet alphabet_;
    ContextCodec codec_;
    double smoothing_;
    std::vector<double> table_;
    std::vector<char> defined_;
};

/// Additive-smoothing maximum likelihood:
///   P(s | c) = (count(c s) + alpha) / (count(c .) + alpha |Sigma|).
/// The first `order` events only fill the context.
SymbolModel train(const EventStream& stream, std::size_t order, double smoothing);

std::string model_to_json(const SymbolModel& model);
SymbolModel model_from_json(std::string_view text);
void write_model(const SymbolModel& model, const std::filesystem::path& path);
SymbolModel read_model(const std::filesystem::path& path);

struct ProductState {
    DfaState dfa_state;
    ContextId context;
    friend bool operator==(const ProductState&, const ProductState&) = default;
};

using PmcState = std::uint32_t;

struct Transition {
    PmcState target;
    double probability;
};

/// Pattern Markov chain over (DFA state, context) pairs. Holds both the
/// per-symbol successor table (for tracking a live stream) and aggregated
/// sparse probability rows (for first-passage analysis).
class Pmc {
public:
    const Alphabet& alphabet() const noexcept { return alphabet_; }
    std::size_t order() const noexcept { return order_; }
    std::size_t size() const noexcept { return states_.size(); }
    std::size_t dfa_size() const noexcept { return dfa_size_; }

    const ProductState& state(PmcState s) const { return states_.at(s); }
    bool is_absorbing(PmcState s) const { return absorbing_.at(s) != 0; }
    std::optional<PmcState> find(DfaState q, ContextId c) const;

    PmcState successor(PmcState s, Symbol sym) const {
        return successors_[static_cast<std::size_t>(s) * alphabet_.size() + sym];
    }
    double probability(PmcState s, Symbol sym) const {
        return symbol_probs_[static_cast<std::size_t>(s) * alphabet_.size() + sym];
    }
    /// Outgoing transitions merged by target, ascending target id.
    std::span<const Transition> row(PmcState s) const;
    /// One-step probability of entering an absorbing state.
    double absorption_mass(PmcState s) const;

    /// Human readable label: "q" for order 0, "q|c1,c2" otherwise.
    std::string label(PmcState s) const;

private:
    friend Pmc build_pmc(const Dfa& dfa, const SymbolModel& model);
    Pmc() = default;

    Alphabet alphabet_;
    std::size_t order_ = 0;
    std::size_t dfa_size_ = 0;
    std::uint64_t context_count_ = 1;
    std::vector<ProductState> states_;
    std::vector<char> absorbing_;
    std::vector<PmcState> successors_;
    std::vector<double> symbol_probs_;
    std::vector<std::size_t> row_begin_;
    std::vector<Transition> transitions_;
    std::unordered_map<std::uint64_t, PmcState> index_;
};

/// Order 0: the states are exactly the DFA states with identical ids.
/// Order m >= 1: states are the (q, c) pairs reachable from the seeds
/// (start, c) for every context c, numbered breadth-first (seeds in context
/// order, symbols in alphabet order). Absorbing states are those whose DFA
/// state is final.
///
/// Throws DomainError on alphabet mismatch or when a reachable state has a
/// context the model leaves undefined.
Pmc build_pmc(const Dfa& dfa, const SymbolModel& model);

} // namespace pmcast
