#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "pmcast/event_model.hpp"
#include "pmcast/markov.hpp"

namespace pmcast {

struct GeneratorSpec {
    SymbolModel model;
    std::size_t length = 1;
    std::uint64_t seed = 0;
    /// Oldest first, exactly `model.order()` symbols. When empty, each
    /// position is drawn uniformly from the alphabet.
    std::optional<std::vector<Symbol>> initial_context;
};

/// Draws from std::mt19937_64 seeded with `seed`. Each draw x becomes
/// u = (x >> 11) * 2^-53 in [0, 1); a symbol is chosen by inverse CDF in
/// alphabet order, a uniform initial-context position by floor(u * |Sigma|).
/// Timestamps are 0, 1, 2, ...
EventStream generate(const GeneratorSpec& spec);

} // namespace pmcast
