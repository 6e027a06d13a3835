#include "pmcast/simulator.hpp"

#include <random>

#include "pmcast/error.hpp"

namespace pmcast {

namespace {

double unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Symbol sample(std::span<const double> dist, double u) {
    double cum = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t s = 0; s < dist.size(); ++s) {
        if (dist[s] <= 0.0) continue;
        cum += dist[s];
        last_positive = s;
        if (u < cum) return static_cast<Symbol>(s);
    }
    return static_cast<Symbol>(last_positive);
}

} // namespace

EventStream generate(const GeneratorSpec& spec) {
    if (spec.length == 0) throw DomainError("stream length must be >= 1");
    const auto& model = spec.model;
    const auto& codec = model.contexts();
    const std::size_t k = model.alphabet().size();
    std::mt19937_64 rng(spec.seed);

    ContextId ctx = 0;
    if (spec.initial_context) {
        ctx = codec.encode(*spec.initial_context);
    } else {
        for (std::size_t i = 0; i < model.order(); ++i) {
            auto s = static_cast<Symbol>(unit(rng) * static_cast<double>(k));
            ctx = codec.shift(ctx, s < k ? s : static_cast<Symbol>(k - 1));
        }
    }

    EventStream stream(model.alphabet());
    for (std::size_t i = 0; i < spec.length; ++i) {
        const Symbol s = sample(model.distribution(ctx), unit(rng));
        stream.push(s, i);
        ctx = codec.shift(ctx, s);
    }
    return stream;
}

} // namespace pmcast
