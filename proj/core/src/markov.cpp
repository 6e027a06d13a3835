#include "pmcast/markov.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <json.hpp>

#include "pmcast/error.hpp"
#include "text_util.hpp"

namespace pmcast {

ContextCodec::ContextCodec(std::size_t alphabet_size, std::size_t order)
    : radix_(alphabet_size), order_(order), count_(1) {
    if (alphabet_size == 0) throw DomainError("alphabet must contain at least one event type");
    for (std::size_t i = 0; i < order; ++i) {
        if (count_ > kMaxContexts / radix_)
            throw DomainError("order " + std::to_string(order) + " over " +
                              std::to_string(alphabet_size) +
                              " event types needs more than 1000000 contexts; use a smaller order");
        count_ *= radix_;
    }
}

ContextId ContextCodec::encode(std::span<const Symbol> symbols) const {
    if (symbols.size() != order_)
        throw DomainError("context needs exactly " + std::to_string(order_) + " symbols");
    ContextId c = 0;
    for (auto s : symbols) {
        if (s >= radix_) throw DomainError("context symbol outside alphabet");
        c = c * radix_ + s;
    }
    return c;
}

std::vector<Symbol> ContextCodec::decode(ContextId c) const {
    std::vector<Symbol> out(order_);
    for (std::size_t i = order_; i-- > 0;) {
        out[i] = static_cast<Symbol>(c % radix_);
        c /= radix_;
    }
    return out;
}

std::string ContextCodec::to_string(ContextId c, const Alphabet& alphabet) const {
    std::string out;
    const auto symbols = decode(c);
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (i) out += ',';
        out += alphabet.name(symbols[i]);
    }
    return out;
}

ContextId ContextCodec::parse(std::string_view text, const Alphabet& alphabet) const {
    std::vector<Symbol> symbols;
    if (order_ > 0)
        for (auto part : detail::split(text, ',')) symbols.push_back(alphabet.at(detail::trim(part)));
    else if (!detail::trim(text).empty())
        throw DomainError("order-0 model expects the empty context, got '" + std::string(text) + "'");
    return encode(symbols);
}

SymbolModel::SymbolModel(Alphabet alphabet, std::size_t order, double smoothing,
                         std::vector<double> table, std::vector<ContextId> undefined)
    : alphabet_(std::move(alphabet)), codec_(alphabet_.size(), order), smoothing_(smoothing),
      table_(std::move(table)) {
    if (!(smoothing_ >= 0.0) || !std::isfinite(smoothing_))
        throw DomainError("smoothing must be a finite value >= 0");
    const std::size_t k = alphabet_.size();
    if (table_.size() != codec_.count() * k)
        throw DomainError("model table has " + std::to_string(table_.size()) + " entries, expected " +
                          std::to_string(codec_.count() * k));
    defined_.assign(codec_.count(), 1);
    for (auto c : undefined) {
        if (c >= codec_.count()) throw DomainError("undefined context id out of range");
        defined_[c] = 0;
        std::fill_n(table_.begin() + static_cast<std::ptrdiff_t>(c * k), k, 0.0);
    }
    for (ContextId c = 0; c < codec_.count(); ++c) {
        if (!defined_[c]) continue;
        double sum = 0.0;
        for (std::size_t s = 0; s < k; ++s) {
            const double p = table_[c * k + s];
            if (!(p >= 0.0) || p > 1.0)
                throw DomainError("probability out of [0,1] in context '" +
                                  codec_.to_string(c, alphabet_) + "'");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw DomainError("distribution for context '" + codec_.to_string(c, alphabet_) +
                              "' sums to " + detail::format_double(sum));
    }
}

std::span<const double> SymbolModel::distribution(ContextId c) const {
    if (!defined(c))
        throw DomainError("context '" + codec_.to_string(c, alphabet_) +
                          "' was never observed in training and smoothing is 0");
    return {table_.data() + c * alphabet_.size(), alphabet_.size()};
}

SymbolModel train(const EventStream& stream, std::size_t order, double smoothing) {
    const auto& alphabet = stream.alphabet();
    const std::size_t k = alphabet.size();
    const ContextCodec codec(k, order);
    if (!(smoothing >= 0.0) || !std::isfinite(smoothing))
        throw DomainError("smoothing must be a finite value >= 0");

    std::vector<std::uint64_t> counts(codec.count() * k, 0);
    ContextId ctx = 0;
    std::size_t filled = 0;
    for (const auto& e : stream.events()) {
        if (filled >= order) ++counts[ctx * k + e.type];
        else ++filled;
        ctx = codec.shift(ctx, e.type);
    }

    std::vector<double> table(counts.size(), 0.0);
    std::vector<ContextId> undefined;
    for (ContextId c = 0; c < codec.count(); ++c) {
        std::uint64_t total = 0;
        for (std::size_t s = 0; s < k; ++s) total += counts[c * k + s];
        const double denom = static_cast<double>(total) + smoothing * static_cast<double>(k);
        if (denom == 0.0) {
            undefined.push_back(c);
            continue;
        }
        for (std::size_t s = 0; s < k; ++s)
            table[c * k + s] = (static_cast<double>(counts[c * k + s]) + smoothing) / denom;
    }
    return SymbolModel(alphabet, order, smoothing, std::move(table), std::move(undefined));
}

std::string model_to_json(const SymbolModel& model) {
    nlohmann::ordered_json j;
    j["alphabet"] = model.alphabet().names();
    j["order"] = model.order();
    j["smoothing"] = model.smoothing();
    nlohmann::ordered_json table = nlohmann::ordered_json::object();
    const auto& codec = model.contexts();
    for (ContextId c = 0; c < codec.count(); ++c) {
        const auto key = codec.to_string(c, model.alphabet());
        if (model.defined(c)) {
            const auto d = model.distribution(c);
            table[key] = std::vector<double>(d.begin(), d.end());
        } else {
            table[key] = nullptr;
        }
    }
    j["table"] = std::move(table);
    return j.dump() + "\n";
}

SymbolModel model_from_json(std::string_view text) {
    try {
        const auto j = nlohmann::json::parse(text);
        Alphabet alphabet(j.at("alphabet").get<std::vector<std::string>>());
        const auto order = j.at("order").get<std::size_t>();
        const auto smoothing = j.at("smoothing").get<double>();
        const ContextCodec codec(alphabet.size(), order);
        const std::size_t k = alphabet.size();
        std::vector<double> table(codec.count() * k, 0.0);
        std::vector<char> seen(codec.count(), 0);
        std::vector<ContextId> undefined;
        for (const auto& [key, row] : j.at("table").items()) {
            const auto c = codec.parse(key, alphabet);
            if (seen[c]) throw DomainError("duplicate context '" + key + "' in model table");
            seen[c] = 1;
            if (row.is_null()) {
                undefined.push_back(c);
                continue;
            }
            const auto probs = row.get<std::vector<double>>();
            if (probs.size() != k) throw DomainError("row '" + key + "' has the wrong width");
            std::copy(probs.begin(), probs.end(), table.begin() + static_cast<std::ptrdiff_t>(c * k));
        }
        for (ContextId c = 0; c < codec.count(); ++c)
            if (!seen[c])
                throw DomainError("model table is missing context '" + codec.to_string(c, alphabet) + "'");
        return SymbolModel(std::move(alphabet), order, smoothing, std::move(table), std::move(undefined));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed model JSON: ") + e.what());
    }
}

void write_model(const SymbolModel& model, const std::filesystem::path& path) {
    detail::write_file(path, model_to_json(model));
}

SymbolModel read_model(const std::filesystem::path& path) {
    return model_from_json(detail::read_file(path));
}

std::optional<PmcState> Pmc::find(DfaState q, ContextId c) const {
    if (c >= context_count_) return std::nullopt;
    const auto it = index_.find(static_cast<std::uint64_t>(q) * context_count_ + c);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::span<const Transition> Pmc::row(PmcState s) const {
    const auto b = row_begin_.at(s), e = row_begin_.at(s + 1);
    return {transitions_.data() + b, e - b};
}

double Pmc::absorption_mass(PmcState s) const {
    double f = 0.0;
    for (const auto& t : row(s))
        if (absorbing_[t.target]) f += t.probability;
    return f;
}

std::string Pmc::label(PmcState s) const {
    const auto& st = state(s);
    auto out = std::to_string(st.dfa_state);
    if (order_ > 0)
        out += "|" + ContextCodec(alphabet_.size(), order_).to_string(st.context, alphabet_);
    return out;
}

Pmc build_pmc(const Dfa& dfa, const SymbolModel& model) {
    if (!(dfa.alphabet() == model.alphabet()))
        throw DomainError("alphabet mismatch between DFA [" + dfa.alphabet().join() + "] and model [" +
                          model.alphabet().join() + "]");
    const auto& codec = model.contexts();
    const std::size_t k = dfa.alphabet().size();

    Pmc pmc;
    pmc.alphabet_ = dfa.alphabet();
    pmc.order_ = model.order();
    pmc.dfa_size_ = dfa.num_states();
    pmc.context_count_ = codec.count();

    auto intern = [&](DfaState q, ContextId c) {
        const auto key = static_cast<std::uint64_t>(q) * codec.count() + c;
        auto [it, fresh] = pmc.index_.emplace(key, static_cast<PmcState>(pmc.states_.size()));
        if (fresh) {
            if (!model.defined(c))
                throw DomainError("context '" + codec.to_string(c, model.alphabet()) +
                                  "' was never observed in training and smoothing is 0");
            pmc.states_.push_back(ProductState{q, c});
        }
        return it->second;
    };

    if (model.order() == 0) {
        for (DfaState q = 0; q < dfa.num_states(); ++q) intern(q, 0);
    } else {
        for (ContextId c = 0; c < codec.count(); ++c) intern(dfa.start(), c);
    }

    // states_ grows while we walk it: breadth-first discovery.
    for (std::size_t i = 0; i < pmc.states_.size(); ++i) {
        const auto [q, c] = pmc.states_[i];
        const auto probs = model.distribution(c);
        for (Symbol a = 0; a < k; ++a) {
            const auto target = intern(dfa.step(q, a), codec.shift(c, a));
            pmc.successors_.push_back(target);
            pmc.symbol_probs_.push_back(probs[a]);
        }
    }

    const std::size_t n = pmc.states_.size();
    pmc.absorbing_.resize(n);
    for (std::size_t i = 0; i < n; ++i) pmc.absorbing_[i] = dfa.is_final(pmc.states_[i].dfa_state);

    pmc.row_begin_.reserve(n + 1);
    pmc.row_begin_.push_back(0);
    std::map<PmcState, double> merged;
    for (std::size_t i = 0; i < n; ++i) {
        merged.clear();
        for (std::size_t a = 0; a < k; ++a) {
            const double p = pmc.symbol_probs_[i * k + a];
            if (p > 0.0) merged[pmc.successors_[i * k + a]] += p;
        }
        for (auto [t, p] : merged) pmc.transitions_.push_back(Transition{t, p});
        pmc.row_begin_.push_back(pmc.transitions_.size());
    }
    return pmc;
}

} // namespace pmcast
