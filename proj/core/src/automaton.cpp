#include "pmcast/automaton.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include <json.hpp>

#include "pmcast/error.hpp"
#include "text_util.hpp"

namespace pmcast {

Dfa::Dfa(Alphabet alphabet, DfaState start, std::vector<DfaState> finals,
         std::vector<DfaState> delta)
    : alphabet_(std::move(alphabet)), start_(start), finals_(std::move(finals)),
      delta_(std::move(delta)) {
    const std::size_t k = alphabet_.size();
    if (k == 0) throw DomainError("DFA alphabet is empty");
    if (delta_.empty() || delta_.size() % k != 0)
        throw DomainError("DFA transition table size is not a multiple of the alphabet size");
    const std::size_t n = delta_.size() / k;
    if (start_ >= n) throw DomainError("DFA start state out of range");
    for (auto t : delta_)
        if (t >= n) throw DomainError("DFA transition target out of range");
    std::sort(finals_.begin(), finals_.end());
    finals_.erase(std::unique(finals_.begin(), finals_.end()), finals_.end());
    if (finals_.empty()) throw DomainError("DFA has no final state");
    is_final_.assign(n, 0);
    for (auto f : finals_) {
        if (f >= n) throw DomainError("DFA final state out of range");
        is_final_[f] = 1;
    }
    std::vector<char> seen(n, 0);
    std::vector<DfaState> todo{start_};
    seen[start_] = 1;
    while (!todo.empty()) {
        const auto q = todo.back();
        todo.pop_back();
        for (auto t : row(q))
            if (!seen[t]) {
                seen[t] = 1;
                todo.push_back(t);
            }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
        throw DomainError("DFA has states unreachable from start");
}

bool Dfa::accepts(std::span<const Symbol> word) const {
    DfaState q = start_;
    for (auto s : word) q = step(q, s);
    return is_final(q);
}

namespace {

// Thompson NFA; state 0 is created first by the caller.
struct Nfa {
    std::vector<std::vector<std::pair<Symbol, int>>> moves;
    std::vector<std::vector<int>> eps;

    int add() {
        moves.emplace_back();
        eps.emplace_back();
        return static_cast<int>(moves.size()) - 1;
    }
};

struct Fragment {
    int in;
    int out;
};

Fragment thompson(const Pattern& e, Nfa& nfa) {
    switch (e.kind()) {
    case Pattern::Kind::Symbol: {
        const int a = nfa.add(), b = nfa.add();
        nfa.moves[a].emplace_back(e.sym(), b);
        return {a, b};
    }
    case Pattern::Kind::Seq: {
        const auto l = thompson(e.left(), nfa);
        const auto r = thompson(e.right(), nfa);
        nfa.eps[l.out].push_back(r.in);
        return {l.in, r.out};
    }
    case Pattern::Kind::Or: {
        const int a = nfa.add();
        const auto l = thompson(e.left(), nfa);
        const auto r = thompson(e.right(), nfa);
        const int b = nfa.add();
        nfa.eps[a].push_back(l.in);
        nfa.eps[a].push_back(r.in);
        nfa.eps[l.out].push_back(b);
        nfa.eps[r.out].push_back(b);
        return {a, b};
    }
    case Pattern::Kind::Iter: {
        const int a = nfa.add();
        const auto body = thompson(e.left(), nfa);
        const int b = nfa.add();
        nfa.eps[a].push_back(body.in);
        nfa.eps[a].push_back(b);
        nfa.eps[body.out].push_back(body.in);
        nfa.eps[body.out].push_back(b);
        return {a, b};
    }
    }
    throw Error("unreachable pattern kind");
}

std::vector<int> closure(const Nfa& nfa, std::vector<int> set) {
    std::vector<char> in(nfa.eps.size(), 0);
    for (int s : set) in[s] = 1;
    std::vector<int> todo = set;
    while (!todo.empty()) {
        const int s = todo.back();
        todo.pop_back();
        for (int t : nfa.eps[s])
            if (!in[t]) {
                in[t] = 1;
                set.push_back(t);
                todo.push_back(t);
            }
    }
    std::sort(set.begin(), set.end());
    return set;
}

struct RawDfa {
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t start = 0;
    std::vector<std::size_t> delta;
    std::vector<char> final;
};

RawDfa determinize(const Nfa& nfa, int start, int accept, std::size_t k) {
    RawDfa d;
    d.k = k;
    std::map<std::vector<int>, std::size_t> ids;
    std::vector<std::vector<int>> sets;
    auto intern = [&](std::vector<int> s) {
        auto [it, fresh] = ids.emplace(std::move(s), sets.size());
        if (fresh) sets.push_back(it->first);
        return it->second;
    };
    d.start = intern(closure(nfa, {start}));
    for (std::size_t i = 0; i < sets.size(); ++i) {
        for (Symbol a = 0; a < k; ++a) {
            std::vector<int> next;
            for (int s : sets[i])
                for (auto [sym, t] : nfa.moves[s])
                    if (sym == a) next.push_back(t);
            // The empty set becomes an ordinary (sink) state here.
            const auto target = intern(closure(nfa, std::move(next)));
            d.delta.push_back(target);
        }
    }
    d.n = sets.size();
    d.final.resize(d.n);
    for (std::size_t i = 0; i < d.n; ++i)
        d.final[i] = std::binary_search(sets[i].begin(), sets[i].end(), accept);
    return d;
}

// Hopcroft partition refinement; returns the block index of every state.
std::vector<std::size_t> hopcroft(const RawDfa& d) {
    const std::size_t n = d.n, k = d.k;
    std::vector<std::vector<std::vector<std::size_t>>> inverse(
        k, std::vector<std::vector<std::size_t>>(n));
    for (std::size_t q = 0; q < n; ++q)
        for (std::size_t a = 0; a < k; ++a) inverse[a][d.delta[q * k + a]].push_back(q);

    std::vector<std::vector<std::size_t>> blocks;
    std::vector<std::size_t> block_of(n);
    {
        std::vector<std::size_t> fin, rest;
        for (std::size_t q = 0; q < n; ++q) (d.final[q] ? fin : rest).push_back(q);
        for (auto* part : {&fin, &rest})
            if (!part->empty()) {
                for (auto q : *part) block_of[q] = blocks.size();
                blocks.push_back(std::move(*part));
            }
    }

    std::vector<char> in_work(blocks.size(), 0);
    std::deque<std::size_t> work;
    if (blocks.size() == 2) {
        const std::size_t smaller = blocks[0].size() <= blocks[1].size() ? 0 : 1;
        work.push_back(smaller);
        in_work[smaller] = 1;
    }

    std::vector<char> marked(n, 0);
    while (!work.empty()) {
        const auto splitter_id = work.front();
        work.pop_front();
        in_work[splitter_id] = 0;
        const std::vector<std::size_t> splitter = blocks[splitter_id];
        for (std::size_t a = 0; a < k; ++a) {
            std::vector<std::size_t> pre;
            for (auto q : splitter)
                for (auto p : inverse[a][q])
                    if (!marked[p]) {
                        marked[p] = 1;
                        pre.push_back(p);
                    }
            if (pre.empty()) continue;
            std::map<std::size_t, std::vector<std::size_t>> hit;
            for (auto p : pre) hit[block_of[p]].push_back(p);
            for (auto& [y, inside] : hit) {
                if (inside.size() == blocks[y].size()) continue;
                std::vector<std::size_t> outside;
                for (auto q : blocks[y])
                    if (!marked[q]) outside.push_back(q);
                const std::size_t z = blocks.size();
                blocks[y] = std::move(inside);
                for (auto q : outside) block_of[q] = z;
                blocks.push_back(std::move(outside));
                in_work.push_back(0);
                if (in_work[y]) {
                    work.push_back(z);
                    in_work[z] = 1;
                } else {
                    const std::size_t smaller = blocks[y].size() <= blocks[z].size() ? y : z;
                    work.push_back(smaller);
                    in_work[smaller] = 1;
                }
            }
            for (auto p : pre) marked[p] = 0;
        }
    }
    return block_of;
}

} // namespace

Dfa compile(const Pattern& expr, const Alphabet& alphabet) {
    if (alphabet.empty()) throw DomainError("alphabet must contain at least one event type");
    if (matches_epsilon(expr)) throw DomainError("pattern matches the empty sequence");

    const std::size_t k = alphabet.size();
    Nfa nfa;
    const int prefix = nfa.add();
    for (Symbol a = 0; a < k; ++a) nfa.moves[prefix].emplace_back(a, prefix);
    const auto body = thompson(expr, nfa);
    nfa.eps[prefix].push_back(body.in);

    const RawDfa raw = determinize(nfa, prefix, body.out, k);
    const auto block_of = hopcroft(raw);

    // Breadth-first renumbering of the quotient automaton.
    const std::size_t nblocks = *std::max_element(block_of.begin(), block_of.end()) + 1;
    std::vector<std::size_t> representative(nblocks, raw.n);
    for (std::size_t q = 0; q < raw.n; ++q)
        if (representative[block_of[q]] == raw.n) representative[block_of[q]] = q;

    constexpr auto unset = static_cast<DfaState>(-1);
    std::vector<DfaState> number(nblocks, unset);
    std::vector<std::size_t> order;
    number[block_of[raw.start]] = 0;
    order.push_back(block_of[raw.start]);
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto rep = representative[order[i]];
        for (std::size_t a = 0; a < k; ++a) {
            const auto b = block_of[raw.delta[rep * k + a]];
            if (number[b] == unset) {
                number[b] = static_cast<DfaState>(order.size());
                order.push_back(b);
            }
        }
    }

    std::vector<DfaState> delta(order.size() * k);
    std::vector<DfaState> finals;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto rep = representative[order[i]];
        for (std::size_t a = 0; a < k; ++a) delta[i * k + a] = number[block_of[raw.delta[rep * k + a]]];
        if (raw.final[rep]) finals.push_back(static_cast<DfaState>(i));
    }
    if (finals.empty()) throw DomainError("pattern has an empty language");
    return Dfa(alphabet, 0, std::move(finals), std::move(delta));
}

std::string dfa_to_json(const Dfa& dfa) {
    nlohmann::ordered_json j;
    j["alphabet"] = dfa.alphabet().names();
    j["start"] = dfa.start();
    j["finals"] = dfa.finals();
    auto rows = nlohmann::ordered_json::array();
    for (DfaState q = 0; q < dfa.num_states(); ++q) {
        const auto r = dfa.row(q);
        rows.push_back(std::vector<DfaState>(r.begin(), r.end()));
    }
    j["delta"] = std::move(rows);
    return j.dump() + "\n";
}

Dfa dfa_from_json(std::string_view text) {
    try {
        const auto j = nlohmann::json::parse(text);
        Alphabet alphabet(j.at("alphabet").get<std::vector<std::string>>());
        const auto start = j.at("start").get<DfaState>();
        auto finals = j.at("finals").get<std::vector<DfaState>>();
        std::vector<DfaState> delta;
        for (const auto& row : j.at("delta")) {
            auto r = row.get<std::vector<DfaState>>();
            if (r.size() != alphabet.size())
                throw DomainError("DFA row width does not match the alphabet");
            delta.insert(delta.end(), r.begin(), r.end());
        }
        return Dfa(std::move(alphabet), start, std::move(finals), std::move(delta));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed DFA JSON: ") + e.what());
    }
}

void write_dfa(const Dfa& dfa, const std::filesystem::path& path) {
    detail::write_file(path, dfa_to_json(dfa));
}

Dfa read_dfa(const std::filesystem::path& path) { return dfa_from_json(detail::read_file(path)); }

} // namespace pmcast
