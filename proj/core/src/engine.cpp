#include "pmcast/engine.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "pmcast/error.hpp"

namespace pmcast {

std::string_view to_string(Outcome o) noexcept {
    switch (o) {
    case Outcome::Pending: return "pending";
    case Outcome::Hit: return "hit";
    case Outcome::Miss: return "miss";
    case Outcome::Unresolved: return "unresolved";
    }
    return "pending";
}

Outcome outcome_from_string(std::string_view text) {
    if (text == "hit") return Outcome::Hit;
    if (text == "miss") return Outcome::Miss;
    if (text == "unresolved") return Outcome::Unresolved;
    if (text == "pending") return Outcome::Pending;
    throw ParseError("unknown outcome '" + std::string(text) + "'");
}

StreamRunner::StreamRunner(const Dfa& dfa, const Pmc& pmc, const IntervalTable& intervals)
    : dfa_(dfa), pmc_(pmc), intervals_(intervals), dfa_state_(dfa.start()),
      reported_(pmc.size(), 0) {
    if (!(dfa.alphabet() == pmc.alphabet()))
        throw DomainError("alphabet mismatch between DFA and PMC");
    if (pmc.dfa_size() != dfa.num_states())
        throw DomainError("PMC was not built from this DFA");
    if (intervals.intervals.size() != pmc.size())
        throw DomainError("interval table does not match the PMC");
    if (pmc.order() == 0) pmc_state_ = static_cast<PmcState>(dfa.start());
    warmup_.reserve(pmc.order());
}

void StreamRunner::feed(const Event& event, RunResult& out) {
    if (event.type >= pmc_.alphabet().size()) throw DomainError("event type outside alphabet");

    if (!pmc_state_) {
        dfa_state_ = dfa_.step(dfa_state_, event.type);
        warmup_.push_back(event.type);
        if (warmup_.size() == pmc_.order()) {
            const ContextCodec codec(pmc_.alphabet().size(), pmc_.order());
            pmc_state_ = pmc_.find(dfa_state_, codec.encode(warmup_));
            if (!pmc_state_) throw Error("warm-up reached a state outside the PMC");
            warmup_.clear();
        }
        if (dfa_.is_final(dfa_state_)) out.matches.push_back({event.index, event.timestamp});
        return;
    }

    const PmcState s = pmc_.successor(*pmc_state_, event.type);
    pmc_state_ = s;
    dfa_state_ = pmc_.state(s).dfa_state;
    if (pmc_.is_absorbing(s)) {
        out.matches.push_back({event.index, event.timestamp});
        return;
    }
    if (const auto& interval = intervals_.intervals[s]) {
        out.forecasts.push_back(ForecastRecord{event.index, s, *interval, Outcome::Pending});
        return;
    }
    ++out.skipped_forecasts;
    if (!reported_[s]) {
        reported_[s] = 1;
        const auto it = std::find_if(intervals_.insufficient.begin(), intervals_.insufficient.end(),
                                     [s](const auto& sf) { return sf.state == s; });
        out.insufficient.push_back({s, it != intervals_.insufficient.end() ? it->achievable : 0.0});
    }
}

RunResult run(const EventStream& stream, const Dfa& dfa, const Pmc& pmc,
              const WaitingTimeTable& wtt, double theta) {
    if (!(stream.alphabet() == dfa.alphabet()))
        throw DomainError("alphabet mismatch between stream and DFA");
    if (wtt.num_states() != pmc.size())
        throw DomainError("waiting-time table does not match the PMC");
    const IntervalTable intervals = interval_table(wtt, theta);
    StreamRunner runner(dfa, pmc, intervals);
    RunResult result;
    for (const auto& e : stream.events()) runner.feed(e, result);
    result.forecasts = resolve_forecasts(std::move(result.forecasts), result.matches, stream.size());
    return result;
}

std::vector<ForecastRecord> resolve_forecasts(std::vector<ForecastRecord> forecasts,
                                              std::span<const MatchRecord> matches,
                                              std::size_t stream_length) {
    for (auto& f : forecasts) {
        const std::size_t t = f.emitted_at;
        const auto next = std::upper_bound(matches.begin(), matches.end(), t,
                                           [](std::size_t v, const MatchRecord& m) { return v < m.index; });
        if (next != matches.end()) {
            const std::size_t d = next->index - t;
            f.outcome = (d >= f.interval.start && d <= f.interval.end) ? Outcome::Hit : Outcome::Miss;
        } else {
            f.outcome = t + f.interval.end >= stream_length ? Outcome::Unresolved : Outcome::Miss;
        }
    }
    return forecasts;
}

void write_records(const RunResult& result, std::ostream& out) {
    auto m = result.matches.begin();
    auto f = result.forecasts.begin();
    while (m != result.matches.end() || f != result.forecasts.end()) {
        nlohmann::ordered_json j;
        if (f == result.forecasts.end() || (m != result.matches.end() && m->index <= f->emitted_at)) {
            j["kind"] = "match";
            j["index"] = m->index;
            j["timestamp"] = m->timestamp;
            ++m;
        } else {
            j["kind"] = "forecast";
            j["emitted_at"] = f->emitted_at;
            j["state"] = f->state;
            j["start"] = f->interval.start;
            j["end"] = f->interval.end;
            j["mass"] = f->interval.mass;
            j["outcome"] = std::string(to_string(f->outcome));
            ++f;
        }
        out << j.dump() << '\n';
    }
}

std::vector<ForecastRecord> read_forecast_records(std::istream& in) {
    std::vector<ForecastRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        try {
            const auto j = nlohmann::json::parse(line);
            const auto kind = j.at("kind").get<std::string>();
            if (kind == "match") continue;
            if (kind != "forecast") throw ParseError("unknown record kind '" + kind + "'");
            ForecastRecord r;
            r.emitted_at = j.at("emitted_at").get<std::size_t>();
            r.state = j.at("state").get<PmcState>();
            r.interval.start = j.at("start").get<std::size_t>();
            r.interval.end = j.at("end").get<std::size_t>();
            r.interval.mass = j.at("mass").get<double>();
            r.outcome = outcome_from_string(j.at("outcome").get<std::string>());
            if (r.interval.start < 1 || r.interval.end < r.interval.start)
                throw ParseError("invalid interval");
            out.push_back(r);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("malformed record at line " + std::to_string(lineno) + ": " + e.what(), lineno);
        } catch (const ParseError& e) {
            throw ParseError(std::string(e.what()) + " at line " + std::to_string(lineno), lineno);
        }
    }
    if (in.bad()) throw IoError("failed reading forecast records");
    return out;
}

} // namespace pmcast
