#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pmcast/automaton.hpp"
#include "pmcast/event_model.hpp"
#include "pmcast/forecasting.hpp"
#include "pmcast/markov.hpp"

namespace pmcast {

struct MatchRecord {
    std::size_t index = 0;
    std::uint64_t timestamp = 0;
    friend bool operator==(const MatchRecord&, const MatchRecord&) = default;
};

enum class Outcome { Pending, Hit, Miss, Unresolved };

std::string_view to_string(Outcome o) noexcept;
Outcome outcome_from_string(std::string_view text);

struct ForecastRecord {
    std::size_t emitted_at = 0;
    PmcState state = 0;
    ForecastInterval interval;
    Outcome outcome = Outcome::Pending;
    friend bool operator==(const ForecastRecord&, const ForecastRecord&) = default;
};

struct RunResult {
    std::vector<MatchRecord> matches;
    std::vector<ForecastRecord> forecasts;
    /// States visited whose interval could not reach theta; once per state,
    /// in order of first visit.
    std::vector<IntervalTable::Shortfall> insufficient;
    /// Visits to such states (no forecast emitted for them).
    std::size_t skipped_forecasts = 0;
};

/// Single-pass runtime. Feed events in order; memory does not grow with the
/// stream apart from the output lists.
class StreamRunner {
public:
    /// `intervals` must come from the same PMC. The DFA, PMC and interval
    /// table must outlive the runner.
    StreamRunner(const Dfa& dfa, const Pmc& pmc, const IntervalTable& intervals);

    void feed(const Event& event, RunResult& out);

    /// Current PMC state, empty during warm-up.
    std::optional<PmcState> state() const noexcept { return pmc_state_; }

private:
    const Dfa& dfa_;
    const Pmc& pmc_;
    const IntervalTable& intervals_;
    DfaState dfa_state_;
    std::vector<Symbol> warmup_;
    std::optional<PmcState> pmc_state_;
    std::vector<char> reported_;
};

/// Runs the stream, then resolves every forecast against the matches.
RunResult run(const EventStream& stream, const Dfa& dfa, const Pmc& pmc,
              const WaitingTimeTable& wtt, double theta);

/// For a forecast at t with interval (s, e) and t' the first match after t:
/// hit if t' - t in [s, e]; miss if t' exists otherwise; with no later match,
/// unresolved if t + e >= stream_length and miss otherwise.
std::vector<ForecastRecord> resolve_forecasts(std::vector<ForecastRecord> forecasts,
                                              std::span<const MatchRecord> matches,
                                              std::size_t stream_length);

/// JSON-lines, one record per line in event order.
void write_records(const RunResult& result, std::ostream& out);
/// Reads the forecast records of a JSON-lines file; match lines are skipped.
std::vector<ForecastRecord> read_forecast_records(std::istream& in);

} // namespace pmcast
