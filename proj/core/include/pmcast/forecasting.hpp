#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "pmcast/markov.hpp"

namespace pmcast {

inline constexpr std::size_t kDefaultHorizon = 500;

/// First-passage distributions W_s(1..h) for every non-absorbing PMC state.
class WaitingTimeTable {
public:
    WaitingTimeTable(std::size_t horizon, std::vector<std::vector<double>> rows);

    std::size_t horizon() const noexcept { return horizon_; }
    std::size_t num_states() const noexcept { return rows_.size(); }
    bool has_row(PmcState s) const { return !rows_.at(s).empty(); }
    /// rows(s)[k-1] = W_s(k). Throws DomainError for absorbing states.
    std::span<const double> row(PmcState s) const;

private:
    std::size_t horizon_;
    std::vector<std::vector<double>> rows_;
};

/// W_s(1) = f(s); W_s(k) = sum_{s'} Q(s, s') W_{s'}(k-1), where Q is the
/// transition matrix restricted to non-absorbing states and f the one-step
/// absorption mass. O(h * nnz).
WaitingTimeTable waiting_times(const Pmc& pmc, std::size_t horizon);

/// Inclusive range of future-event counts.
struct ForecastInterval {
    std::size_t start = 1;
    std::size_t end = 1;
    double mass = 0.0;

    std::size_t spread() const noexcept { return end - start; }
    std::size_t distance() const noexcept { return start; }

    friend bool operator==(const ForecastInterval&, const ForecastInterval&) = default;
};

/// Shortest window [start, end] within [1, h] whose mass reaches `theta`;
/// ties go to the earliest start. Throws DomainError for theta outside
/// (0, 1] and HorizonInsufficient when the whole row falls short.
ForecastInterval forecast_interval(std::span<const double> wtd, double theta);

/// Validates theta in (0, 1]; throws DomainError("theta must be in (0,1]").
void check_theta(double theta);

/// Per-state intervals for one threshold. Entries are empty for absorbing
/// states and for states whose row cannot reach theta; the latter are also
/// listed in `insufficient` with their achievable mass.
struct IntervalTable {
    struct Shortfall {
        PmcState state;
        double achievable;
    };
    double theta = 0.5;
    std::vector<std::optional<ForecastInterval>> intervals;
    std::vector<Shortfall> insufficient;
};

IntervalTable interval_table(const WaitingTimeTable& wtt, double theta);

/// CSV `state,k,probability`, non-absorbing states ascending.
void write_wtd_csv(const WaitingTimeTable& wtt, std::ostream& out);

} // namespace pmcast
