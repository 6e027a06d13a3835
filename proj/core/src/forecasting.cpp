#include "pmcast/forecasting.hpp"

#include <ostream>

#include "pmcast/error.hpp"
#include "text_util.hpp"

namespace pmcast {

WaitingTimeTable::WaitingTimeTable(std::size_t horizon, std::vector<std::vector<double>> rows)
    : horizon_(horizon), rows_(std::move(rows)) {
    if (horizon_ == 0) throw DomainError("horizon must be >= 1");
    for (const auto& r : rows_)
        if (!r.empty() && r.size() != horizon_) throw DomainError("waiting-time row length != horizon");
}

std::span<const double> WaitingTimeTable::row(PmcState s) const {
    const auto& r = rows_.at(s);
    if (r.empty())
        throw DomainError("state " + std::to_string(s) + " is absorbing and has no waiting-time row");
    return r;
}

WaitingTimeTable waiting_times(const Pmc& pmc, std::size_t horizon) {
    if (horizon == 0) throw DomainError("horizon must be >= 1");
    const std::size_t n = pmc.size();
    std::vector<std::vector<double>> rows(n);
    std::vector<PmcState> transient;
    for (PmcState s = 0; s < n; ++s)
        if (!pmc.is_absorbing(s)) {
            transient.push_back(s);
            rows[s].assign(horizon, 0.0);
        }

    // prev[s] = W_s(k-1); absorbing entries stay 0, which restricts the
    // product to the transient block Q.
    std::vector<double> prev(n, 0.0), cur(n, 0.0);
    for (auto s : transient) {
        prev[s] = pmc.absorption_mass(s);
        rows[s][0] = prev[s];
    }
    for (std::size_t k = 1; k < horizon; ++k) {
        for (auto s : transient) {
            double acc = 0.0;
            for (const auto& t : pmc.row(s)) acc += t.probability * prev[t.target];
            cur[s] = acc;
            rows[s][k] = acc;
        }
        std::swap(prev, cur);
    }
    return WaitingTimeTable(horizon, std::move(rows));
}

void check_theta(double theta) {
    if (!(theta > 0.0 && theta <= 1.0)) throw DomainError("theta must be in (0,1]");
}

ForecastInterval forecast_interval(std::span<const double> wtd, double theta) {
    check_theta(theta);
    const std::size_t h = wtd.size();
    std::vector<long double> prefix(h + 1, 0.0L);
    for (std::size_t i = 0; i < h; ++i) prefix[i + 1] = prefix[i] + wtd[i];
    if (h == 0 || prefix[h] < theta) throw HorizonInsufficient(static_cast<double>(prefix[h]), theta);

    const long double target = theta;
    std::size_t best_start = 0, best_len = h + 1;
    std::size_t lo = 0;
    for (std::size_t hi = 0; hi < h; ++hi) {
        // Largest lo such that [lo, hi] still reaches theta.
        while (lo < hi && prefix[hi + 1] - prefix[lo + 1] >= target) ++lo;
        if (prefix[hi + 1] - prefix[lo] >= target && hi - lo + 1 < best_len) {
            best_len = hi - lo + 1;
            best_start = lo;
        }
    }

    double mass = 0.0;
    for (std::size_t i = best_start; i < best_start + best_len; ++i) mass += wtd[i];
    return ForecastInterval{best_start + 1, best_start + best_len, mass};
}

IntervalTable interval_table(const WaitingTimeTable& wtt, double theta) {
    check_theta(theta);
    IntervalTable table;
    table.theta = theta;
    table.intervals.resize(wtt.num_states());
    for (PmcState s = 0; s < wtt.num_states(); ++s) {
        if (!wtt.has_row(s)) continue;
        try {
            table.intervals[s] = forecast_interval(wtt.row(s), theta);
        } catch (const HorizonInsufficient& e) {
            table.insufficient.push_back({s, e.achievable()});
        }
    }
    return table;
}

void write_wtd_csv(const WaitingTimeTable& wtt, std::ostream& out) {
    out << "state,k,probability\n";
    for (PmcState s = 0; s < wtt.num_states(); ++s) {
        if (!wtt.has_row(s)) continue;
        const auto r = wtt.row(s);
        for (std::size_t k = 0; k < r.size(); ++k)
            out << s << ',' << (k + 1) << ',' << detail::format_double(r[k]) << '\n';
    }
}

} // namespace pmcast
