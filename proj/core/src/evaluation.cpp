#include "pmcast/evaluation.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "pmcast/error.hpp"
#include "text_util.hpp"

namespace pmcast {

namespace {
constexpr std::string_view kHeader = "state,n_forecasts,n_resolved,precision,mean_spread,mean_distance";
}

std::vector<StateMetrics> evaluate(std::span<const ForecastRecord> forecasts) {
    struct Acc {
        std::size_t n = 0, hits = 0, misses = 0;
        double spread = 0.0, distance = 0.0;
    };
    std::map<PmcState, Acc> by_state;
    for (const auto& f : forecasts) {
        auto& a = by_state[f.state];
        ++a.n;
        if (f.outcome == Outcome::Hit) ++a.hits;
        if (f.outcome == Outcome::Miss) ++a.misses;
        a.spread += static_cast<double>(f.interval.spread());
        a.distance += static_cast<double>(f.interval.distance());
    }
    std::vector<StateMetrics> out;
    out.reserve(by_state.size());
    for (const auto& [state, a] : by_state) {
        StateMetrics m;
        m.state = state;
        m.n_forecasts = a.n;
        m.n_resolved = a.hits + a.misses;
        if (m.n_resolved > 0)
            m.precision = static_cast<double>(a.hits) / static_cast<double>(m.n_resolved);
        m.mean_spread = a.spread / static_cast<double>(a.n);
        m.mean_distance = a.distance / static_cast<double>(a.n);
        out.push_back(m);
    }
    return out;
}

void export_metrics(std::span<const StateMetrics> metrics, std::ostream& out) {
    out << kHeader << '\n';
    for (const auto& m : metrics) {
        out << m.state << ',' << m.n_forecasts << ',' << m.n_resolved << ','
            << (m.precision ? detail::format_double(*m.precision) : std::string()) << ','
            << detail::format_double(m.mean_spread) << ',' << detail::format_double(m.mean_distance)
            << '\n';
    }
}

void export_metrics(std::span<const StateMetrics> metrics, const std::filesystem::path& path) {
    std::ostringstream ss;
    export_metrics(metrics, ss);
    detail::write_file(path, ss.str());
}

std::vector<StateMetrics> import_metrics(std::istream& in) {
    std::vector<StateMetrics> out;
    std::string line;
    if (!std::getline(in, line) || detail::trim(line) != kHeader)
        throw ParseError("metrics CSV must start with '" + std::string(kHeader) + "'", 1);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const auto f = detail::split(detail::trim(line), ',');
        if (f.size() != 6) throw ParseError("expected 6 fields at line " + std::to_string(lineno), lineno);
        try {
            StateMetrics m;
            m.state = static_cast<PmcState>(std::stoul(std::string(f[0])));
            m.n_forecasts = std::stoull(std::string(f[1]));
            m.n_resolved = std::stoull(std::string(f[2]));
            if (!f[3].empty()) m.precision = detail::parse_double(f[3]);
            m.mean_spread = detail::parse_double(f[4]);
            m.mean_distance = detail::parse_double(f[5]);
            out.push_back(m);
        } catch (const std::logic_error&) {
            throw ParseError("malformed number at line " + std::to_string(lineno), lineno);
        }
    }
    return out;
}

} // namespace pmcast
