#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "pmcast/engine.hpp"

namespace pmcast {

struct StateMetrics {
    PmcState state = 0;
    std::size_t n_forecasts = 0;
    /// hits + misses
    std::size_t n_resolved = 0;
    /// Empty when nothing resolved.
    std::optional<double> precision;
    double mean_spread = 0.0;
    double mean_distance = 0.0;
};

/// Groups by state (ascending). Precision counts resolved forecasts only;
/// spread and distance average over every forecast of the state.
std::vector<StateMetrics> evaluate(std::span<const ForecastRecord> forecasts);

void export_metrics(std::span<const StateMetrics> metrics, std::ostream& out);
void export_metrics(std::span<const StateMetrics> metrics, const std::filesystem::path& path);
std::vector<StateMetrics> import_metrics(std::istream& in);

} // namespace pmcast
