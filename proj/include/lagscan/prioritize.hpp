#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lagscan/model.hpp"

namespace lagscan {

struct InteractionEvent {
    enum class Kind { tap, scroll, swipe, key, other };

    double pts_ms = 0.0;
    Kind kind = Kind::other;
};

const char* to_string(InteractionEvent::Kind kind) noexcept;
InteractionEvent::Kind interaction_kind_from_string(std::string_view name);

/// Ordered user-input events recorded alongside the screencast. A lag is
/// interaction-adjacent when it starts within window_ms after an event.
struct InteractionTrace {
    std::vector<InteractionEvent> events;
    double window_ms = 500.0;
};

/// Trace file format: one `<pts_ms>,<kind>` line per event, UTF-8.
InteractionTrace load_trace(const std::string& path);
void write_trace(const InteractionTrace& trace, const std::string& path);

/// true iff some event satisfies event.pts <= lag start <= event.pts + window.
bool interaction_adjacent(const LagInterval& lag, const InteractionTrace& trace);

/// Returns the matching event, for report context.
std::optional<InteractionEvent> adjacent_event(const LagInterval& lag,
                                               const InteractionTrace& trace);

struct RankWeights {
    double frequency = 0.25;
    double duration = 0.25;
    double interaction = 0.25;
    double visual = 0.25;

    void validate() const; // throws BadWeights

    bool operator==(const RankWeights&) const = default;
};

struct FactorBreakdown {
    double frequency = 0.0;
    double duration = 0.0;
    double interaction = 0.0;
    double visual = 0.0;

    bool operator==(const FactorBreakdown&) const = default;
};

struct RankedLag {
    LagInterval lag;
    double score = 0.0;
    FactorBreakdown factors;
    int rank = 0;
    double area_fraction = 1.0;
};

/// Ranks severe lags by the weighted combination of frequency, duration,
/// interaction adjacency and visual context. area_fractions is parallel to
/// `lags` (placeholder coverage; only loading lags use it). Ties order by
/// f_start, then janky < loading < frozen.
std::vector<RankedLag> rank(std::span<const LagInterval> lags,
                            const std::optional<InteractionTrace>& trace,
                            std::span<const double> area_fractions,
                            const RankWeights& weights = {});

} // namespace lagscan
