#include "lagscan/prioritize.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

namespace lagscan {

const char* to_string(InteractionEvent::Kind kind) noexcept {
    switch (kind) {
    case InteractionEvent::Kind::tap: return "tap";
    case InteractionEvent::Kind::scroll: return "scroll";
    case InteractionEvent::Kind::swipe: return "swipe";
    case InteractionEvent::Kind::key: return "key";
    case InteractionEvent::Kind::other: return "other";
    }
    return "other";
}

InteractionEvent::Kind interaction_kind_from_string(std::string_view name) {
    if (name == "tap") return InteractionEvent::Kind::tap;
    if (name == "scroll") return InteractionEvent::Kind::scroll;
    if (name == "swipe") return InteractionEvent::Kind::swipe;
    if (name == "key") return InteractionEvent::Kind::key;
    if (name == "other") return InteractionEvent::Kind::other;
    fail(Errc::parse_error, "unknown interaction kind '" + std::string(name) + "'");
}

InteractionTrace load_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        fail(Errc::parse_error, "cannot open trace '" + path + "'");
    InteractionTrace trace;
    std::string line;
    std::size_t line_no = 0;
    double prev_pts = -1.0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            fail(Errc::parse_error,
                 "expected '<pts_ms>,<kind>' at " + path + ":" + std::to_string(line_no));
        double pts = 0.0;
        const auto [ptr, ec] = std::from_chars(line.data(), line.data() + comma, pts);
        if (ec != std::errc{} || ptr != line.data() + comma)
            fail(Errc::parse_error,
                 "bad pts value at " + path + ":" + std::to_string(line_no));
        if (pts < prev_pts)
            fail(Errc::parse_error,
                 "event pts must be non-decreasing at " + path + ":" + std::to_string(line_no));
        prev_pts = pts;
        trace.events.push_back(
            InteractionEvent{pts, interaction_kind_from_string(line.substr(comma + 1))});
    }
    return trace;
}

void write_trace(const InteractionTrace& trace, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        fail(Errc::io_error, "cannot write trace '" + path + "'");
    for (const InteractionEvent& event : trace.events) {
        char buf[64];
        const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), event.pts_ms);
        if (ec != std::errc{})
            fail(Errc::io_error, "cannot format event pts");
        out << std::string_view(buf, end) << ',' << to_string(event.kind) << '\n';
    }
    if (!out)
        fail(Errc::io_error, "write failed for trace '" + path + "'");
}

std::optional<InteractionEvent> adjacent_event(const LagInterval& lag,
                                               const InteractionTrace& trace) {
    for (const InteractionEvent& event : trace.events) {
        if (event.pts_ms <= lag.start_pts_ms &&
            lag.start_pts_ms <= event.pts_ms + trace.window_ms)
            return event;
    }
    return std::nullopt;
}

bool interaction_adjacent(const LagInterval& lag, const InteractionTrace& trace) {
    return adjacent_event(lag, trace).has_value();
}

void RankWeights::validate() const {
    const double sum = frequency + duration + interaction + visual;
    if (frequency < 0.0 || duration < 0.0 || interaction < 0.0 || visual < 0.0)
        fail(Errc::bad_weights, "weights must be non-negative");
    if (std::abs(sum - 1.0) > 1e-9)
        fail(Errc::bad_weights, "weights must sum to 1, got " + std::to_string(sum));
}

std::vector<RankedLag> rank(std::span<const LagInterval> lags,
                            const std::optional<InteractionTrace>& trace,
                            std::span<const double> area_fractions,
                            const RankWeights& weights) {
    weights.validate();
    if (area_fractions.size() != lags.size())
        fail(Errc::bad_config, "area_fractions must be parallel to lags");
    for (const LagInterval& lag : lags)
        if (!lag.severe)
            fail(Errc::bad_config, "rank() expects severe lags only");
    if (lags.empty())
        return {};

    std::size_t type_counts[3] = {0, 0, 0};
    double max_duration = 0.0;
    for (const LagInterval& lag : lags) {
        ++type_counts[static_cast<int>(lag.type)];
        max_duration = std::max(max_duration, lag.duration_ms);
    }

    std::vector<RankedLag> ranked;
    ranked.reserve(lags.size());
    for (std::size_t i = 0; i < lags.size(); ++i) {
        const LagInterval& lag = lags[i];
        RankedLag entry;
        entry.lag = lag;
        entry.area_fraction = lag.type == LagType::loading ? area_fractions[i] : 1.0;
        entry.factors.frequency = static_cast<double>(type_counts[static_cast<int>(lag.type)]) /
                                  static_cast<double>(lags.size());
        entry.factors.duration = max_duration > 0.0 ? lag.duration_ms / max_duration : 0.0;
        entry.factors.interaction = trace && interaction_adjacent(lag, *trace) ? 1.0 : 0.0;
        entry.factors.visual = lag.type == LagType::loading ? area_fractions[i] : 1.0;
        entry.score = weights.frequency * entry.factors.frequency +
                      weights.duration * entry.factors.duration +
                      weights.interaction * entry.factors.interaction +
                      weights.visual * entry.factors.visual;
        ranked.push_back(std::move(entry));
    }

    std::sort(ranked.begin(), ranked.end(), [](const RankedLag& a, const RankedLag& b) {
        if (a.score != b.score)
            return a.score > b.score;
        if (a.lag.f_start != b.lag.f_start)
            return a.lag.f_start < b.lag.f_start;
        return static_cast<int>(a.lag.type) < static_cast<int>(b.lag.type);
    });
    for (std::size_t i = 0; i < ranked.size(); ++i)
        ranked[i].rank = static_cast<int>(i + 1);
    return ranked;
}

} // namespace lagscan
