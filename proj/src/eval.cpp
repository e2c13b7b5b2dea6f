#include "lagscan/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>

#include "parallel.hpp"

using ordered_json = nlohmann::ordered_json;

namespace lagscan {

GroundTruth load_ground_truth(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(Errc::parse_error, "cannot open ground truth '" + path + "'");
    ordered_json doc = ordered_json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_array())
        fail(Errc::parse_error, "ground truth '" + path + "' must be a JSON array");
    GroundTruth truth;
    for (const auto& item : doc) {
        if (!item.is_object() || !item.contains("type") || !item.contains("f_start") ||
            !item.contains("f_end"))
            fail(Errc::parse_error, "bad annotation in '" + path + "': " + item.dump());
        Annotation a;
        a.type = lag_type_from_string(item["type"].get<std::string>());
        a.f_start = item["f_start"].get<std::size_t>();
        a.f_end = item["f_end"].get<std::size_t>();
        if (a.f_start >= a.f_end)
            fail(Errc::parse_error, "annotation requires f_start < f_end in '" + path + "'");
        truth.annotations.push_back(a);
    }
    for (std::size_t i = 0; i < truth.annotations.size(); ++i)
        for (std::size_t j = i + 1; j < truth.annotations.size(); ++j)
            if (truth.annotations[i] == truth.annotations[j])
                fail(Errc::parse_error, "duplicate annotation in '" + path + "'");
    return truth;
}

void write_ground_truth(const GroundTruth& truth, const std::string& path) {
    ordered_json doc = ordered_json::array();
    for (const Annotation& a : truth.annotations)
        doc.push_back(ordered_json{{"type", to_string(a.type)},
                                   {"f_start", a.f_start},
                                   {"f_end", a.f_end}});
    std::ofstream out(path, std::ios::binary);
    if (!out)
        fail(Errc::io_error, "cannot write ground truth '" + path + "'");
    out << doc.dump(2) << '\n';
    if (!out)
        fail(Errc::io_error, "write failed for '" + path + "'");
}

MatchResult match_lags(std::span<const LagInterval> detected, const GroundTruth& truth) {
    std::map<std::tuple<int, std::size_t, std::size_t>, int> available;
    for (const Annotation& a : truth.annotations)
        ++available[{static_cast<int>(a.type), a.f_start, a.f_end}];

    MatchResult result;
    for (const LagInterval& lag : detected) {
        const auto key = std::make_tuple(static_cast<int>(lag.type), lag.f_start, lag.f_end);
        if (auto it = available.find(key); it != available.end() && it->second > 0) {
            --it->second;
            result.tp.push_back(lag);
        } else {
            result.fp.push_back(lag);
        }
    }
    for (const Annotation& a : truth.annotations) {
        auto& remaining = available[{static_cast<int>(a.type), a.f_start, a.f_end}];
        if (remaining > 0) {
            --remaining;
            result.fn.push_back(a);
        }
    }
    return result;
}

MetricsRow metrics(long long tp, long long fp, long long fn) {
    if (tp < 0 || fp < 0 || fn < 0)
        fail(Errc::bad_config, "metric counts must be non-negative");
    MetricsRow row;
    row.tp = tp;
    row.fp = fp;
    row.fn = fn;
    if (tp + fp > 0)
        row.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    if (tp + fn > 0)
        row.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    if (row.precision && row.recall && (*row.precision + *row.recall) > 0.0)
        row.f1 = 2.0 * *row.precision * *row.recall / (*row.precision + *row.recall);
    return row;
}

EvalTable evaluate(std::span<const EvalCase> corpus, const DetectionConfig& cfg,
                   const DetectorSpec& detector, TimelineMode mode,
                   const SsimParams& ssim_params, unsigned threads) {
    if (corpus.empty())
        fail(Errc::bad_config, "evaluation corpus is empty");

    struct Counts {
        long long tp[3] = {0, 0, 0};
        long long fp[3] = {0, 0, 0};
        long long fn[3] = {0, 0, 0};
    };
    std::vector<Counts> per_cast(corpus.size());

    // Casts run in parallel; each cast's pipeline stays single-threaded.
    detail::parallel_for(corpus.size(), threads, [&](std::size_t i) {
        const DetectionOutput detection =
            detect_all(corpus[i].cast, cfg, detector, mode, ssim_params, 1);
        const MatchResult match = match_lags(detection.lags, corpus[i].truth);
        Counts& c = per_cast[i];
        for (const LagInterval& lag : match.tp)
            ++c.tp[static_cast<int>(lag.type)];
        for (const LagInterval& lag : match.fp)
            ++c.fp[static_cast<int>(lag.type)];
        for (const Annotation& a : match.fn)
            ++c.fn[static_cast<int>(a.type)];
    });

    long long tp[3] = {0, 0, 0}, fp[3] = {0, 0, 0}, fn[3] = {0, 0, 0};
    for (const Counts& c : per_cast)
        for (int t = 0; t < 3; ++t) {
            tp[t] += c.tp[t];
            fp[t] += c.fp[t];
            fn[t] += c.fn[t];
        }

    EvalTable table;
    table.janky = metrics(tp[0], fp[0], fn[0]);
    table.loading = metrics(tp[1], fp[1], fn[1]);
    table.frozen = metrics(tp[2], fp[2], fn[2]);

    table.overall.tp = tp[0] + tp[1] + tp[2];
    table.overall.fp = fp[0] + fp[1] + fp[2];
    table.overall.fn = fn[0] + fn[1] + fn[2];
    auto macro = [](std::optional<double> MetricsRow::*field, const EvalTable& t) {
        double sum = 0.0;
        int n = 0;
        for (const MetricsRow* row : {&t.janky, &t.loading, &t.frozen}) {
            if (row->*field) {
                sum += *(row->*field);
                ++n;
            }
        }
        return n > 0 ? std::optional<double>(sum / n) : std::nullopt;
    };
    table.overall.precision = macro(&MetricsRow::precision, table);
    table.overall.recall = macro(&MetricsRow::recall, table);
    table.overall.f1 = macro(&MetricsRow::f1, table);
    return table;
}

namespace {

std::string cell(const std::optional<double>& value) {
    if (!value)
        return "   n/a";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%6.3f", *value);
    return buf;
}

void add_row(std::string& out, const char* name, const MetricsRow& row) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-10s %s  %s  %s   (tp=%lld fp=%lld fn=%lld)\n", name,
                  cell(row.precision).c_str(), cell(row.recall).c_str(), cell(row.f1).c_str(),
                  row.tp, row.fp, row.fn);
    out += buf;
}

ordered_json row_to_json(const MetricsRow& row) {
    ordered_json doc{{"tp", row.tp}, {"fp", row.fp}, {"fn", row.fn}};
    doc["precision"] = row.precision ? ordered_json(*row.precision) : ordered_json(nullptr);
    doc["recall"] = row.recall ? ordered_json(*row.recall) : ordered_json(nullptr);
    doc["f1"] = row.f1 ? ordered_json(*row.f1) : ordered_json(nullptr);
    return doc;
}

} // namespace

std::string render_table(const EvalTable& table) {
    std::string out = "Lag type   precision recall  f1\n";
    add_row(out, "janky", table.janky);
    add_row(out, "loading", table.loading);
    add_row(out, "frozen", table.frozen);
    add_row(out, "average", table.overall);
    return out;
}

ordered_json table_to_json(const EvalTable& table) {
    return ordered_json{{"janky", row_to_json(table.janky)},
                        {"loading", row_to_json(table.loading)},
                        {"frozen", row_to_json(table.frozen)},
                        {"average", row_to_json(table.overall)}};
}

} // namespace lagscan
