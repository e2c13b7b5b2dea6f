#include "lagscan/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lagscan/classify.hpp"
#include "lagscan/eval.hpp"
#include "lagscan/ingest.hpp"
#include "lagscan/report.hpp"
#include "lagscan/synth.hpp"
#include "lagscan/version.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace lagscan {

namespace {

struct CliConfig {
    DetectionConfig detection;
    SeverityConfig severity;
    SsimParams ssim;
    DetectorSpec detector;
    RankWeights weights;
    GatePolicy policy = GatePolicy::fail_on_severe;
    TimelineMode timeline = TimelineMode::variable_rate;
    std::string interaction_trace_path;
    std::string decoder_cmd;
    std::string metrics_path;
    unsigned threads = 0;

    void validate() const {
        detection.validate();
        severity.validate(detection);
        ssim.validate();
        detector.validate();
        weights.validate();
    }
};

template <typename T>
void read_if(const ordered_json& doc, const char* key, T& out) {
    if (doc.contains(key))
        out = doc.at(key).get<T>();
}

// Config file: one JSON document mirroring the flag names.
void apply_config_file(CliConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in)
        fail(Errc::io_error, "cannot open config '" + path + "'");
    ordered_json doc = ordered_json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object())
        fail(Errc::parse_error, "config '" + path + "' is not a JSON object");

    try {
        if (doc.contains("detection")) {
            const auto& d = doc["detection"];
            read_if(d, "frame_budget_ms", cfg.detection.frame_budget_ms);
            read_if(d, "jank_lag_ms", cfg.detection.jank_lag_ms);
            read_if(d, "frozen_lag_ms", cfg.detection.frozen_lag_ms);
            read_if(d, "load_lag_ms", cfg.detection.load_lag_ms);
            read_if(d, "ssim_threshold", cfg.detection.ssim_threshold);
            read_if(d, "min_placeholder_area_fraction",
                    cfg.detection.min_placeholder_area_fraction);
        }
        if (doc.contains("severity")) {
            const auto& s = doc["severity"];
            read_if(s, "t_janky_ms", cfg.severity.t_janky_ms);
            read_if(s, "t_load_ms", cfg.severity.t_load_ms);
            read_if(s, "t_frozen_ms", cfg.severity.t_frozen_ms);
        }
        if (doc.contains("ssim")) {
            const auto& p = doc["ssim"];
            read_if(p, "window_size", cfg.ssim.window_size);
            read_if(p, "gaussian_sigma", cfg.ssim.gaussian_sigma);
            read_if(p, "k1", cfg.ssim.k1);
            read_if(p, "k2", cfg.ssim.k2);
            read_if(p, "dynamic_range", cfg.ssim.dynamic_range);
            if (p.contains("downscale_max_dim")) {
                if (p["downscale_max_dim"].is_null())
                    cfg.ssim.downscale_max_dim = std::nullopt;
                else
                    cfg.ssim.downscale_max_dim = p["downscale_max_dim"].get<int>();
            }
        }
        if (doc.contains("detector"))
            cfg.detector.kind = doc["detector"].get<std::string>() == "external"
                                    ? DetectorSpec::Kind::external
                                    : DetectorSpec::Kind::heuristic;
        read_if(doc, "detector_cmd", cfg.detector.external_cmd);
        if (doc.contains("heuristic")) {
            const auto& h = doc["heuristic"];
            read_if(h, "max_gray_stddev", cfg.detector.max_gray_stddev);
            read_if(h, "min_region_area_fraction", cfg.detector.min_region_area_fraction);
            read_if(h, "gray_band_lo", cfg.detector.gray_band_lo);
            read_if(h, "gray_band_hi", cfg.detector.gray_band_hi);
        }
        read_if(doc, "confidence_floor", cfg.detector.confidence_floor);
        read_if(doc, "detector_timeout_sec", cfg.detector.timeout_sec);
        if (doc.contains("weights")) {
            const auto& w = doc["weights"];
            read_if(w, "frequency", cfg.weights.frequency);
            read_if(w, "duration", cfg.weights.duration);
            read_if(w, "interaction", cfg.weights.interaction);
            read_if(w, "visual", cfg.weights.visual);
        }
        if (doc.contains("policy"))
            cfg.policy = gate_policy_from_string(doc["policy"].get<std::string>());
        if (doc.contains("timeline"))
            cfg.timeline = timeline_mode_from_string(doc["timeline"].get<std::string>());
        read_if(doc, "interaction_trace", cfg.interaction_trace_path);
        read_if(doc, "decoder_cmd", cfg.decoder_cmd);
        read_if(doc, "metrics_attachment", cfg.metrics_path);
        if (doc.contains("threads"))
            cfg.threads = doc["threads"].get<unsigned>();
    } catch (const ordered_json::exception& e) {
        fail(Errc::parse_error, "config '" + path + "': " + e.what());
    }
}

bool looks_like_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return false;
    char head[6] = {};
    in.read(head, sizeof(head));
    return in.gcount() == 6 && std::string_view(head, 6) == "width=";
}

std::string summary_line(const ReportEntry& entry) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%d %s %s [%zu,%zu] %.1fms", entry.rank,
                  to_string(entry.type), entry.severe ? "severe" : "minor", entry.f_start,
                  entry.f_end, entry.duration_ms);
    return buf;
}

int cmd_analyze(const std::string& input, const CliConfig& cfg, const std::string& out_dir) {
    cfg.validate();
    fs::create_directories(out_dir);

    Screencast cast = [&] {
        if (looks_like_manifest(input))
            return load_manifest(input);
        if (cfg.decoder_cmd.empty())
            fail(Errc::bad_config,
                 "'" + input + "' is not a manifest; pass --decoder-cmd to extract video");
        const std::string frames_dir = (fs::path(out_dir) / "extracted_frames").string();
        const FrameManifest manifest = extract_frames(input, cfg.decoder_cmd, frames_dir);
        const std::string manifest_path = (fs::path(frames_dir) / "manifest.txt").string();
        write_manifest(manifest, manifest_path);
        return load_manifest(manifest_path);
    }();

    std::optional<InteractionTrace> trace;
    if (!cfg.interaction_trace_path.empty())
        trace = load_trace(cfg.interaction_trace_path);

    DetectionOutput detection =
        detect_all(cast, cfg.detection, cfg.detector, cfg.timeline, cfg.ssim, cfg.threads);
    const std::vector<LagInterval> lags = mark_severity(detection.lags, cfg.severity);

    std::vector<LagInterval> severe;
    std::vector<double> severe_fractions;
    for (std::size_t i = 0; i < lags.size(); ++i) {
        if (lags[i].severe) {
            severe.push_back(lags[i]);
            severe_fractions.push_back(detection.area_fractions[i]);
        }
    }
    const std::vector<RankedLag> ranked = rank(severe, trace, severe_fractions, cfg.weights);

    std::optional<ordered_json> metrics;
    if (!cfg.metrics_path.empty()) {
        std::ifstream in(cfg.metrics_path);
        if (!in)
            fail(Errc::io_error, "cannot open metrics attachment '" + cfg.metrics_path + "'");
        ordered_json doc = ordered_json::parse(in, nullptr, false);
        if (doc.is_discarded())
            fail(Errc::parse_error, "metrics attachment is not valid JSON");
        metrics = std::move(doc);
    }

    ConfigEcho echo;
    echo.detection = cfg.detection;
    echo.severity = cfg.severity;
    echo.ssim = cfg.ssim;
    echo.detector_kind =
        cfg.detector.kind == DetectorSpec::Kind::external ? "external" : "heuristic";
    echo.weights = cfg.weights;
    echo.timeline = cfg.timeline;

    const AnalysisReport report =
        make_report(detection, lags, ranked, echo, trace, std::move(metrics));
    emit_json(report, (fs::path(out_dir) / "report.json").string());
    emit_html(report, detection.analyzed, out_dir);

    for (const ReportEntry& entry : report.lags)
        std::cout << summary_line(entry) << '\n';
    return exit_code(report, cfg.policy);
}

int cmd_eval(const std::string& corpus_dir, const CliConfig& cfg, const std::string& out_dir) {
    cfg.validate();
    if (!fs::is_directory(corpus_dir))
        fail(Errc::io_error, "corpus directory '" + corpus_dir + "' is not readable");

    std::vector<fs::path> case_dirs;
    if (fs::exists(fs::path(corpus_dir) / "manifest.txt"))
        case_dirs.push_back(corpus_dir);
    else
        for (const auto& entry : fs::directory_iterator(corpus_dir))
            if (entry.is_directory() && fs::exists(entry.path() / "manifest.txt") &&
                fs::exists(entry.path() / "truth.json"))
                case_dirs.push_back(entry.path());
    std::sort(case_dirs.begin(), case_dirs.end());
    if (case_dirs.empty())
        fail(Errc::io_error,
             "no (manifest.txt, truth.json) cases found under '" + corpus_dir + "'");

    std::vector<EvalCase> corpus;
    corpus.reserve(case_dirs.size());
    for (const fs::path& dir : case_dirs) {
        EvalCase c;
        c.cast = load_manifest((dir / "manifest.txt").string());
        c.truth = load_ground_truth((dir / "truth.json").string());
        corpus.push_back(std::move(c));
    }

    const EvalTable table =
        evaluate(corpus, cfg.detection, cfg.detector, cfg.timeline, cfg.ssim, cfg.threads);
    std::cout << render_table(table);

    const std::string target = out_dir.empty() ? corpus_dir : out_dir;
    fs::create_directories(target);
    const fs::path metrics_path = fs::path(target) / "metrics.json";
    std::ofstream out(metrics_path, std::ios::binary);
    if (!out)
        fail(Errc::io_error, "cannot write '" + metrics_path.string() + "'");
    out << table_to_json(table).dump(2) << '\n';
    return 0;
}

int cmd_gen(const std::string& spec_path, const std::string& out_dir) {
    std::ifstream in(spec_path);
    if (!in)
        fail(Errc::io_error, "cannot open spec '" + spec_path + "'");
    ordered_json doc = ordered_json::parse(in, nullptr, false);
    if (doc.is_discarded())
        fail(Errc::parse_error, "spec '" + spec_path + "' is not valid JSON");
    const SyntheticSpec spec = synthetic_spec_from_json(doc);
    const SyntheticResult result = generate_synthetic(spec);
    const std::string manifest = write_synthetic_case(result, out_dir);
    std::cout << "wrote " << result.cast.frame_count() << " frames, "
              << result.truth.annotations.size() << " annotations -> " << manifest << '\n';
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"Detects user-perceived GUI lags in mobile-app screencasts"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    CliConfig cfg;
    std::string config_path;
    std::string out_dir;
    std::string detector_name;
    std::string detector_cmd;
    std::string policy_name;
    std::string timeline_name;
    std::string trace_path;
    std::string metrics_path;
    std::string decoder_cmd;
    std::optional<double> ssim_threshold;
    std::optional<unsigned> threads;

    auto add_shared = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file; flags override its keys");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--detector", detector_name, "placeholder detector: heuristic|external");
        sub->add_option("--detector-cmd", detector_cmd, "external detector command");
        sub->add_option("--policy", policy_name,
                        "gate policy: never-fail|fail-on-severe|fail-on-any");
        sub->add_option("--ssim-threshold", ssim_threshold, "static-pair similarity threshold");
        sub->add_option("--interaction-trace", trace_path, "interaction trace file");
        sub->add_option("--timeline", timeline_name, "timeline mode: variable|constant");
        sub->add_option("--decoder-cmd", decoder_cmd,
                        "video decoder template with {input} and {outdir}");
        sub->add_option("--metrics", metrics_path, "system-metrics JSON attachment");
        sub->add_option("--threads", threads, "worker threads (0 = all cores)");
    };

    std::string analyze_input;
    CLI::App* analyze = app.add_subcommand("analyze", "detect lags and write reports");
    analyze->add_option("input", analyze_input, "frame manifest or video file")->required();
    add_shared(analyze);

    std::string eval_corpus;
    CLI::App* eval_cmd = app.add_subcommand("eval", "run the evaluation protocol on a corpus");
    eval_cmd->add_option("corpus", eval_corpus, "directory of (manifest, truth) cases")
        ->required();
    add_shared(eval_cmd);

    std::string gen_spec;
    CLI::App* gen = app.add_subcommand("gen", "generate a synthetic labeled screencast");
    gen->add_option("spec", gen_spec, "synthetic spec JSON")->required();
    add_shared(gen);

    try {
        std::vector<const char*> argv;
        argv.push_back("lagscan");
        for (const std::string& a : args)
            argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (!config_path.empty())
            apply_config_file(cfg, config_path);
        if (!detector_name.empty())
            cfg.detector.kind = detector_name == "external" ? DetectorSpec::Kind::external
                                                            : DetectorSpec::Kind::heuristic;
        if (!detector_cmd.empty())
            cfg.detector.external_cmd = detector_cmd;
        if (!policy_name.empty())
            cfg.policy = gate_policy_from_string(policy_name);
        if (!timeline_name.empty())
            cfg.timeline = timeline_mode_from_string(timeline_name);
        if (!trace_path.empty())
            cfg.interaction_trace_path = trace_path;
        if (!metrics_path.empty())
            cfg.metrics_path = metrics_path;
        if (!decoder_cmd.empty())
            cfg.decoder_cmd = decoder_cmd;
        if (ssim_threshold)
            cfg.detection.ssim_threshold = *ssim_threshold;
        if (threads)
            cfg.threads = *threads;

        if (analyze->parsed())
            return cmd_analyze(analyze_input, cfg, out_dir.empty() ? "lagscan-out" : out_dir);
        if (eval_cmd->parsed())
            return cmd_eval(eval_corpus, cfg, out_dir);
        if (gen->parsed())
            return cmd_gen(gen_spec, out_dir.empty() ? "lagscan-gen" : out_dir);
    } catch (const Error& e) {
        std::cerr << "lagscan: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "lagscan: unexpected error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

} // namespace lagscan
