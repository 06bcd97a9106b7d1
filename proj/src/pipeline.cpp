#include "saedge/pipeline.hpp"

#include "saedge/errors.hpp"

#include <json.hpp>

#include <algorithm>

namespace saedge {

TrainedPipeline train_model(std::span<const ChannelSeries> healthy, const TrainOptions& options) {
    if (healthy.empty()) {
        throw DataError("no healthy training series");
    }
    const StackSpec spec = default_spec(options.window_size);

    std::vector<double> all;
    for (const auto& s : healthy) {
        all.insert(all.end(), s.samples.begin(), s.samples.end());
    }
    const RestParams rest = options.rest.value_or(default_rest_params(all));

    // Windows that contain a stoppage edge (a rest run of a tenth of the
    // window or more) are left out along with fully resting ones.
    const std::size_t edge_run = std::max<std::size_t>(1, spec.window_size / 10);
    std::vector<Window> kept;
    for (const auto& s : healthy) {
        for (auto& w : segment(s, spec.window_size)) {
            if (longest_rest_run(w.values, rest) < edge_run) {
                kept.push_back(std::move(w));
            }
        }
    }
    if (kept.empty()) {
        throw DataError("insufficient samples: every healthy window is resting");
    }
    std::vector<double> active;
    active.reserve(kept.size() * spec.window_size);
    for (const auto& w : kept) {
        active.insert(active.end(), w.values.begin(), w.values.end());
    }
    const NormStats norm = fit_norm_stats(active);

    const auto rows = static_cast<Eigen::Index>(spec.window_size);
    Eigen::MatrixXd windows(rows, static_cast<Eigen::Index>(kept.size()));
    for (std::size_t k = 0; k < kept.size(); ++k) {
        const auto v = normalize(std::span<const double>(kept[k].values), norm);
        windows.col(static_cast<Eigen::Index>(k)) = Eigen::Map<const Eigen::VectorXd>(v.data(), rows);
    }

    StackTraining stack = train_stack(windows, spec, options.config);
    DecoderTraining decoder = train_final_decoder(stack.encoders, windows, spec, options.config);

    TrainedPipeline out;
    auto& model = out.file.model;
    model.spec = spec;
    model.encoders = std::move(stack.encoders);
    model.final_decoder = std::move(decoder.decoder);
    model.norm_stats = norm;
    model.rest = rest;
    model.validate();

    out.healthy_errors.reserve(kept.size());
    for (Eigen::Index k = 0; k < windows.cols(); ++k) {
        out.healthy_errors.push_back(
            reconstruction_error(model, {windows.col(k).data(), spec.window_size}));
    }
    out.file.thresholds = fit_thresholds(out.healthy_errors, options.percentile);
    out.file.metadata.config = options.config;
    out.file.metadata.data_fingerprint = fingerprint(all);
    out.file.metadata.training_windows = kept.size();
    out.stages = std::move(stack.stages);
    out.decoder_training = std::move(decoder.training);
    return out;
}

std::vector<double> window_errors(const ChannelSeries& series, const StackedModel& model) {
    std::vector<double> errors;
    for (const auto& w : segment(series, model.spec.window_size)) {
        if (detect_resting(w, model.rest)) {
            errors.push_back(kRestingSentinel);
        } else {
            errors.push_back(reconstruction_error(model, normalize(std::span<const double>(w.values), model.norm_stats)));
        }
    }
    return errors;
}

std::vector<WindowResult> batch_window_results(const ChannelSeries& series, const StackedModel& model,
                                               const ThresholdSet& thresholds, const AlarmConfig& alarm) {
    const auto errors = window_errors(series, model);
    std::vector<WindowResult> out;
    std::vector<TrafficLight> history;
    for (std::size_t k = 0; k < errors.size(); ++k) {
        WindowResult r;
        r.origin = k * model.spec.window_size;
        r.error = errors[k];
        r.band = classify(errors[k], thresholds);
        history.push_back(r.band);
        r.alarm = alarm_kind(history, alarm);
        out.push_back(r);
    }
    return out;
}

StreamRun run_stream(const ChannelSeries& series, std::shared_ptr<const StackedModel> model,
                     const ThresholdSet& thresholds, const DetectorConfig& config) {
    Detector detector(std::move(model), thresholds, config, series.start_time);
    StreamRun run;
    run.stream_length = series.samples.size();
    for (double v : series.samples) {
        auto out = detector.push_sample(v);
        if (detector.last_window()) {
            run.windows.push_back(*detector.last_window());
        }
        if (out) {
            if (auto* ev = std::get_if<AnomalyEvent>(&*out)) {
                run.events.push_back(*ev);
            } else {
                run.segments.push_back(std::get<TransmissionSegment>(std::move(*out)));
            }
        }
    }
    if (auto tail = detector.finish()) {
        run.segments.push_back(std::move(*tail));
    }
    return run;
}

std::optional<double> first_alarm_time(const StreamRun& run, std::size_t window_size, double sample_rate_hz,
                                       AlarmKind kind) {
    for (const auto& w : run.windows) {
        if (w.alarm != AlarmKind::None && (kind == AlarmKind::None || w.alarm == kind)) {
            return static_cast<double>(w.origin + window_size) / sample_rate_hz;
        }
    }
    return std::nullopt;
}

SimulationReport simulate_corpus(const std::filesystem::path& corpus_dir, const SimulationOptions& options) {
    const CorpusManifest manifest = read_manifest(corpus_dir / "manifest.json");
    std::vector<const CorpusEntry*> healthy;
    for (const auto& e : manifest.entries) {
        if (e.role == CorpusRole::Healthy) {
            healthy.push_back(&e);
        }
    }
    if (healthy.empty()) {
        throw DataError("corpus has no healthy files to train on");
    }
    std::size_t n_train = options.training_files;
    if (n_train == 0) {
        n_train = std::max<std::size_t>(1, healthy.size() / 2);
    }
    n_train = std::min(n_train, healthy.size());

    auto load = [&](const CorpusEntry& e) {
        return read_csv(corpus_dir / e.file, e.spec.channel_name, CsvReadOptions{e.spec.sample_rate_hz});
    };
    std::vector<ChannelSeries> train_series;
    for (std::size_t k = 0; k < n_train; ++k) {
        train_series.push_back(load(*healthy[k]));
    }
    TrainedPipeline trained = train_model(train_series, options.train);
    auto model = std::make_shared<const StackedModel>(trained.file.model);

    DetectorConfig det = options.detector;
    det.window_size = model->spec.window_size;

    SimulationReport report;
    report.training_files = n_train;
    report.thresholds = *trained.file.thresholds;
    std::vector<double> lead_fractions;
    for (const auto& e : manifest.entries) {
        if (e.role == CorpusRole::Healthy &&
            std::find(healthy.begin(), healthy.begin() + static_cast<std::ptrdiff_t>(n_train), &e) !=
                healthy.begin() + static_cast<std::ptrdiff_t>(n_train)) {
            continue;
        }
        const ChannelSeries series = load(e);
        det.sample_rate_hz = series.sample_rate_hz;
        const StreamRun run = run_stream(series, model, report.thresholds, det);

        StreamReport s;
        s.file = e.file;
        s.role = e.role;
        s.windows = run.windows.size();
        for (const auto& w : run.windows) {
            s.amber_windows += w.band == TrafficLight::Amber;
            s.red_windows += w.band == TrafficLight::Red;
            s.resting_windows += w.band == TrafficLight::Resting;
        }
        const auto bw = bandwidth_report(run.stream_length, run.segments);
        s.segments = bw.segment_count;
        s.transmitted_fraction = bw.transmitted_fraction;
        s.red_alarm_s = first_alarm_time(run, det.window_size, series.sample_rate_hz, AlarmKind::RedRun);
        if (e.spec.fault) {
            s.onset_s = e.spec.fault->onset_s;
            s.failure_s = e.spec.fault->failure_s;
            double lead = 0.0;
            if (s.red_alarm_s) {
                s.lead_time_s = *s.failure_s - *s.red_alarm_s;
                lead = std::max(0.0, *s.lead_time_s);
                if (*s.lead_time_s > 0.0) {
                    ++report.faults_detected_before_failure;
                }
            }
            lead_fractions.push_back(lead / (*s.failure_s - *s.onset_s));
        } else {
            report.healthy_segments += s.segments;
        }
        report.streams.push_back(std::move(s));
    }
    if (!lead_fractions.empty()) {
        std::sort(lead_fractions.begin(), lead_fractions.end());
        const std::size_t n = lead_fractions.size();
        report.median_lead_fraction =
            n % 2 == 1 ? lead_fractions[n / 2] : 0.5 * (lead_fractions[n / 2 - 1] + lead_fractions[n / 2]);
    }
    return report;
}

std::string simulation_report_json(const SimulationReport& report) {
    using Json = nlohmann::ordered_json;
    auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
    Json j;
    j["training_files"] = report.training_files;
    j["thresholds"] = Json{{"green", report.thresholds.green},
                           {"red", report.thresholds.red},
                           {"percentile", report.thresholds.percentile}};
    j["healthy_segments"] = report.healthy_segments;
    j["faults_detected_before_failure"] = report.faults_detected_before_failure;
    j["median_lead_fraction"] = opt(report.median_lead_fraction);
    Json streams = Json::array();
    for (const auto& s : report.streams) {
        streams.push_back(Json{{"file", s.file},
                               {"role", s.role == CorpusRole::Healthy ? "healthy" : "fault"},
                               {"windows", s.windows},
                               {"amber_windows", s.amber_windows},
                               {"red_windows", s.red_windows},
                               {"resting_windows", s.resting_windows},
                               {"segments", s.segments},
                               {"transmitted_fraction", s.transmitted_fraction},
                               {"red_alarm_s", opt(s.red_alarm_s)},
                               {"onset_s", opt(s.onset_s)},
                               {"failure_s", opt(s.failure_s)},
                               {"lead_time_s", opt(s.lead_time_s)}});
    }
    j["streams"] = std::move(streams);
    return j.dump(2) + "\n";
}

} // namespace saedge
