#include "saedge/errors.hpp"
#include "saedge/io.hpp"
#include "saedge/pipeline.hpp"
#include "saedge/synthgen.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace saedge;

namespace {

ChannelSeries as_series(std::vector<double> samples, double rate, const std::string& name = "signal") {
    return ChannelSeries{name, rate, std::move(samples), 0.0};
}

py::dict window_dict(const WindowResult& w) {
    py::dict d;
    d["origin"] = w.origin;
    d["error"] = w.error;
    d["band"] = std::string(to_string(w.band));
    d["alarm"] = w.alarm == AlarmKind::None ? "none" : (w.alarm == AlarmKind::RedRun ? "red_run" : "amber_run");
    return d;
}

py::dict segment_dict(const TransmissionSegment& s) {
    py::dict d;
    d["start_index"] = s.start_index;
    d["end_index"] = s.end_index;
    d["samples"] = s.samples;
    py::list events;
    for (const auto& e : s.trigger_events) {
        py::dict ev;
        ev["window_origin"] = e.window_origin;
        ev["error"] = e.error;
        ev["band"] = std::string(to_string(e.band));
        ev["timestamp"] = e.timestamp;
        events.append(ev);
    }
    d["trigger_events"] = events;
    return d;
}

// Python-facing wrapper around a streaming Detector that keeps its model alive.
class PyDetector {
public:
    PyDetector(const ModelFile& file, double t_pre_min, double t_post_min, std::size_t red_run, std::size_t amber_run,
               double sample_rate_hz) {
        if (!file.thresholds) {
            throw DataError("model has no thresholds");
        }
        DetectorConfig cfg;
        cfg.window_size = file.model.spec.window_size;
        cfg.sample_rate_hz = sample_rate_hz;
        cfg.t_pre_min = t_pre_min;
        cfg.t_post_min = t_post_min;
        cfg.alarm = {red_run, amber_run};
        detector_.emplace(std::make_shared<const StackedModel>(file.model), *file.thresholds, cfg);
    }

    // Returns (window record or None, segment or None).
    py::tuple push(double sample) {
        auto out = detector_->push_sample(sample);
        py::object window = py::none();
        py::object segment = py::none();
        if (const auto& w = detector_->last_window()) {
            window = window_dict(*w);
        }
        if (out) {
            if (auto* s = std::get_if<TransmissionSegment>(&*out)) {
                segment = segment_dict(*s);
            }
        }
        return py::make_tuple(window, segment);
    }

    py::object finish() {
        auto seg = detector_->finish();
        return seg ? py::object(segment_dict(*seg)) : py::object(py::none());
    }

    std::size_t samples_seen() const { return detector_->samples_seen(); }
    bool transmitting() const { return detector_->mode() == DetectorMode::Transmitting; }

private:
    std::optional<Detector> detector_;
};

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Stacked-autoencoder anomaly detection for streaming field-current data.";

    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);

    m.attr("RESTING_SENTINEL") = kRestingSentinel;
    m.attr("DEFAULT_PERCENTILE") = kDefaultPercentile;

    // signal
    m.def(
        "segment",
        [](std::vector<double> samples, std::size_t window, std::optional<std::size_t> stride) {
            const auto series = as_series(std::move(samples), kDefaultSampleRateHz);
            const auto windows = stride ? segment(series, window, *stride) : segment(series, window);
            py::list out;
            for (const auto& w : windows) out.append(py::make_tuple(w.origin_index, w.values));
            return out;
        },
        py::arg("samples"), py::arg("window"), py::arg("stride") = py::none(),
        "List of (origin_index, values) tiles; trailing samples are dropped.");
    m.def(
        "detect_resting",
        [](std::vector<double> values, double rest_level, double tolerance) {
            return detect_resting(values, RestParams{rest_level, tolerance});
        },
        py::arg("values"), py::arg("rest_level"), py::arg("tolerance"));
    m.def(
        "normalize",
        [](std::vector<double> values, double lo, double hi) { return normalize(values, NormStats{lo, hi}); },
        py::arg("values"), py::arg("min"), py::arg("max"));
    m.def(
        "correlation_matrix",
        [](const std::vector<std::pair<std::string, std::vector<double>>>& channels) {
            std::vector<ChannelSeries> series;
            for (const auto& [name, samples] : channels) series.push_back(as_series(samples, kDefaultSampleRateHz, name));
            const auto cm = correlation_matrix(series);
            return py::make_tuple(cm.channel_names, cm.values);
        },
        py::arg("channels"), "Takes [(name, samples), ...]; returns (names, matrix).");

    // neural
    m.def("mse", [](std::vector<double> p, std::vector<double> t) { return nn::mse(p, t); }, py::arg("predicted"),
          py::arg("target"));

    py::class_<StackSpec>(m, "StackSpec")
        .def_readonly("window_size", &StackSpec::window_size)
        .def_readonly("encoder_dims", &StackSpec::encoder_dims)
        .def_readonly("final_decoder_hidden", &StackSpec::final_decoder_hidden)
        .def("__repr__", [](const StackSpec& s) {
            std::string dims;
            for (auto d : s.encoder_dims) dims += (dims.empty() ? "" : "-") + std::to_string(d);
            return "StackSpec(" + std::to_string(s.window_size) + ": " + dims + ", hidden " +
                   std::to_string(s.final_decoder_hidden) + ")";
        });
    m.def("default_spec", &default_spec, py::arg("window_size"));

    // threshold
    py::class_<ThresholdSet>(m, "ThresholdSet")
        .def(py::init([](double green, double red, double percentile) {
                 return ThresholdSet{green, red, percentile, kRestingSentinel};
             }),
             py::arg("green"), py::arg("red"), py::arg("percentile") = kDefaultPercentile)
        .def_readonly("green", &ThresholdSet::green)
        .def_readonly("red", &ThresholdSet::red)
        .def_readonly("percentile", &ThresholdSet::percentile)
        .def_readonly("resting_sentinel", &ThresholdSet::resting_sentinel);
    m.def(
        "fit_thresholds", [](std::vector<double> errors, double p) { return fit_thresholds(errors, p); },
        py::arg("errors"), py::arg("percentile") = kDefaultPercentile);
    m.def(
        "classify", [](double e, const ThresholdSet& t) { return std::string(to_string(classify(e, t))); },
        py::arg("error"), py::arg("thresholds"));

    // model
    py::class_<ModelFile>(m, "Model")
        .def_property_readonly("spec", [](const ModelFile& f) { return f.model.spec; })
        .def_property_readonly("thresholds", [](const ModelFile& f) { return f.thresholds; })
        .def_property_readonly("feature_count", [](const ModelFile& f) { return f.model.feature_count(); })
        .def_property_readonly("training_windows", [](const ModelFile& f) { return f.metadata.training_windows; })
        .def(
            "reconstruction_error",
            [](const ModelFile& f, std::vector<double> raw_window) {
                return reconstruction_error(f.model, normalize(raw_window, f.model.norm_stats));
            },
            py::arg("window"), "Error of one raw (unnormalized) window.")
        .def(
            "window_errors",
            [](const ModelFile& f, std::vector<double> samples, double rate) {
                return window_errors(as_series(std::move(samples), rate), f.model);
            },
            py::arg("samples"), py::arg("sample_rate_hz") = kDefaultSampleRateHz)
        .def(
            "with_thresholds",
            [](const ModelFile& f, const ThresholdSet& t) {
                ModelFile copy = f;
                copy.thresholds = t;
                return copy;
            },
            py::arg("thresholds"))
        .def("save", [](const ModelFile& f, const std::filesystem::path& p) { save_model(f, p); }, py::arg("path"))
        .def("to_json", &serialize_model)
        .def_static("load", &load_model, py::arg("path"))
        .def_static("from_json", [](const std::string& text) { return parse_model(text); }, py::arg("text"));

    m.def(
        "train_model",
        [](const std::vector<std::vector<double>>& healthy, std::size_t window_size, std::size_t epochs,
           double learning_rate, double momentum, std::size_t batch_size, std::uint64_t seed, double percentile,
           double sample_rate_hz) {
            std::vector<ChannelSeries> series;
            for (const auto& s : healthy) series.push_back(as_series(s, sample_rate_hz));
            TrainOptions o;
            o.window_size = window_size;
            o.config.epochs = epochs;
            o.config.learning_rate = learning_rate;
            o.config.momentum = momentum;
            o.config.batch_size = batch_size;
            o.config.rng_seed = seed;
            o.percentile = percentile;
            TrainedPipeline t;
            {
                py::gil_scoped_release release;
                t = train_model(series, o);
            }
            py::list stages;
            for (const auto& s : t.stages) {
                py::dict d;
                d["input_dim"] = s.input_dim;
                d["hidden_dim"] = s.hidden_dim;
                d["initial_loss"] = s.training.initial_loss;
                d["epoch_losses"] = s.training.epoch_losses;
                stages.append(d);
            }
            return py::make_tuple(t.file, stages, t.healthy_errors);
        },
        py::arg("healthy"), py::arg("window_size") = 500, py::arg("epochs") = 200, py::arg("learning_rate") = 0.01,
        py::arg("momentum") = 0.9, py::arg("batch_size") = 32, py::arg("seed") = 0,
        py::arg("percentile") = kDefaultPercentile, py::arg("sample_rate_hz") = kDefaultSampleRateHz,
        "Trains on healthy sample lists; returns (model, stage reports, healthy window errors).");

    // synthetic data
    py::class_<ScenarioSpec>(m, "ScenarioSpec")
        .def_readwrite("duration_s", &ScenarioSpec::duration_s)
        .def_readwrite("baseline", &ScenarioSpec::baseline)
        .def_readwrite("noise_sigma", &ScenarioSpec::noise_sigma)
        .def_readwrite("rng_seed", &ScenarioSpec::rng_seed)
        .def_property(
            "rest_intervals",
            [](const ScenarioSpec& s) {
                std::vector<std::pair<double, double>> out;
                for (const auto& r : s.rest_intervals) out.emplace_back(r.start_s, r.end_s);
                return out;
            },
            [](ScenarioSpec& s, const std::vector<std::pair<double, double>>& v) {
                s.rest_intervals.clear();
                for (const auto& [a, b] : v) s.rest_intervals.push_back(Interval{a, b});
            })
        .def_property_readonly("fault_window",
                               [](const ScenarioSpec& s) -> std::optional<std::pair<double, double>> {
                                   if (!s.fault) return std::nullopt;
                                   return std::make_pair(s.fault->onset_s, s.fault->failure_s);
                               })
        .def("to_json", &scenario_to_json);
    m.def("healthy_scenario", &healthy_scenario, py::arg("seed"), py::arg("duration_s") = 600.0);
    m.def("fault_scenario", &fault_scenario, py::arg("seed"), py::arg("duration_s") = 600.0);
    m.def(
        "generate", [](const ScenarioSpec& s) { return generate(s).samples; }, py::arg("spec"));

    // streaming
    py::class_<PyDetector>(m, "Detector")
        .def(py::init<const ModelFile&, double, double, std::size_t, std::size_t, double>(), py::arg("model"),
             py::arg("t_pre_min") = 2.0, py::arg("t_post_min") = 2.0, py::arg("red_run") = 3,
             py::arg("amber_run") = 12, py::arg("sample_rate_hz") = kDefaultSampleRateHz)
        .def("push", &PyDetector::push, py::arg("sample"),
             "Feeds one sample; returns (window record or None, closed segment or None).")
        .def("finish", &PyDetector::finish)
        .def_property_readonly("samples_seen", &PyDetector::samples_seen)
        .def_property_readonly("transmitting", &PyDetector::transmitting);

    m.def(
        "bandwidth_fraction",
        [](std::size_t stream_length, const std::vector<std::pair<std::size_t, std::size_t>>& spans) {
            std::vector<TransmissionSegment> segs;
            for (const auto& [a, b] : spans) {
                TransmissionSegment s;
                s.start_index = a;
                s.end_index = b;
                segs.push_back(std::move(s));
            }
            return bandwidth_report(stream_length, segs).transmitted_fraction;
        },
        py::arg("stream_length"), py::arg("segments"));
}
