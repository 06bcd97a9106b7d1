#include "saedge/cli.hpp"

#include "saedge/errors.hpp"
#include "saedge/pipeline.hpp"
#include "saedge/synthgen.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <memory>

namespace saedge {
namespace {

using Json = nlohmann::ordered_json;

std::string one_line(std::string s) {
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

struct TrainArgs {
    std::vector<std::string> inputs;
    std::string channel;
    std::size_t window = 500;
    std::size_t epochs = 200;
    double lr = 0.01;
    double momentum = 0.9;
    std::size_t batch = 32;
    std::uint64_t seed = 0;
    double percentile = kDefaultPercentile;
    double rate = kDefaultSampleRateHz;
};

struct DetectArgs {
    double t_pre = 2.0;
    double t_post = 2.0;
    std::size_t red_run = 3;
    std::size_t amber_run = 12;
};

void add_training_flags(CLI::App* cmd, TrainArgs& a) {
    cmd->add_option("--window", a.window, "Window size in samples")
        ->check(CLI::IsMember({std::size_t{250}, std::size_t{500}, std::size_t{1000}}));
    cmd->add_option("--epochs", a.epochs, "Epoch budget per stage")->check(CLI::NonNegativeNumber);
    cmd->add_option("--lr", a.lr, "Learning rate")->check(CLI::PositiveNumber);
    cmd->add_option("--momentum", a.momentum, "Momentum in [0, 1)")->check(CLI::Range(0.0, 0.999999));
    cmd->add_option("--batch", a.batch, "Mini-batch size")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", a.seed, "RNG seed");
    cmd->add_option("--percentile", a.percentile, "Green threshold percentile")->check(CLI::Range(0.0, 100.0));
}

void add_detect_flags(CLI::App* cmd, DetectArgs& a) {
    cmd->add_option("--t-pre-min", a.t_pre, "Minutes transmitted before an alarm run")->check(CLI::NonNegativeNumber);
    cmd->add_option("--t-post-min", a.t_post, "Minutes transmitted after the last anomaly")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--alarm-red-run", a.red_run, "Consecutive Red windows that raise an alarm");
    cmd->add_option("--alarm-amber-run", a.amber_run, "Consecutive Amber-or-worse windows that raise an alarm");
}

nn::TrainConfig train_config(const TrainArgs& a) {
    nn::TrainConfig c;
    c.learning_rate = a.lr;
    c.momentum = a.momentum;
    c.epochs = a.epochs;
    c.batch_size = a.batch;
    c.rng_seed = a.seed;
    return c;
}

DetectorConfig detector_config(const DetectArgs& a, std::size_t window, double rate) {
    DetectorConfig c;
    c.window_size = window;
    c.sample_rate_hz = rate;
    c.t_pre_min = a.t_pre;
    c.t_post_min = a.t_post;
    c.alarm = {a.red_run, a.amber_run};
    return c;
}

const ThresholdSet& require_thresholds(const ModelFile& file) {
    if (!file.thresholds) {
        throw DataError("model has no thresholds; run fit-thresholds first");
    }
    return *file.thresholds;
}

// Writes to `path`, or to `out` when path is empty or "-".
void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f || !(f << text)) {
        throw DataError("cannot write '" + path + "'");
    }
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stacked-autoencoder anomaly detection for rotary-machine field current", "saedge"};
    app.require_subcommand(1);

    // gen-data
    std::string gen_out;
    std::size_t gen_healthy = 20;
    std::size_t gen_faults = 10;
    double gen_minutes = 10.0;
    std::uint64_t gen_seed = 1;
    bool gen_rest = false;
    bool gen_extra = false;
    auto* gen = app.add_subcommand("gen-data", "Generate a synthetic corpus with manifest");
    gen->add_option("--out", gen_out, "Output directory")->required();
    gen->add_option("--healthy", gen_healthy, "Number of healthy streams")->check(CLI::PositiveNumber);
    gen->add_option("--faults", gen_faults, "Number of fault streams");
    gen->add_option("--duration-min", gen_minutes, "Stream length in minutes")->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_seed, "Base seed");
    gen->add_flag("--with-rest", gen_rest, "Insert a stoppage into every other healthy stream");
    gen->add_flag("--extra-channels", gen_extra, "Add correlated drive channels");

    // train
    TrainArgs train_args;
    std::string train_out;
    auto* train = app.add_subcommand("train", "Train a stacked autoencoder on healthy data");
    train->add_option("--input", train_args.inputs, "Healthy CSV file(s)")->required();
    train->add_option("--channel", train_args.channel, "Channel name (default: the field-current column)");
    train->add_option("--rate", train_args.rate, "Sample rate in Hz")->check(CLI::PositiveNumber);
    train->add_option("--out", train_out, "Model file to write")->required();
    add_training_flags(train, train_args);

    // fit-thresholds
    std::string fit_model;
    std::vector<std::string> fit_inputs;
    std::string fit_channel;
    std::string fit_out;
    double fit_percentile = kDefaultPercentile;
    double fit_rate = kDefaultSampleRateHz;
    auto* fit = app.add_subcommand("fit-thresholds", "Refit traffic-light thresholds on healthy data");
    fit->add_option("--model", fit_model, "Model file")->required();
    fit->add_option("--input", fit_inputs, "Healthy CSV file(s)")->required();
    fit->add_option("--channel", fit_channel, "Channel name");
    fit->add_option("--rate", fit_rate, "Sample rate in Hz")->check(CLI::PositiveNumber);
    fit->add_option("--percentile", fit_percentile, "Green threshold percentile")->check(CLI::Range(0.0, 100.0));
    fit->add_option("--out", fit_out, "Output model file (default: overwrite --model)");

    // detect
    std::string det_model;
    std::string det_input;
    std::string det_channel;
    std::string det_out;
    std::string det_stream;
    std::size_t det_window = 0;
    double det_rate = kDefaultSampleRateHz;
    DetectArgs det_args;
    auto* detect = app.add_subcommand("detect", "Stream a CSV through the edge detector");
    detect->add_option("--model", det_model, "Model file")->required();
    detect->add_option("--input", det_input, "CSV file")->required();
    detect->add_option("--channel", det_channel, "Channel name");
    detect->add_option("--rate", det_rate, "Sample rate in Hz")->check(CLI::PositiveNumber);
    detect->add_option("--window", det_window, "Expected window size (must match the model)");
    detect->add_option("--stream-id", det_stream, "Stream identifier (default: input file stem)");
    detect->add_option("--out", det_out, "JSONL output for window and segment records (default: stdout)");
    add_detect_flags(detect, det_args);

    // simulate
    std::string sim_corpus;
    std::string sim_out;
    std::size_t sim_train_files = 0;
    TrainArgs sim_args;
    DetectArgs sim_det;
    auto* simulate = app.add_subcommand("simulate", "Train, detect and report lead times over a synthetic corpus");
    simulate->add_option("--corpus", sim_corpus, "Corpus directory containing manifest.json")->required();
    simulate->add_option("--train-files", sim_train_files, "Healthy files used for training (default: half)");
    simulate->add_option("--out", sim_out, "Report file (default: stdout)");
    add_training_flags(simulate, sim_args);
    add_detect_flags(simulate, sim_det);

    // plot-data
    std::string plot_model;
    std::string plot_input;
    std::string plot_channel;
    std::string plot_out;
    double plot_rate = kDefaultSampleRateHz;
    auto* plot = app.add_subcommand("plot-data", "Export per-window errors and thresholds for plotting");
    plot->add_option("--model", plot_model, "Model file")->required();
    plot->add_option("--input", plot_input, "CSV file")->required();
    plot->add_option("--channel", plot_channel, "Channel name");
    plot->add_option("--rate", plot_rate, "Sample rate in Hz")->check(CLI::PositiveNumber);
    plot->add_option("--out", plot_out, "Output CSV")->required();

    // correlate
    std::string corr_input;
    std::vector<std::string> corr_channels;
    double corr_rate = kDefaultSampleRateHz;
    auto* correlate = app.add_subcommand("correlate", "Print the channel correlation matrix");
    correlate->add_option("--input", corr_input, "CSV file")->required();
    correlate->add_option("--channels", corr_channels, "Subset of channels")->delimiter(',');
    correlate->add_option("--rate", corr_rate, "Sample rate in Hz")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        out << app.help();
        err << "error: usage: " << one_line(e.what()) << '\n';
        return kExitUsage;
    }

    if (gen->parsed()) {
        std::vector<ScenarioSpec> healthy;
        std::vector<ScenarioSpec> faults;
        const double duration = gen_minutes * 60.0;
        for (std::size_t k = 0; k < gen_healthy; ++k) {
            ScenarioSpec s = healthy_scenario(gen_seed * 1000003ULL + k, duration);
            if (gen_rest && k % 2 == 1) {
                s.rest_intervals.push_back({0.35 * duration, 0.55 * duration});
            }
            healthy.push_back(std::move(s));
        }
        for (std::size_t k = 0; k < gen_faults; ++k) {
            faults.push_back(fault_scenario(gen_seed * 1000003ULL + 500000ULL + k, duration));
        }
        if (gen_extra) {
            for (auto* group : {&healthy, &faults}) {
                for (auto& s : *group) {
                    s.correlated_channels = {{"Armature Current", 4.0, 2.0, 0.3}, {"Motor Speed", -25.0, 900.0, 8.0}};
                }
            }
        }
        const auto manifest = generate_corpus(healthy, faults, gen_out);
        out << Json{{"files", manifest.entries.size()}, {"manifest", (std::filesystem::path(gen_out) / "manifest.json").string()}}.dump()
            << '\n';
        return kExitOk;
    }

    if (train->parsed()) {
        std::vector<ChannelSeries> series;
        for (const auto& path : train_args.inputs) {
            series.push_back(read_csv(path, train_args.channel, CsvReadOptions{train_args.rate}));
        }
        TrainOptions opts;
        opts.window_size = train_args.window;
        opts.config = train_config(train_args);
        opts.percentile = train_args.percentile;
        const TrainedPipeline trained = train_model(series, opts);
        save_model(trained.file, train_out);
        Json stages = Json::array();
        for (const auto& s : trained.stages) {
            stages.push_back(Json{{"stage", s.stage},
                                  {"shape", std::to_string(s.input_dim) + "-" + std::to_string(s.hidden_dim)},
                                  {"initial_loss", s.training.initial_loss},
                                  {"final_loss", s.training.epoch_losses.empty() ? s.training.initial_loss
                                                                                 : s.training.epoch_losses.back()},
                                  {"epochs", s.training.epoch_losses.size()}});
        }
        const auto& t = *trained.file.thresholds;
        out << Json{{"model", train_out},
                    {"training_windows", trained.file.metadata.training_windows},
                    {"features", trained.file.model.feature_count()},
                    {"green", t.green},
                    {"red", t.red},
                    {"stages", stages}}
                   .dump()
            << '\n';
        return kExitOk;
    }

    if (fit->parsed()) {
        ModelFile file = load_model(fit_model);
        std::vector<double> errors;
        for (const auto& path : fit_inputs) {
            const auto series = read_csv(path, fit_channel, CsvReadOptions{fit_rate});
            for (double e : window_errors(series, file.model)) {
                if (e != kRestingSentinel) {
                    errors.push_back(e);
                }
            }
        }
        file.thresholds = fit_thresholds(errors, fit_percentile);
        save_model(file, fit_out.empty() ? fit_model : fit_out);
        out << Json{{"windows", errors.size()}, {"green", file.thresholds->green}, {"red", file.thresholds->red}}.dump()
            << '\n';
        return kExitOk;
    }

    if (detect->parsed()) {
        const ModelFile file = load_model(det_model);
        const ThresholdSet& thresholds = require_thresholds(file);
        if (det_window != 0 && det_window != file.model.spec.window_size) {
            throw DataError("window size mismatch: --window " + std::to_string(det_window) + " but model uses " +
                            std::to_string(file.model.spec.window_size));
        }
        const auto series = read_csv(det_input, det_channel, CsvReadOptions{det_rate});
        const std::string stream_id =
            det_stream.empty() ? std::filesystem::path(det_input).stem().string() : det_stream;
        const auto config = detector_config(det_args, file.model.spec.window_size, series.sample_rate_hz);
        auto model = std::make_shared<const StackedModel>(file.model);

        Detector detector(model, thresholds, config, series.start_time);
        std::string records;
        std::vector<TransmissionSegment> segments;
        auto record_segment = [&](TransmissionSegment seg) {
            records += segment_record(stream_id, seg, series.sample_rate_hz, series.start_time) + '\n';
            seg.samples.clear();
            segments.push_back(std::move(seg));
        };
        for (double v : series.samples) {
            auto result = detector.push_sample(v);
            if (const auto& w = detector.last_window()) {
                records += window_record(stream_id, *w,
                                         series.start_time + static_cast<double>(w->origin) / series.sample_rate_hz) +
                           '\n';
            }
            if (result) {
                if (auto* seg = std::get_if<TransmissionSegment>(&*result)) {
                    record_segment(std::move(*seg));
                }
            }
        }
        if (auto tail = detector.finish()) {
            record_segment(std::move(*tail));
        }
        emit(det_out, records, out);
        if (!det_out.empty() && det_out != "-") {
            const auto bw = bandwidth_report(series.samples.size(), segments);
            out << Json{{"stream_id", stream_id},
                        {"segments", bw.segment_count},
                        {"transmitted_fraction", bw.transmitted_fraction}}
                       .dump()
                << '\n';
        }
        return kExitOk;
    }

    if (simulate->parsed()) {
        SimulationOptions opts;
        opts.train.window_size = sim_args.window;
        opts.train.config = train_config(sim_args);
        opts.train.percentile = sim_args.percentile;
        opts.detector = detector_config(sim_det, sim_args.window, kDefaultSampleRateHz);
        opts.training_files = sim_train_files;
        const auto report = simulate_corpus(sim_corpus, opts);
        emit(sim_out, simulation_report_json(report), out);
        return kExitOk;
    }

    if (plot->parsed()) {
        const ModelFile file = load_model(plot_model);
        const ThresholdSet& thresholds = require_thresholds(file);
        const auto series = read_csv(plot_input, plot_channel, CsvReadOptions{plot_rate});
        export_plot_data(window_errors(series, file.model), thresholds, plot_out);
        return kExitOk;
    }

    if (correlate->parsed()) {
        auto channels = read_csv_channels(corr_input, CsvReadOptions{corr_rate});
        if (!corr_channels.empty()) {
            std::vector<ChannelSeries> picked;
            for (const auto& name : corr_channels) {
                auto it = std::find_if(channels.begin(), channels.end(),
                                       [&](const ChannelSeries& c) { return c.name == name; });
                if (it == channels.end()) {
                    throw DataError("channel '" + name + "' not found in '" + corr_input + "'");
                }
                picked.push_back(*it);
            }
            channels = std::move(picked);
        }
        const auto m = correlation_matrix(channels);
        out << "channel";
        for (const auto& n : m.channel_names) {
            out << ',' << n;
        }
        out << '\n';
        for (Eigen::Index i = 0; i < m.values.rows(); ++i) {
            out << m.channel_names[static_cast<std::size_t>(i)];
            for (Eigen::Index j = 0; j < m.values.cols(); ++j) {
                out << ',' << format_double(m.values(i, j));
            }
            out << '\n';
        }
        return kExitOk;
    }
    throw UsageError("no subcommand given");
}

} // namespace

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
    try {
        return run(argc, argv, out, err);
    } catch (const UsageError& e) {
        err << "error: usage: " << one_line(e.what()) << '\n';
        return kExitUsage;
    } catch (const DataError& e) {
        err << "error: data: " << one_line(e.what()) << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        err << "error: internal: " << one_line(e.what()) << '\n';
        return kExitInternal;
    }
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<std::string> storage{"saedge"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage) {
        argv.push_back(s.data());
    }
    argv.push_back(nullptr);
    return cli_main(static_cast<int>(storage.size()), argv.data(), out, err);
}

} // namespace saedge
