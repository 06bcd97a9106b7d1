#include "saedge/io.hpp"

#include "saedge/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace saedge {
namespace {

using Json = nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = line.find(',', pos);
        cells.push_back(trim(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
        if (comma == std::string_view::npos) {
            break;
        }
        pos = comma + 1;
    }
    return cells;
}

std::optional<double> parse_number(std::string_view text) {
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        return std::nullopt;
    }
    return v;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DataError("cannot write '" + path.string() + "'");
    }
    out << content;
    if (!out) {
        throw DataError("write failed for '" + path.string() + "'");
    }
}

// Days since 1970-01-01 for a proleptic Gregorian date.
long long days_from_civil(long long y, unsigned m, unsigned d) {
    y -= m <= 2;
    const long long era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long long>(doe) - 719468;
}

struct CsvTable {
    std::vector<std::string> names;         // channel names (timestamp column excluded)
    std::vector<std::vector<double>> columns;
    std::optional<double> start_time;
};

CsvTable parse_csv(const std::filesystem::path& path, const CsvReadOptions& options) {
    const std::string text = read_file(path);
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError("'" + path.string() + "' is empty");
    }
    const auto header = split_commas(line);
    if (header.size() < 2) {
        throw DataError("'" + path.string() + "' header needs a timestamp column and at least one channel");
    }
    CsvTable table;
    for (std::size_t c = 1; c < header.size(); ++c) {
        table.names.emplace_back(header[c]);
    }
    table.columns.resize(table.names.size());

    std::optional<bool> has_time;
    std::optional<double> prev_time;
    const double period = 1.0 / options.expected_rate_hz;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto cells = split_commas(line);
        if (cells.size() != header.size()) {
            throw DataError("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                            " cells, found " + std::to_string(cells.size()));
        }
        const bool row_has_time = !cells[0].empty();
        if (!has_time) {
            has_time = row_has_time;
        } else if (*has_time != row_has_time) {
            throw DataError("line " + std::to_string(line_no) + ": timestamps must be present on every row or none");
        }
        if (row_has_time) {
            const auto t = parse_timestamp(cells[0]);
            if (!t) {
                throw DataError("line " + std::to_string(line_no) + ": unparseable timestamp '" +
                                std::string(cells[0]) + "'");
            }
            if (prev_time) {
                const double dt = *t - *prev_time;
                if (std::abs(dt - period) > options.jitter * period) {
                    throw DataError("line " + std::to_string(line_no) + ": non-uniform sampling (step " +
                                    format_double(dt) + " s, expected " + format_double(period) + " s)");
                }
            } else {
                table.start_time = *t;
            }
            prev_time = *t;
        }
        for (std::size_t c = 1; c < cells.size(); ++c) {
            const auto v = parse_number(cells[c]);
            if (!v || !std::isfinite(*v)) {
                throw DataError("line " + std::to_string(line_no) + ": non-numeric cell '" + std::string(cells[c]) +
                                "' in column '" + table.names[c - 1] + "'");
            }
            table.columns[c - 1].push_back(*v);
        }
    }
    if (table.columns.front().empty()) {
        throw DataError("insufficient samples: '" + path.string() + "' has no data rows");
    }
    return table;
}

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return c == '_' ? ' ' : static_cast<char>(std::tolower(c));
    });
    return out;
}

Json layer_to_json(const nn::LayerParams& layer) {
    Json j;
    j["in_dim"] = layer.in_dim();
    j["out_dim"] = layer.out_dim();
    j["activation"] = layer.activation == nn::Activation::Tanh ? "tanh" : "identity";
    std::vector<double> w;
    w.reserve(static_cast<std::size_t>(layer.weights.size()));
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
        for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
            w.push_back(layer.weights(r, c));
        }
    }
    j["weights"] = std::move(w);
    j["biases"] = std::vector<double>(layer.biases.data(), layer.biases.data() + layer.biases.size());
    return j;
}

nn::LayerParams layer_from_json(const Json& j) {
    const auto in = j.at("in_dim").get<Eigen::Index>();
    const auto out = j.at("out_dim").get<Eigen::Index>();
    const auto act = j.at("activation").get<std::string>();
    const auto w = j.at("weights").get<std::vector<double>>();
    const auto b = j.at("biases").get<std::vector<double>>();
    if (in < 1 || out < 1 || static_cast<Eigen::Index>(w.size()) != in * out ||
        static_cast<Eigen::Index>(b.size()) != out) {
        throw DataError("layer tensor sizes do not match its declared dimensions");
    }
    if (act != "tanh" && act != "identity") {
        throw DataError("unknown activation '" + act + "'");
    }
    nn::LayerParams layer{Eigen::MatrixXd(out, in), Eigen::VectorXd(out),
                          act == "tanh" ? nn::Activation::Tanh : nn::Activation::Identity};
    std::size_t k = 0;
    for (Eigen::Index r = 0; r < out; ++r) {
        for (Eigen::Index c = 0; c < in; ++c) {
            layer.weights(r, c) = w[k++];
        }
    }
    for (Eigen::Index r = 0; r < out; ++r) {
        layer.biases(r) = b[static_cast<std::size_t>(r)];
    }
    return layer;
}

Json network_to_json(const nn::Network& net) {
    Json arr = Json::array();
    for (const auto& layer : net) {
        arr.push_back(layer_to_json(layer));
    }
    return arr;
}

nn::Network network_from_json(const Json& j) {
    nn::Network net;
    for (const auto& layer : j) {
        net.push_back(layer_from_json(layer));
    }
    return net;
}

Json thresholds_to_json(const ThresholdSet& t) {
    return Json{{"green", t.green}, {"red", t.red}, {"percentile", t.percentile}, {"resting_sentinel", t.resting_sentinel}};
}

Json scenario_json(const ScenarioSpec& s) {
    Json j;
    j["channel_name"] = s.channel_name;
    j["duration_s"] = s.duration_s;
    j["sample_rate_hz"] = s.sample_rate_hz;
    j["start_time"] = s.start_time;
    j["baseline"] = s.baseline;
    Json periodic = Json::array();
    for (const auto& c : s.periodic_components) {
        periodic.push_back(Json{{"amplitude", c.amplitude}, {"frequency_hz", c.frequency_hz}, {"phase", c.phase}});
    }
    j["periodic_components"] = std::move(periodic);
    j["noise_sigma"] = s.noise_sigma;
    j["rest_level"] = s.rest_level;
    Json rests = Json::array();
    for (const auto& r : s.rest_intervals) {
        rests.push_back(Json{{"start_s", r.start_s}, {"end_s", r.end_s}});
    }
    j["rest_intervals"] = std::move(rests);
    if (s.fault) {
        const auto& f = *s.fault;
        j["fault"] = Json{{"onset_s", f.onset_s},
                          {"failure_s", f.failure_s},
                          {"drift_rate", f.drift_rate},
                          {"oscillation_gain", f.oscillation_gain},
                          {"oscillation_hz", f.oscillation_hz},
                          {"spike_rate_hz", f.spike_rate_hz},
                          {"spike_amplitude", f.spike_amplitude}};
    } else {
        j["fault"] = nullptr;
    }
    Json extras = Json::array();
    for (const auto& c : s.correlated_channels) {
        extras.push_back(Json{{"name", c.name}, {"gain", c.gain}, {"offset", c.offset}, {"noise_sigma", c.noise_sigma}});
    }
    j["correlated_channels"] = std::move(extras);
    j["rng_seed"] = s.rng_seed;
    return j;
}

ScenarioSpec scenario_from(const Json& j) {
    ScenarioSpec s;
    s.channel_name = j.value("channel_name", s.channel_name);
    s.duration_s = j.at("duration_s").get<double>();
    s.sample_rate_hz = j.value("sample_rate_hz", s.sample_rate_hz);
    s.start_time = j.value("start_time", s.start_time);
    s.baseline = j.value("baseline", s.baseline);
    for (const auto& c : j.value("periodic_components", Json::array())) {
        s.periodic_components.push_back(
            {c.at("amplitude").get<double>(), c.at("frequency_hz").get<double>(), c.value("phase", 0.0)});
    }
    s.noise_sigma = j.value("noise_sigma", 0.0);
    s.rest_level = j.value("rest_level", 0.0);
    for (const auto& r : j.value("rest_intervals", Json::array())) {
        s.rest_intervals.push_back({r.at("start_s").get<double>(), r.at("end_s").get<double>()});
    }
    if (j.contains("fault") && !j["fault"].is_null()) {
        const auto& f = j["fault"];
        FaultSpec fs;
        fs.onset_s = f.at("onset_s").get<double>();
        fs.failure_s = f.at("failure_s").get<double>();
        fs.drift_rate = f.value("drift_rate", 0.0);
        fs.oscillation_gain = f.value("oscillation_gain", 0.0);
        fs.oscillation_hz = f.value("oscillation_hz", fs.oscillation_hz);
        fs.spike_rate_hz = f.value("spike_rate_hz", 0.0);
        fs.spike_amplitude = f.value("spike_amplitude", 0.0);
        s.fault = fs;
    }
    for (const auto& c : j.value("correlated_channels", Json::array())) {
        s.correlated_channels.push_back({c.at("name").get<std::string>(), c.value("gain", 1.0), c.value("offset", 0.0),
                                         c.value("noise_sigma", 0.0)});
    }
    s.rng_seed = j.value("rng_seed", std::uint64_t{0});
    s.validate();
    return s;
}

} // namespace

std::optional<double> parse_timestamp(std::string_view text) {
    text = trim(text);
    if (auto v = parse_number(text)) {
        return v;
    }
    int y = 0, mo = 0, d = 0, h = 0, mi = 0;
    char sep = 0;
    int consumed = 0;
    const std::string s(text);
    if (std::sscanf(s.c_str(), "%4d-%2d-%2d%c%2d:%2d:%n", &y, &mo, &d, &sep, &h, &mi, &consumed) != 6 ||
        (sep != 'T' && sep != ' ') || consumed == 0) {
        return std::nullopt;
    }
    std::string_view rest = std::string_view(s).substr(static_cast<std::size_t>(consumed));
    std::size_t secs_len = 0;
    while (secs_len < rest.size() && (std::isdigit(static_cast<unsigned char>(rest[secs_len])) || rest[secs_len] == '.')) {
        ++secs_len;
    }
    const auto secs = parse_number(rest.substr(0, secs_len));
    if (!secs || mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || *secs >= 61.0) {
        return std::nullopt;
    }
    rest.remove_prefix(secs_len);
    double offset = 0.0;
    if (rest == "Z" || rest.empty()) {
        offset = 0.0;
    } else if ((rest.front() == '+' || rest.front() == '-') && rest.size() == 6 && rest[3] == ':') {
        const int oh = std::stoi(std::string(rest.substr(1, 2)));
        const int om = std::stoi(std::string(rest.substr(4, 2)));
        offset = (rest.front() == '+' ? 1.0 : -1.0) * (oh * 3600.0 + om * 60.0);
    } else {
        return std::nullopt;
    }
    const long long days = days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d));
    return static_cast<double>(days * 86400 + h * 3600 + mi * 60) + *secs - offset;
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

std::optional<std::string> default_channel(std::span<const std::string> names) {
    for (const auto& n : names) {
        if (lowercase(n).find("field current") != std::string::npos) {
            return n;
        }
    }
    return std::nullopt;
}

ChannelSeries read_csv(const std::filesystem::path& path, std::string_view channel, const CsvReadOptions& options) {
    CsvTable table = parse_csv(path, options);
    std::string wanted(channel);
    if (wanted.empty()) {
        auto found = default_channel(table.names);
        if (!found) {
            std::string all;
            for (const auto& n : table.names) {
                all += (all.empty() ? "" : ", ") + n;
            }
            throw DataError("no field-current channel in '" + path.string() + "'; available: " + all);
        }
        wanted = *found;
    }
    for (std::size_t c = 0; c < table.names.size(); ++c) {
        if (table.names[c] == wanted) {
            return ChannelSeries{wanted, options.expected_rate_hz, std::move(table.columns[c]),
                                 table.start_time.value_or(0.0)};
        }
    }
    std::string all;
    for (const auto& n : table.names) {
        all += (all.empty() ? "" : ", ") + n;
    }
    throw DataError("channel '" + wanted + "' not found in '" + path.string() + "'; available: " + all);
}

std::vector<ChannelSeries> read_csv_channels(const std::filesystem::path& path, const CsvReadOptions& options) {
    CsvTable table = parse_csv(path, options);
    std::vector<ChannelSeries> out;
    for (std::size_t c = 0; c < table.names.size(); ++c) {
        out.push_back(ChannelSeries{table.names[c], options.expected_rate_hz, std::move(table.columns[c]),
                                    table.start_time.value_or(0.0)});
    }
    return out;
}

void write_csv(const std::filesystem::path& path, std::span<const ChannelSeries> channels) {
    if (channels.empty()) {
        throw DataError("nothing to write");
    }
    const auto& first = channels.front();
    std::string out = "timestamp";
    for (const auto& ch : channels) {
        if (ch.samples.size() != first.samples.size()) {
            throw DataError("channels written to one CSV must have equal lengths");
        }
        out += ',';
        out += ch.name;
    }
    out += '\n';
    char stamp[64];
    for (std::size_t i = 0; i < first.samples.size(); ++i) {
        std::snprintf(stamp, sizeof stamp, "%.6f", first.start_time + static_cast<double>(i) / first.sample_rate_hz);
        out += stamp;
        for (const auto& ch : channels) {
            out += ',';
            out += format_double(ch.samples[i]);
        }
        out += '\n';
    }
    write_file(path, out);
}

std::string fingerprint(std::span<const double> samples) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (double v : samples) {
        unsigned char bytes[sizeof(double)];
        std::memcpy(bytes, &v, sizeof v);
        for (unsigned char b : bytes) {
            h ^= b;
            h *= 0x100000001b3ULL;
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string serialize_model(const ModelFile& file) {
    const auto& m = file.model;
    Json j;
    j["format"] = "saedge-model";
    j["format_version"] = kModelFormatVersion;
    j["spec"] = Json{{"window_size", m.spec.window_size},
                     {"encoder_dims", m.spec.encoder_dims},
                     {"final_decoder_hidden", m.spec.final_decoder_hidden}};
    j["norm_stats"] = Json{{"min", m.norm_stats.min}, {"max", m.norm_stats.max}};
    j["rest"] = Json{{"rest_level", m.rest.rest_level}, {"tolerance", m.rest.tolerance}};
    j["thresholds"] = file.thresholds ? thresholds_to_json(*file.thresholds) : Json(nullptr);
    const auto& c = file.metadata.config;
    j["training"] = Json{{"seed", c.rng_seed},
                         {"learning_rate", c.learning_rate},
                         {"momentum", c.momentum},
                         {"epochs", c.epochs},
                         {"batch_size", c.batch_size},
                         {"early_stop_delta", c.early_stop_delta},
                         {"early_stop_patience", c.early_stop_patience},
                         {"data_fingerprint", file.metadata.data_fingerprint},
                         {"training_windows", file.metadata.training_windows}};
    j["encoders"] = network_to_json(m.encoders);
    j["final_decoder"] = network_to_json(m.final_decoder);
    return j.dump() + "\n";
}

ModelFile parse_model(std::string_view text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::exception& e) {
        throw DataError(std::string("model file parse error: ") + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != "saedge-model") {
            throw DataError("not a saedge model file");
        }
        const int version = j.at("format_version").get<int>();
        if (version != kModelFormatVersion) {
            throw DataError("unsupported model format version " + std::to_string(version) + " (this build reads " +
                            std::to_string(kModelFormatVersion) + ")");
        }
        ModelFile file;
        auto& m = file.model;
        const auto& spec = j.at("spec");
        m.spec.window_size = spec.at("window_size").get<std::size_t>();
        m.spec.encoder_dims = spec.at("encoder_dims").get<std::vector<std::size_t>>();
        m.spec.final_decoder_hidden = spec.at("final_decoder_hidden").get<std::size_t>();
        m.norm_stats = {j.at("norm_stats").at("min").get<double>(), j.at("norm_stats").at("max").get<double>()};
        m.rest = {j.at("rest").at("rest_level").get<double>(), j.at("rest").at("tolerance").get<double>()};
        m.encoders = network_from_json(j.at("encoders"));
        m.final_decoder = network_from_json(j.at("final_decoder"));
        m.validate();
        if (!j.at("thresholds").is_null()) {
            const auto& t = j["thresholds"];
            file.thresholds = ThresholdSet{t.at("green").get<double>(), t.at("red").get<double>(),
                                           t.at("percentile").get<double>(), t.at("resting_sentinel").get<double>()};
        }
        const auto& tr = j.at("training");
        auto& c = file.metadata.config;
        c.rng_seed = tr.at("seed").get<std::uint64_t>();
        c.learning_rate = tr.at("learning_rate").get<double>();
        c.momentum = tr.at("momentum").get<double>();
        c.epochs = tr.at("epochs").get<std::size_t>();
        c.batch_size = tr.at("batch_size").get<std::size_t>();
        c.early_stop_delta = tr.at("early_stop_delta").get<double>();
        c.early_stop_patience = tr.at("early_stop_patience").get<std::size_t>();
        file.metadata.data_fingerprint = tr.at("data_fingerprint").get<std::string>();
        file.metadata.training_windows = tr.at("training_windows").get<std::size_t>();
        return file;
    } catch (const Json::exception& e) {
        throw DataError(std::string("model file is missing or has malformed fields: ") + e.what());
    }
}

void save_model(const ModelFile& file, const std::filesystem::path& path) {
    write_file(path, serialize_model(file));
}

ModelFile load_model(const std::filesystem::path& path) {
    return parse_model(read_file(path));
}

std::string window_record(std::string_view stream_id, const WindowResult& window, double timestamp) {
    Json j;
    j["kind"] = "window";
    j["stream_id"] = stream_id;
    j["window_origin"] = window.origin;
    j["error"] = window.error;
    j["band"] = to_string(window.band);
    j["alarm"] = window.alarm == AlarmKind::None ? "none" : (window.alarm == AlarmKind::RedRun ? "red_run" : "amber_run");
    j["timestamp"] = timestamp;
    return j.dump();
}

std::string segment_record(std::string_view stream_id, const TransmissionSegment& segment, double sample_rate_hz,
                           double start_time) {
    Json j;
    j["kind"] = "segment";
    j["stream_id"] = stream_id;
    j["start_index"] = segment.start_index;
    j["end_index"] = segment.end_index;
    j["start_time"] = start_time + static_cast<double>(segment.start_index) / sample_rate_hz;
    j["end_time"] = start_time + static_cast<double>(segment.end_index) / sample_rate_hz;
    Json triggers = Json::array();
    for (const auto& ev : segment.trigger_events) {
        triggers.push_back(Json{{"window_origin", ev.window_origin}, {"error", ev.error}, {"band", to_string(ev.band)}});
    }
    j["trigger_events"] = std::move(triggers);
    j["samples"] = segment.samples;
    return j.dump();
}

void export_plot_data(std::span<const double> errors, const ThresholdSet& thresholds,
                      const std::filesystem::path& path) {
    std::string out = "window_index,error,band,green_threshold,red_threshold\n";
    const std::string green = format_double(thresholds.green);
    const std::string red = format_double(thresholds.red);
    for (std::size_t i = 0; i < errors.size(); ++i) {
        out += std::to_string(i) + ',' + format_double(errors[i]) + ',' +
               std::string(to_string(classify(errors[i], thresholds))) + ',' + green + ',' + red + '\n';
    }
    write_file(path, out);
}

std::string scenario_to_json(const ScenarioSpec& spec) {
    return scenario_json(spec).dump(2);
}

ScenarioSpec scenario_from_json(std::string_view text) {
    try {
        return scenario_from(Json::parse(text));
    } catch (const Json::exception& e) {
        throw DataError(std::string("scenario parse error: ") + e.what());
    }
}

void write_manifest(const std::filesystem::path& path, const CorpusManifest& manifest) {
    Json j;
    j["format"] = "saedge-corpus";
    j["format_version"] = 1;
    j["prng"] = Json{{"algorithm", manifest.prng_algorithm},
                     {"streams", Json{{"noise", "derive_seed(seed, 0)"},
                                      {"spikes", "derive_seed(seed, 1)"},
                                      {"correlated_k", "derive_seed(seed, 10 + k)"}}}};
    Json entries = Json::array();
    for (const auto& e : manifest.entries) {
        Json ej;
        ej["file"] = e.file;
        ej["role"] = e.role == CorpusRole::Healthy ? "healthy" : "fault";
        ej["seed"] = e.spec.rng_seed;
        ej["duration_s"] = e.spec.duration_s;
        Json truth;
        if (e.spec.fault) {
            truth["fault"] = Json{{"onset_s", e.spec.fault->onset_s}, {"failure_s", e.spec.fault->failure_s}};
        } else {
            truth["fault"] = nullptr;
        }
        Json rests = Json::array();
        for (const auto& r : e.spec.rest_intervals) {
            rests.push_back(Json{{"start_s", r.start_s}, {"end_s", r.end_s}});
        }
        truth["rest_intervals"] = std::move(rests);
        ej["ground_truth"] = std::move(truth);
        ej["scenario"] = scenario_json(e.spec);
        entries.push_back(std::move(ej));
    }
    j["entries"] = std::move(entries);
    write_file(path, j.dump(2) + "\n");
}

CorpusManifest read_manifest(const std::filesystem::path& path) {
    try {
        const Json j = Json::parse(read_file(path));
        if (j.at("format").get<std::string>() != "saedge-corpus") {
            throw DataError("not a saedge corpus manifest");
        }
        CorpusManifest m;
        m.prng_algorithm = j.at("prng").at("algorithm").get<std::string>();
        for (const auto& ej : j.at("entries")) {
            CorpusEntry e;
            e.file = ej.at("file").get<std::string>();
            const auto role = ej.at("role").get<std::string>();
            if (role != "healthy" && role != "fault") {
                throw DataError("unknown corpus role '" + role + "'");
            }
            e.role = role == "healthy" ? CorpusRole::Healthy : CorpusRole::Fault;
            e.spec = scenario_from(ej.at("scenario"));
            m.entries.push_back(std::move(e));
        }
        return m;
    } catch (const Json::exception& e) {
        throw DataError(std::string("manifest parse error: ") + e.what());
    }
}

} // namespace saedge
