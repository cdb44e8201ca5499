#include "umbra/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "umbra/error.hpp"

namespace umbra {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

ConfigValue parse_scalar(const std::string& tok, int line_no) {
    if (tok == "true") return true;
    if (tok == "false") return false;
    if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"')
        return tok.substr(1, tok.size() - 2);
    if (!tok.empty() && std::all_of(tok.begin(), tok.end(),
                                    [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        std::uint64_t u = 0;
        const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), u);
        if (ec == std::errc() && p == tok.data() + tok.size()) return u;
    }
    try {
        std::size_t used = 0;
        const double d = std::stod(tok, &used);
        if (used == tok.size()) return d;
    } catch (...) {
    }
    throw ConfigError("config line " + std::to_string(line_no) + ": cannot parse value '" +
                      tok + "'");
}

}  // namespace

std::map<std::string, ConfigValue> parse_config_text(const std::string& text) {
    std::map<std::string, ConfigValue> values;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": empty key or value");
        if (values.count(key))
            throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" +
                              key + "'");
        if (val.front() == '[') {
            if (val.back() != ']')
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": unterminated array");
            std::vector<double> arr;
            std::string body = val.substr(1, val.size() - 2);
            std::istringstream items(body);
            std::string item;
            while (std::getline(items, item, ',')) {
                item = trim(item);
                if (item.empty()) continue;
                const ConfigValue v = parse_scalar(item, line_no);
                if (std::holds_alternative<double>(v)) {
                    arr.push_back(std::get<double>(v));
                } else if (std::holds_alternative<std::uint64_t>(v)) {
                    arr.push_back(static_cast<double>(std::get<std::uint64_t>(v)));
                } else {
                    throw ConfigError("config line " + std::to_string(line_no) +
                                      ": arrays hold numbers only");
                }
            }
            values[key] = arr;
        } else {
            values[key] = parse_scalar(val, line_no);
        }
    }
    return values;
}

std::map<std::string, ConfigValue> parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

namespace {

class ValueReader {
public:
    explicit ValueReader(const std::map<std::string, ConfigValue>& values)
        : values_(values) {}

    bool take_bool(const std::string& key, bool fallback) {
        const auto* v = find(key);
        if (!v) return fallback;
        if (const bool* b = std::get_if<bool>(v)) return *b;
        throw ConfigError("config key '" + key + "' must be true or false");
    }

    std::uint64_t take_u64(const std::string& key, std::uint64_t fallback) {
        const auto* v = find(key);
        if (!v) return fallback;
        if (const auto* u = std::get_if<std::uint64_t>(v)) return *u;
        throw ConfigError("config key '" + key + "' must be a non-negative integer");
    }

    int take_int(const std::string& key, int fallback) {
        const auto* v = find(key);
        if (!v) return fallback;
        if (const auto* u = std::get_if<std::uint64_t>(v)) return static_cast<int>(*u);
        throw ConfigError("config key '" + key + "' must be a non-negative integer");
    }

    double take_double(const std::string& key, double fallback) {
        const auto* v = find(key);
        if (!v) return fallback;
        if (const auto* d = std::get_if<double>(v)) return *d;
        if (const auto* u = std::get_if<std::uint64_t>(v)) return static_cast<double>(*u);
        throw ConfigError("config key '" + key + "' must be a number");
    }

    std::string take_string(const std::string& key, std::string fallback) {
        const auto* v = find(key);
        if (!v) return fallback;
        if (const auto* s = std::get_if<std::string>(v)) return *s;
        throw ConfigError("config key '" + key + "' must be a quoted string");
    }

    std::vector<double> take_list(const std::string& key, std::vector<double> fallback) {
        const auto* v = find(key);
        if (!v) return fallback;
        if (const auto* a = std::get_if<std::vector<double>>(v)) return *a;
        throw ConfigError("config key '" + key + "' must be an array");
    }

    void check_all_consumed() const {
        for (const auto& [key, value] : values_) {
            if (!consumed_.count(key))
                throw ConfigError("unknown config key '" + key + "'");
        }
    }

private:
    const ConfigValue* find(const std::string& key) {
        consumed_.insert(key);
        const auto it = values_.find(key);
        return it == values_.end() ? nullptr : &it->second;
    }

    const std::map<std::string, ConfigValue>& values_;
    std::set<std::string> consumed_;
};

std::vector<ScatterProfile::Term> scatter_terms(const std::vector<double>& sigmas,
                                                const std::vector<double>& weights,
                                                const std::string& channel) {
    if (sigmas.empty())
        throw ConfigError("scatter profile for " + channel + " has no sigmas");
    std::vector<double> w = weights;
    if (w.empty()) w.assign(sigmas.size(), 1.0);
    if (w.size() != sigmas.size())
        throw ConfigError("scatter weights for " + channel +
                          " do not match the sigma count");
    double sum = 0.0;
    for (double v : w) sum += v;
    if (!(sum > 0.0)) throw ConfigError("scatter weights for " + channel + " sum to zero");
    std::vector<ScatterProfile::Term> terms;
    for (std::size_t i = 0; i < sigmas.size(); ++i)
        terms.push_back({sigmas[i], w[i] / sum});
    return terms;
}

}  // namespace

PipelineConfig PipelineConfig::from_values(const std::map<std::string, ConfigValue>& values) {
    PipelineConfig cfg;
    ValueReader r(values);

    cfg.master_seed = r.take_u64("master_seed", cfg.master_seed);
    cfg.sample_count = r.take_int("sample_count", cfg.sample_count);
    cfg.output_root = r.take_string("output_root", cfg.output_root.string());
    cfg.workers = r.take_int("workers", cfg.workers);
    cfg.failure_rate_threshold =
        r.take_double("failure_rate_threshold", cfg.failure_rate_threshold);

    cfg.faces_dir = r.take_string("faces_dir", "");
    cfg.silhouettes_dir = r.take_string("silhouettes_dir", "");
    cfg.landmarks_dir = r.take_string("landmarks_dir", "");
    cfg.images_dir = r.take_string("images_dir", "");

    cfg.rig = r.take_string("rig", cfg.rig);
    cfg.scan = r.take_string("scan", cfg.scan);
    cfg.synthetic_light_count = r.take_int("synthetic_light_count", cfg.synthetic_light_count);
    cfg.synthetic_inactive_count =
        r.take_int("synthetic_inactive_count", cfg.synthetic_inactive_count);
    cfg.synthetic_scan_resolution =
        r.take_int("synthetic_scan_resolution", cfg.synthetic_scan_resolution);

    cfg.ablation.no_sv = r.take_bool("no_sv", false);
    cfg.ablation.no_ss = r.take_bool("no_ss", false);
    cfg.ablation.no_color = r.take_bool("no_color", false);

    const std::string source = r.take_string("mask_source", "both");
    if (source == "both") {
        cfg.foreign.source_mode = MaskSourceMode::Both;
    } else if (source == "perlin") {
        cfg.foreign.source_mode = MaskSourceMode::PerlinOnly;
    } else if (source == "silhouette") {
        cfg.foreign.source_mode = MaskSourceMode::SilhouetteOnly;
    } else {
        throw ConfigError("mask_source must be both, perlin or silhouette");
    }

    cfg.foreign.perlin.octaves = r.take_int("perlin_octaves", cfg.foreign.perlin.octaves);
    cfg.foreign.perlin.persistence_min =
        r.take_double("perlin_persistence_min", cfg.foreign.perlin.persistence_min);
    cfg.foreign.perlin.persistence_max =
        r.take_double("perlin_persistence_max", cfg.foreign.perlin.persistence_max);
    cfg.foreign.perlin.base_frequency =
        r.take_double("perlin_base_frequency", cfg.foreign.perlin.base_frequency);

    cfg.foreign.silhouette.scale_min =
        r.take_double("silhouette_scale_min", cfg.foreign.silhouette.scale_min);
    cfg.foreign.silhouette.scale_max =
        r.take_double("silhouette_scale_max", cfg.foreign.silhouette.scale_max);
    cfg.foreign.silhouette.period_min =
        r.take_double("silhouette_period_min", cfg.foreign.silhouette.period_min);
    cfg.foreign.silhouette.period_max =
        r.take_double("silhouette_period_max", cfg.foreign.silhouette.period_max);

    const ScatterProfile def = ScatterProfile::defaults();
    auto sigmas_of = [](const std::vector<ScatterProfile::Term>& terms) {
        std::vector<double> s;
        for (const auto& t : terms) s.push_back(t.sigma);
        return s;
    };
    cfg.foreign.scatter.red =
        scatter_terms(r.take_list("scatter_sigmas_red", sigmas_of(def.red)),
                      r.take_list("scatter_weights_red", {}), "red");
    cfg.foreign.scatter.green =
        scatter_terms(r.take_list("scatter_sigmas_green", sigmas_of(def.green)),
                      r.take_list("scatter_weights_green", {}), "green");
    cfg.foreign.scatter.blue =
        scatter_terms(r.take_list("scatter_sigmas_blue", sigmas_of(def.blue)),
                      r.take_list("scatter_weights_blue", {}), "blue");

    cfg.foreign.spatial.octaves = r.take_int("sv_octaves", cfg.foreign.spatial.octaves);
    cfg.foreign.spatial.persistence_min =
        r.take_double("sv_persistence_min", cfg.foreign.spatial.persistence_min);
    cfg.foreign.spatial.persistence_max =
        r.take_double("sv_persistence_max", cfg.foreign.spatial.persistence_max);
    cfg.foreign.spatial.base_frequency =
        r.take_double("sv_base_frequency", cfg.foreign.spatial.base_frequency);
    cfg.foreign.spatial.sigma_min =
        r.take_double("sv_sigma_min", cfg.foreign.spatial.sigma_min);
    cfg.foreign.spatial.sigma_max =
        r.take_double("sv_sigma_max", cfg.foreign.spatial.sigma_max);
    cfg.foreign.spatial.intensity_floor =
        r.take_double("sv_intensity_floor", cfg.foreign.spatial.intensity_floor);
    cfg.foreign.no_color_gain = r.take_double("no_color_gain", cfg.foreign.no_color_gain);

    cfg.facial.p_key_min = r.take_double("p_key_min", cfg.facial.p_key_min);
    cfg.facial.p_key_max = r.take_double("p_key_max", cfg.facial.p_key_max);
    cfg.facial.eps_ratio = r.take_double("epsilon_ratio", cfg.facial.eps_ratio);
    cfg.facial.p_fill_ratio = r.take_double("p_fill_ratio", cfg.facial.p_fill_ratio);
    cfg.facial.fill_neighborhood =
        r.take_int("fill_neighborhood", cfg.facial.fill_neighborhood);
    const std::vector<double> sizes = r.take_list("light_sizes", {});
    if (!sizes.empty()) {
        cfg.facial.light_sizes.clear();
        for (double s : sizes) cfg.facial.light_sizes.push_back(static_cast<int>(s));
    }

    cfg.k_sigma = r.take_int("k_sigma", cfg.k_sigma);

    r.check_all_consumed();
    cfg.validate_common();
    return cfg;
}

PipelineConfig PipelineConfig::from_file(const std::filesystem::path& path) {
    return from_values(parse_config_file(path));
}

void PipelineConfig::validate_common() const {
    if (sample_count < 1) throw ConfigError("sample_count must be >= 1");
    if (workers < 1) throw ConfigError("workers must be >= 1");
    if (failure_rate_threshold < 0.0 || failure_rate_threshold > 1.0)
        throw ConfigError("failure_rate_threshold must be in [0,1]");
    if (foreign.perlin.octaves < 1 || foreign.spatial.octaves < 1)
        throw ConfigError("octave counts must be >= 1");
    if (foreign.perlin.persistence_min < 0.0 ||
        foreign.perlin.persistence_max > 1.0 ||
        foreign.perlin.persistence_min > foreign.perlin.persistence_max)
        throw ConfigError("perlin persistence range must satisfy 0 <= min <= max <= 1");
    if (foreign.spatial.persistence_min < 0.0 ||
        foreign.spatial.persistence_max > 1.0 ||
        foreign.spatial.persistence_min > foreign.spatial.persistence_max)
        throw ConfigError("sv persistence range must satisfy 0 <= min <= max <= 1");
    if (foreign.spatial.sigma_min < 0.0 ||
        foreign.spatial.sigma_max < foreign.spatial.sigma_min)
        throw ConfigError("sv sigma range must satisfy 0 <= min <= max");
    if (foreign.spatial.intensity_floor < 0.0 || foreign.spatial.intensity_floor > 1.0)
        throw ConfigError("sv_intensity_floor must be in [0,1]");
    if (!(facial.p_key_min > 0.0) || facial.p_key_max < facial.p_key_min)
        throw ConfigError("p_key range must satisfy 0 < min <= max");
    if (!(facial.eps_ratio > 0.0) || facial.eps_ratio >= 1.0)
        throw ConfigError("epsilon_ratio must be in (0,1)");
    if (facial.p_fill_ratio < 0.0 || facial.p_fill_ratio > 0.1)
        throw ConfigError("p_fill_ratio must be in [0, 0.1]");
    if (facial.light_sizes.empty())
        throw ConfigError("light_sizes must not be empty");
    for (int m : facial.light_sizes) {
        if (m < 1) throw ConfigError("light_sizes entries must be >= 1");
    }
    if (facial.fill_neighborhood < 1)
        throw ConfigError("fill_neighborhood must be >= 1");
    if (k_sigma < 1) throw ConfigError("k_sigma must be >= 1");
    try {
        foreign.scatter.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

}  // namespace umbra
