#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "clc/core/errors.hpp"
#include "clc/diffusion/schedule.hpp"
#include "clc/sampler/feedback.hpp"

namespace clc {

// Plain-text config: one `key = value` pair per line, `#` starts a comment.
// Unknown keys are rejected so docs and code cannot drift apart.

inline std::map<std::string, std::string> parse_config_text(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        if (kv.count(key)) throw ConfigError("duplicate key '" + key + "'");
        kv[key] = value;
    }
    return kv;
}

// Everything a command needs to run reproducibly. Field defaults double as
// the documented defaults; every key present in a file must match a field.
struct ExperimentConfig {
    // paths
    std::string data_dir = "data";
    std::string checkpoint_dir = "checkpoints";
    std::string output_dir = "out";
    std::string real_dir;
    std::string gen_dir;
    std::string source_image;
    std::string driving_dir;

    // feedback / sampling
    double beta = 0.05;
    std::string noise_mode = "fixed_zT";
    std::uint64_t seed = 0;
    double cfg_scale = 1.0;
    int n_frames = 50;

    // schedule
    int t_train = 1000;
    double beta_min = 1e-4;
    double beta_max = 0.02;
    int ddim_count = 30;

    // toy world
    int canvas = 64;
    int latent_f = 4;
    int n_videos = 10;
    double fps = 20.0;

    // training
    int train_steps = 8000;
    int batch_size = 8;
    double learning_rate = 2e-3;
    double p_drop = 0.1;
    int hidden_channels = 48;
    std::string loss_target = "v";  // "v" or "eps"

    // evaluation / sweeps
    std::string metrics = "tje,psnr_float,psnr_int,ssim,akd";
    std::vector<int> delta_list = {1, 2, 4, 8};
    std::vector<double> beta_grid = {0.0, 0.01, 0.05, 0.1, 0.2};
    std::string sweep_objective = "tje_mean";
    std::string method_name = "clc";

    // output toggles
    bool dump_latents = false;

    // curation
    int curate_videos = 40;
    int curate_identities = 8;
    double cluster_threshold = 0.4;
    int clip_len = 50;
    double train_frac = 0.9;
    bool spectral_refine = false;

    FeedbackConfig feedback() const {
        FeedbackConfig fc;
        fc.beta = beta;
        fc.noise_mode = noise_mode_from_string(noise_mode);
        fc.seed = seed;
        fc.cfg_scale = cfg_scale;
        fc.validate();
        return fc;
    }

    NoiseSchedule schedule() const {
        return make_linear_schedule(t_train, beta_min, beta_max, ddim_count);
    }

    void apply(const std::string& key, const std::string& value);

    void apply_all(const std::map<std::string, std::string>& kv) {
        for (const auto& [k, v] : kv) apply(k, v);
    }

    static ExperimentConfig load(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw MissingInputError("config file " + path.string() + " not found");
        ExperimentConfig cfg;
        cfg.apply_all(parse_config_text(in));
        return cfg;
    }

    void validate() const {
        feedback();
        schedule();
        if (n_frames < 1) throw ConfigError("n_frames must be >= 1");
        if (delta_list.empty()) throw ConfigError("delta_list must be non-empty");
        if (beta_grid.empty()) throw ConfigError("beta_grid must be non-empty");
        if (canvas % latent_f != 0) throw ConfigError("canvas must be divisible by latent_f");
    }
};

namespace detail {
inline double to_real(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double r = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': '" + v + "' is not a number");
    }
}
inline long long to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long long r = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': '" + v + "' is not an integer");
    }
}
inline bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("key '" + key + "': '" + v + "' is not a bool");
}
template <typename T, typename Fn>
std::vector<T> to_list(const std::string& key, const std::string& v, Fn item) {
    std::vector<T> out;
    std::string tok;
    std::istringstream ss(v);
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(item(key, tok));
    if (out.empty()) throw ConfigError("key '" + key + "': empty list");
    return out;
}
}  // namespace detail

inline void ExperimentConfig::apply(const std::string& key, const std::string& value) {
    using namespace detail;
    if (key == "data_dir") data_dir = value;
    else if (key == "checkpoint_dir") checkpoint_dir = value;
    else if (key == "output_dir") output_dir = value;
    else if (key == "real_dir") real_dir = value;
    else if (key == "gen_dir") gen_dir = value;
    else if (key == "source_image") source_image = value;
    else if (key == "driving_dir") driving_dir = value;
    else if (key == "beta") beta = to_real(key, value);
    else if (key == "noise_mode") {
        noise_mode_from_string(value);  // reject unknown modes early
        noise_mode = value;
    }
    else if (key == "seed") seed = static_cast<std::uint64_t>(to_int(key, value));
    else if (key == "cfg_scale") cfg_scale = to_real(key, value);
    else if (key == "n_frames") n_frames = static_cast<int>(to_int(key, value));
    else if (key == "t_train") t_train = static_cast<int>(to_int(key, value));
    else if (key == "beta_min") beta_min = to_real(key, value);
    else if (key == "beta_max") beta_max = to_real(key, value);
    else if (key == "ddim_count") ddim_count = static_cast<int>(to_int(key, value));
    else if (key == "canvas") canvas = static_cast<int>(to_int(key, value));
    else if (key == "latent_f") latent_f = static_cast<int>(to_int(key, value));
    else if (key == "n_videos") n_videos = static_cast<int>(to_int(key, value));
    else if (key == "fps") fps = to_real(key, value);
    else if (key == "train_steps") train_steps = static_cast<int>(to_int(key, value));
    else if (key == "batch_size") batch_size = static_cast<int>(to_int(key, value));
    else if (key == "learning_rate") learning_rate = to_real(key, value);
    else if (key == "p_drop") p_drop = to_real(key, value);
    else if (key == "hidden_channels") hidden_channels = static_cast<int>(to_int(key, value));
    else if (key == "loss_target") {
        if (value != "v" && value != "eps")
            throw ConfigError("loss_target must be 'v' or 'eps'");
        loss_target = value;
    } else if (key == "metrics") metrics = value;
    else if (key == "delta_list")
        delta_list = to_list<int>(key, value, [](const std::string& k, const std::string& t) {
            return static_cast<int>(to_int(k, t));
        });
    else if (key == "beta_grid")
        beta_grid = to_list<double>(key, value, to_real);
    else if (key == "sweep_objective") sweep_objective = value;
    else if (key == "method_name") method_name = value;
    else if (key == "dump_latents") dump_latents = to_bool(key, value);
    else if (key == "curate_videos") curate_videos = static_cast<int>(to_int(key, value));
    else if (key == "curate_identities") curate_identities = static_cast<int>(to_int(key, value));
    else if (key == "cluster_threshold") cluster_threshold = to_real(key, value);
    else if (key == "clip_len") clip_len = static_cast<int>(to_int(key, value));
    else if (key == "train_frac") train_frac = to_real(key, value);
    else if (key == "spectral_refine") spectral_refine = to_bool(key, value);
    else throw ConfigError("unknown key '" + key + "'");
}

// Schedule round-trip through the same plain-text format (keys: t_train,
// beta_min, beta_max, ddim_count).
inline std::string schedule_to_config(const NoiseSchedule& s) {
    std::ostringstream out;
    out << "t_train = " << s.t_train << "\n";
    out << "beta_min = " << s.beta_min << "\n";
    out << "beta_max = " << s.beta_max << "\n";
    out << "ddim_count = " << s.ddim_count() << "\n";
    return out.str();
}

inline NoiseSchedule schedule_from_config(std::istream& in) {
    const auto kv = parse_config_text(in);
    for (const auto& [k, v] : kv)
        if (k != "t_train" && k != "beta_min" && k != "beta_max" && k != "ddim_count")
            throw ConfigError("unknown schedule key '" + k + "'");
    auto need = [&kv](const char* k) {
        auto it = kv.find(k);
        if (it == kv.end()) throw ConfigError(std::string("missing schedule key '") + k + "'");
        return it->second;
    };
    return make_linear_schedule(static_cast<int>(detail::to_int("t_train", need("t_train"))),
                                detail::to_real("beta_min", need("beta_min")),
                                detail::to_real("beta_max", need("beta_max")),
                                static_cast<int>(detail::to_int("ddim_count", need("ddim_count"))));
}

}  // namespace clc
