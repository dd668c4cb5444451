#pragma once

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "clc/io/npy.hpp"
#include "clc/toy/denoiser.hpp"

namespace clc::toy {

// Checkpoint = directory with one npy per parameter plus manifest.json
// recording parameter names/shapes, the architecture, and the schedule hash
// so a checkpoint cannot silently be sampled under a different schedule.

inline void save_checkpoint(const std::filesystem::path& dir, const ToyDenoiser& net,
                            std::uint64_t schedule_hash, std::uint64_t data_seed = 0) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    nlohmann::ordered_json manifest;
    manifest["format"] = "clc-checkpoint-v1";
    const auto& a = net.arch();
    manifest["arch"] = {{"latent_channels", a.latent_channels},
                        {"latent_h", a.latent_h},
                        {"latent_w", a.latent_w},
                        {"factor", a.factor},
                        {"hidden", a.hidden},
                        {"depth", a.depth},
                        {"t_train", a.t_train},
                        {"appearance_dim", a.appearance_dim},
                        {"t_feature_dim", a.t_feature_dim},
                        {"motion_side_channels", a.motion_side_channels}};
    manifest["schedule_hash"] = schedule_hash;
    manifest["data_seed"] = data_seed;
    manifest["param_count"] = net.param_count();

    nlohmann::ordered_json params = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < net.layers().size(); ++i) {
        const auto& l = net.layers()[i];
        const std::string wname = "layer" + std::to_string(i) + "_W";
        const std::string bname = "layer" + std::to_string(i) + "_b";

        std::vector<double> wbuf(static_cast<std::size_t>(l.W.size()));
        for (int r = 0; r < l.W.rows(); ++r)
            for (int c = 0; c < l.W.cols(); ++c)
                wbuf[static_cast<std::size_t>(r) * l.W.cols() + c] = l.W(r, c);
        npy::write(dir / (wname + ".npy"), wbuf,
                   {static_cast<std::size_t>(l.W.rows()), static_cast<std::size_t>(l.W.cols())});
        std::vector<double> bbuf(l.b.data(), l.b.data() + l.b.size());
        npy::write(dir / (bname + ".npy"), bbuf, {static_cast<std::size_t>(l.b.size())});

        params.push_back({{"name", wname},
                          {"file", wname + ".npy"},
                          {"shape", {l.W.rows(), l.W.cols()}}});
        params.push_back(
            {{"name", bname}, {"file", bname + ".npy"}, {"shape", {l.b.size()}}});
    }
    manifest["params"] = params;

    std::ofstream out(dir / "manifest.json");
    if (!out) throw IoError("cannot write checkpoint manifest in " + dir.string());
    out << manifest.dump(2) << "\n";
}

struct LoadedCheckpoint {
    ToyDenoiser net;
    std::uint64_t schedule_hash = 0;
    std::uint64_t data_seed = 0;
};

inline LoadedCheckpoint load_checkpoint(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    const fs::path mpath = dir / "manifest.json";
    std::ifstream in(mpath);
    if (!in) throw MissingInputError("checkpoint manifest " + mpath.string() + " not found");
    nlohmann::json manifest;
    try {
        in >> manifest;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("bad checkpoint manifest: " + std::string(e.what()));
    }
    if (manifest.value("format", "") != "clc-checkpoint-v1")
        throw IoError("unknown checkpoint format in " + mpath.string());

    ToyArch arch;
    const auto& a = manifest.at("arch");
    arch.latent_channels = a.at("latent_channels");
    arch.latent_h = a.at("latent_h");
    arch.latent_w = a.at("latent_w");
    arch.factor = a.at("factor");
    arch.hidden = a.at("hidden");
    arch.depth = a.at("depth");
    arch.t_train = a.at("t_train");
    arch.appearance_dim = a.at("appearance_dim");
    arch.t_feature_dim = a.at("t_feature_dim");
    arch.motion_side_channels = a.at("motion_side_channels");

    LoadedCheckpoint loaded{ToyDenoiser(arch, 0), manifest.value("schedule_hash", 0ull),
                            manifest.value("data_seed", 0ull)};

    for (std::size_t i = 0; i < loaded.net.layers().size(); ++i) {
        auto& l = loaded.net.layers()[i];
        const auto w = npy::read(dir / ("layer" + std::to_string(i) + "_W.npy"));
        if (w.shape.size() != 2 || static_cast<int>(w.shape[0]) != l.W.rows() ||
            static_cast<int>(w.shape[1]) != l.W.cols())
            throw IoError("checkpoint layer " + std::to_string(i) + " weight shape mismatch");
        for (int r = 0; r < l.W.rows(); ++r)
            for (int c = 0; c < l.W.cols(); ++c)
                l.W(r, c) = static_cast<float>(w.data[static_cast<std::size_t>(r) * l.W.cols() + c]);
        const auto b = npy::read(dir / ("layer" + std::to_string(i) + "_b.npy"));
        if (b.element_count() != static_cast<std::size_t>(l.b.size()))
            throw IoError("checkpoint layer " + std::to_string(i) + " bias shape mismatch");
        for (int r = 0; r < l.b.size(); ++r) l.b(r) = static_cast<float>(b.data[r]);
    }
    return loaded;
}

}  // namespace clc::toy
