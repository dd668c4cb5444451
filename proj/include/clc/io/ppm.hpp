#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "clc/core/errors.hpp"
#include "clc/core/image.hpp"

namespace clc {

// Frames are stored as binary PPM (P6, maxval 255): 8-bit RGB, one file per
// frame, zero-padded numbering.

inline void write_ppm(const std::filesystem::path& path, const Image& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "P6\n" << img.width() << " " << img.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.bytes().data()),
              static_cast<std::streamsize>(img.bytes().size()));
    if (!out) throw IoError("short write to " + path.string());
}

inline Image read_ppm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingInputError("cannot open " + path.string());

    auto next_token = [&in, &path]() {
        std::string tok;
        while (in >> tok) {
            if (tok[0] == '#') {
                std::string line;
                std::getline(in, line);
                continue;
            }
            return tok;
        }
        throw IoError("truncated ppm header in " + path.string());
    };

    if (next_token() != "P6") throw IoError(path.string() + " is not a binary ppm");
    const int w = std::stoi(next_token());
    const int h = std::stoi(next_token());
    const int maxval = std::stoi(next_token());
    if (maxval != 255) throw IoError("only maxval 255 ppm supported");
    in.get();  // single whitespace after maxval

    Image img(h, w);
    in.read(reinterpret_cast<char*>(img.bytes().data()),
            static_cast<std::streamsize>(img.bytes().size()));
    if (!in) throw IoError("truncated pixel data in " + path.string());
    return img;
}

inline std::string frame_filename(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "frame_%05d.ppm", index);
    return buf;
}

inline void write_frames(const std::filesystem::path& dir, const VideoClip& clip) {
    std::filesystem::create_directories(dir);
    for (int i = 0; i < clip.frame_count(); ++i)
        write_ppm(dir / frame_filename(i), clip.frames[i]);
}

inline VideoClip read_frames(const std::filesystem::path& dir, double fps = 20.0) {
    if (!std::filesystem::is_directory(dir))
        throw MissingInputError("frame directory " + dir.string() + " does not exist");
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".ppm")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    VideoClip clip;
    clip.fps = fps;
    clip.frames.reserve(files.size());
    for (const auto& f : files) clip.frames.push_back(read_ppm(f));
    return clip;
}

}  // namespace clc
