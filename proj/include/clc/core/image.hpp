#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clc/core/errors.hpp"

namespace clc {

// 8-bit RGB image, interleaved row-major (y, x, channel).
class Image {
public:
    Image() = default;
    Image(int height, int width) : h_(height), w_(width) {
        if (height <= 0 || width <= 0)
            throw ShapeError("image dims must be positive");
        data_.assign(static_cast<std::size_t>(height) * width * 3, 0);
    }

    int height() const { return h_; }
    int width() const { return w_; }

    std::uint8_t& at(int y, int x, int c) { return data_[idx(y, x, c)]; }
    std::uint8_t at(int y, int x, int c) const { return data_[idx(y, x, c)]; }

    const std::vector<std::uint8_t>& bytes() const { return data_; }
    std::vector<std::uint8_t>& bytes() { return data_; }

    bool same_shape(const Image& o) const { return h_ == o.h_ && w_ == o.w_; }

    bool operator==(const Image& o) const {
        return h_ == o.h_ && w_ == o.w_ && data_ == o.data_;
    }

private:
    std::size_t idx(int y, int x, int c) const {
        return (static_cast<std::size_t>(y) * w_ + x) * 3 + c;
    }

    int h_ = 0, w_ = 0;
    std::vector<std::uint8_t> data_;
};

// Ordered frame sequence with frame-rate metadata. Used for both real and
// generated videos.
struct VideoClip {
    std::vector<Image> frames;
    double fps = 20.0;

    int frame_count() const { return static_cast<int>(frames.size()); }

    void require_compatible(const VideoClip& other) const {
        if (frames.size() != other.frames.size())
            throw ParamError("clips differ in frame count: " +
                             std::to_string(frames.size()) + " vs " +
                             std::to_string(other.frames.size()));
        if (!frames.empty() && !frames[0].same_shape(other.frames[0]))
            throw ShapeError("clips differ in resolution");
    }
};

}  // namespace clc
