#pragma once

#include <cmath>
#include <vector>

#include "clc/core/tensor.hpp"
#include "clc/toy/detect.hpp"

namespace clc::toy {

// Appearance features a_src extracted from a source frame: the shape's
// chroma-weighted mean color and its size, mapped to [-1, 1]. The background
// is deliberately not measured.
inline std::vector<double> encode_appearance(const Image& source) {
    const auto det = detect_shape(source);
    std::vector<double> a(4, 0.0);
    if (!det) return a;  // featureless source: neutral appearance
    for (int c = 0; c < 3; ++c) a[c] = det->mean_color[c] * 2.0 - 1.0;
    const double radius = std::sqrt(std::max(det->area, 0.0) / 3.14159265358979323846);
    a[3] = std::clamp(radius / 12.0, 0.0, 1.0) * 2.0 - 1.0;
    return a;
}

// Motion encoding m_k for a driving keypoint: a Gaussian bump centered on
// the keypoint in latent coordinates, written into the first few channels of
// a latent-shaped grid so it can be added directly to the sampler input.
struct MotionEncoder {
    int latent_channels;
    int latent_h, latent_w;
    int factor;                // pixel -> latent scale
    int bump_channels = 4;
    double amplitude = 1.0;
    double sigma = 1.25;       // in latent cells

    Tensor encode(double px, double py) const {
        Tensor m(latent_channels, latent_h, latent_w, factor);
        const double cx = px / factor, cy = py / factor;
        const int nch = std::min(bump_channels, latent_channels);
        for (int y = 0; y < latent_h; ++y)
            for (int x = 0; x < latent_w; ++x) {
                const double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
                const double v = amplitude * std::exp(-d2 / (2.0 * sigma * sigma));
                for (int ch = 0; ch < nch; ++ch) m.at(ch, y, x) = v;
            }
        return m;
    }

    // MotionEncoder(I_drive): keypoint extraction then heatmap.
    Tensor encode_frame(const Image& driving) const {
        const auto det = detect_shape(driving);
        if (!det)
            return Tensor(latent_channels, latent_h, latent_w, factor);  // no motion cue
        return encode(det->x, det->y);
    }
};

}  // namespace clc::toy
