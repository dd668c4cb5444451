#pragma once

#include <cmath>
#include <optional>

#include "clc/core/image.hpp"

namespace clc::toy {

// Chroma-weighted centroid detection. Toy scenes keep backgrounds grayscale
// and shapes saturated, so per-pixel chroma (max - min over RGB) separates
// the shape without any reference to the renderer. Weighting by chroma keeps
// the centroid stable on blurry generated frames.

struct ShapeDetection {
    double x = 0.0, y = 0.0;   // weighted centroid, pixel coordinates
    double weight = 0.0;       // total chroma mass
    double area = 0.0;         // effective pixel count (weight-normalized)
    double mean_color[3] = {0.0, 0.0, 0.0};  // chroma-weighted mean, [0,1]
};

inline double pixel_chroma(const Image& img, int y, int x) {
    const int r = img.at(y, x, 0), g = img.at(y, x, 1), b = img.at(y, x, 2);
    return (std::max({r, g, b}) - std::min({r, g, b})) / 255.0;
}

inline std::optional<ShapeDetection> detect_shape(const Image& img,
                                                  double min_total_weight = 2.0) {
    double wsum = 0.0, xsum = 0.0, ysum = 0.0;
    double csum[3] = {0.0, 0.0, 0.0};
    double wmax = 0.0;
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            const double w = pixel_chroma(img, y, x);
            if (w <= 0.05) continue;  // ignore gray / near-gray pixels
            wsum += w;
            xsum += w * x;
            ysum += w * y;
            wmax = std::max(wmax, w);
            for (int c = 0; c < 3; ++c) csum[c] += w * img.at(y, x, c) / 255.0;
        }
    if (wsum < min_total_weight) return std::nullopt;
    ShapeDetection det;
    det.x = xsum / wsum;
    det.y = ysum / wsum;
    det.weight = wsum;
    det.area = wmax > 0.0 ? wsum / wmax : 0.0;
    for (int c = 0; c < 3; ++c) det.mean_color[c] = csum[c] / wsum;
    return det;
}

}  // namespace clc::toy
