#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "clc/core/image.hpp"

namespace clc::metrics {

// Temporal Jittering Error at frame offset delta: the mean absolute
// discrepancy between real and generated frame-difference maps,
//   D_t = I_{t+delta} - I_t,   error_t = mean(|D_t_real - D_t_gen|),
// aggregated over t = 0..N-delta-1. Differences are signed reals on the
// 0..255 scale; the mean runs over all pixels and channels jointly.
// Symmetric in (real, gen).
struct TJEResult {
    int delta = 0;
    std::vector<double> per_t_errors;
    double mean_error = 0.0;
};

inline TJEResult tje(const VideoClip& real, const VideoClip& gen, int delta) {
    real.require_compatible(gen);
    const int n = real.frame_count();
    if (delta < 1 || delta >= n)
        throw ParamError("tje delta must satisfy 1 <= delta <= N-1, got delta=" +
                         std::to_string(delta) + " with N=" + std::to_string(n));

    TJEResult res;
    res.delta = delta;
    res.per_t_errors.reserve(n - delta);
    const std::size_t count = real.frames[0].bytes().size();
    for (int t = 0; t + delta < n; ++t) {
        const auto& r0 = real.frames[t].bytes();
        const auto& r1 = real.frames[t + delta].bytes();
        const auto& g0 = gen.frames[t].bytes();
        const auto& g1 = gen.frames[t + delta].bytes();
        double acc = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            const double dr = static_cast<double>(r1[i]) - static_cast<double>(r0[i]);
            const double dg = static_cast<double>(g1[i]) - static_cast<double>(g0[i]);
            acc += std::fabs(dr - dg);
        }
        res.per_t_errors.push_back(acc / static_cast<double>(count));
    }
    double total = 0.0;
    for (double e : res.per_t_errors) total += e;
    res.mean_error = total / res.per_t_errors.size();
    return res;
}

}  // namespace clc::metrics
