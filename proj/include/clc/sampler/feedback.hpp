#pragma once

#include <cstdint>
#include <string>

#include "clc/core/tensor.hpp"

namespace clc {

enum class NoiseMode {
    fixed_zT,               // one z_T drawn per video, reused for every frame
    independent_per_frame,  // fresh z_T per frame; feedback anchors to that frame's own z_T
};

inline const char* to_string(NoiseMode m) {
    return m == NoiseMode::fixed_zT ? "fixed_zT" : "independent_per_frame";
}

inline NoiseMode noise_mode_from_string(const std::string& s) {
    if (s == "fixed_zT") return NoiseMode::fixed_zT;
    if (s == "independent_per_frame") return NoiseMode::independent_per_frame;
    throw ParamError("unknown noise_mode '" + s + "'");
}

struct FeedbackConfig {
    double beta = 0.05;
    NoiseMode noise_mode = NoiseMode::fixed_zT;
    std::uint64_t seed = 0;
    double cfg_scale = 1.0;

    // Gains above 1 extrapolate the state update unboundedly and are
    // rejected; gains above 0.2 are known to degrade output and are
    // flagged to the caller.
    void validate() const {
        if (!(beta >= 0.0 && beta <= 1.0))
            throw ParamError("feedback gain beta must lie in [0, 1], got " +
                             std::to_string(beta));
        if (cfg_scale < 0.0) throw ParamError("cfg_scale must be >= 0");
    }

    bool high_gain_flagged() const { return beta > 0.2; }
};

// State update of the feedback loop: x_{k+1} = z_T + beta * (z0_hat_k - z_T).
// Evaluated as (1 - beta) * z_T + beta * z0_hat so the beta = 0 and beta = 1
// endpoints are bit-exact; ||x_{k+1} - z_T|| = beta * ||z0_hat_k - z_T||.
inline Tensor feedback_update(const Tensor& z_T, const Tensor& z0_hat, double beta) {
    require_same_shape(z_T, z0_hat, "feedback_update(z_T, z0_hat)");
    Tensor out = Tensor::like(z_T);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = (1.0 - beta) * z_T[i] + beta * z0_hat[i];
    return out;
}

}  // namespace clc
