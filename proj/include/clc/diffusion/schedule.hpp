#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "clc/core/errors.hpp"

namespace clc {

// Per-timestep cumulative signal coefficients alpha_bar[0..T] with
// alpha_bar[0] == 1, plus the strictly decreasing DDIM sub-sequence of
// inference timesteps.
struct NoiseSchedule {
    int t_train = 0;
    double beta_min = 0.0;
    double beta_max = 0.0;
    std::vector<double> alpha_bar;  // length t_train + 1
    std::vector<int> ddim_steps;    // strictly decreasing, entries in [1, t_train]

    double alpha_bar_at(int t) const {
        if (t < 0 || t > t_train)
            throw ParamError("timestep " + std::to_string(t) + " outside [0, " +
                             std::to_string(t_train) + "]");
        return alpha_bar[static_cast<std::size_t>(t)];
    }

    int ddim_count() const { return static_cast<int>(ddim_steps.size()); }

    // Consecutive (t_cur, t_next) pairs of the inference chain, terminated
    // at t = 0 where alpha_bar = 1 and the update returns z0_hat exactly.
    std::vector<std::pair<int, int>> ddim_pairs() const {
        std::vector<std::pair<int, int>> pairs;
        pairs.reserve(ddim_steps.size());
        for (std::size_t i = 0; i < ddim_steps.size(); ++i) {
            const int cur = ddim_steps[i];
            const int next = (i + 1 < ddim_steps.size()) ? ddim_steps[i + 1] : 0;
            pairs.emplace_back(cur, next);
        }
        return pairs;
    }

    void validate() const {
        if (t_train < 1) throw ParamError("t_train must be >= 1");
        if (alpha_bar.size() != static_cast<std::size_t>(t_train) + 1)
            throw ParamError("alpha_bar length must equal t_train + 1");
        if (alpha_bar[0] != 1.0) throw ParamError("alpha_bar[0] must be 1");
        for (int t = 1; t <= t_train; ++t) {
            if (!(alpha_bar[t] < alpha_bar[t - 1]))
                throw ParamError("alpha_bar must be strictly decreasing");
            if (!(alpha_bar[t] > 0.0 && alpha_bar[t] <= 1.0))
                throw ParamError("alpha_bar entries must lie in (0, 1]");
        }
        if (ddim_steps.empty()) throw ParamError("ddim_steps must be non-empty");
        int prev = t_train + 1;
        for (int s : ddim_steps) {
            if (s < 1 || s > t_train)
                throw ParamError("ddim step " + std::to_string(s) + " outside [1, t_train]");
            if (s >= prev) throw ParamError("ddim_steps must be strictly decreasing");
            prev = s;
        }
    }

    // Stable fingerprint of the generating parameters, recorded in
    // checkpoint manifests so a checkpoint cannot be silently sampled with
    // a different schedule.
    std::uint64_t hash() const {
        const std::string repr = "t_train=" + std::to_string(t_train) +
                                 ";beta_min=" + std::to_string(beta_min) +
                                 ";beta_max=" + std::to_string(beta_max) +
                                 ";ddim_count=" + std::to_string(ddim_count());
        std::uint64_t h = 1469598103934665603ull;  // FNV-1a
        for (unsigned char ch : repr) {
            h ^= ch;
            h *= 1099511628211ull;
        }
        return h;
    }
};

// Linear-beta schedule: beta_s spaced linearly over s = 1..T, alpha_bar the
// running product of (1 - beta_s). DDIM steps are ddim_count evenly spaced
// timesteps from t_train down to t_train / ddim_count.
inline NoiseSchedule make_linear_schedule(int t_train, double beta_min, double beta_max,
                                          int ddim_count) {
    if (ddim_count < 1 || t_train < ddim_count)
        throw ParamError("need t_train >= ddim_count >= 1, got t_train=" +
                         std::to_string(t_train) + " ddim_count=" + std::to_string(ddim_count));
    if (!(beta_min > 0.0) || !(beta_min <= beta_max) || !(beta_max < 1.0))
        throw ParamError("need 0 < beta_min <= beta_max < 1");

    NoiseSchedule s;
    s.t_train = t_train;
    s.beta_min = beta_min;
    s.beta_max = beta_max;
    s.alpha_bar.resize(static_cast<std::size_t>(t_train) + 1);
    s.alpha_bar[0] = 1.0;
    double prod = 1.0;
    for (int t = 1; t <= t_train; ++t) {
        const double beta =
            (t_train == 1) ? beta_min
                           : beta_min + (beta_max - beta_min) * (t - 1) / (t_train - 1);
        prod *= (1.0 - beta);
        s.alpha_bar[t] = prod;
    }

    s.ddim_steps.resize(ddim_count);
    if (ddim_count == 1) {
        s.ddim_steps[0] = t_train;
    } else {
        const double lo = static_cast<double>(t_train) / ddim_count;
        const double hi = static_cast<double>(t_train);
        for (int i = 0; i < ddim_count; ++i) {
            const double t = hi - (hi - lo) * i / (ddim_count - 1);
            s.ddim_steps[i] = std::max(1, static_cast<int>(std::lround(t)));
        }
    }
    s.validate();
    return s;
}

}  // namespace clc
