#pragma once

#include <cmath>
#include <utility>

#include "clc/core/tensor.hpp"
#include "clc/diffusion/schedule.hpp"

namespace clc {

// v-parameterization is the canonical internal representation; epsilon and
// z0 are derived views. All functions here are pure and deterministic.

// Forward noising: z_t = sqrt(ab_t) * z0 + sqrt(1 - ab_t) * eps.
inline Tensor add_noise(const Tensor& z0, const Tensor& eps, int t, const NoiseSchedule& sched) {
    require_same_shape(z0, eps, "add_noise(z0, eps)");
    const double ab = sched.alpha_bar_at(t);
    return axpby(std::sqrt(ab), z0,
                 std::sqrt(1.0 - ab), eps);
}

// Training target: v = sqrt(ab_t) * eps - sqrt(1 - ab_t) * z0.
inline Tensor v_from_eps_z0(const Tensor& eps, const Tensor& z0, int t,
                            const NoiseSchedule& sched) {
    require_same_shape(eps, z0, "v_from_eps_z0(eps, z0)");
    const double ab = sched.alpha_bar_at(t);
    return axpby(std::sqrt(ab), eps,
                 -std::sqrt(1.0 - ab), z0);
}

// Inversion of the v-parameterization:
//   z0_hat  = sqrt(ab_t) * z_t - sqrt(1 - ab_t) * v
//   eps_hat = sqrt(1 - ab_t) * z_t + sqrt(ab_t) * v
// Reconstructing z_t from (z0_hat, eps_hat) via add_noise is exact.
inline std::pair<Tensor, Tensor> z0_eps_from_v(const Tensor& zt, const Tensor& v, int t,
                                               const NoiseSchedule& sched) {
    require_same_shape(zt, v, "z0_eps_from_v(zt, v)");
    const double ab = sched.alpha_bar_at(t);
    const double sa = std::sqrt(ab);
    const double sb = std::sqrt(1.0 - ab);
    Tensor z0_hat = axpby(sa, zt, -sb, v);
    Tensor eps_hat = axpby(sb, zt, sa, v);
    return {std::move(z0_hat), std::move(eps_hat)};
}

// Deterministic (eta = 0) DDIM update:
//   z_{t_next} = sqrt(ab_next) * z0_hat + sqrt(1 - ab_next) * eps_hat.
// At t_next = 0 this returns z0_hat exactly (ab_0 = 1).
inline Tensor ddim_step(const Tensor& zt, const Tensor& v_hat, int t_cur, int t_next,
                        const NoiseSchedule& sched) {
    if (t_next >= t_cur)
        throw ParamError("ddim_step requires t_next < t_cur, got " + std::to_string(t_cur) +
                         " -> " + std::to_string(t_next));
    auto [z0_hat, eps_hat] = z0_eps_from_v(zt, v_hat, t_cur, sched);
    const double ab_next = sched.alpha_bar_at(t_next);
    return axpby(std::sqrt(ab_next), z0_hat,
                 std::sqrt(1.0 - ab_next), eps_hat);
}

// Classifier-free guidance, applied in v-space:
//   guided = uncond + scale * (cond - uncond).
inline Tensor cfg_combine(const Tensor& uncond, const Tensor& cond, double scale) {
    require_same_shape(uncond, cond, "cfg_combine(uncond, cond)");
    if (scale < 0.0) throw ParamError("cfg scale must be >= 0");
    return axpby(1.0 - scale, uncond, scale, cond);
}

}  // namespace clc
