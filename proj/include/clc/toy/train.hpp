#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "clc/core/rng.hpp"
#include "clc/diffusion/ops.hpp"
#include "clc/toy/codec.hpp"
#include "clc/toy/denoiser.hpp"
#include "clc/toy/encoders.hpp"
#include "clc/toy/scene.hpp"

namespace clc::toy {

struct TrainConfig {
    int steps = 8000;
    int batch_size = 8;
    double lr = 2e-3;
    double p_drop = 0.1;
    std::uint64_t seed = 0;
    std::string loss_target = "v";  // "v" (default) or "eps"
    int val_every = 0;              // 0 -> steps / 4
    int val_probes = 64;
};

struct TrainReport {
    std::vector<double> loss_curve;                 // one entry per step
    std::vector<std::pair<int, double>> val_points; // (step, held-out L1)
};

namespace detail {

struct Gradients {
    std::vector<MatF> dW;
    std::vector<VecF> db;

    void init(const ToyDenoiser& net) {
        dW.clear();
        db.clear();
        for (const auto& l : net.layers()) {
            dW.emplace_back(MatF::Zero(l.W.rows(), l.W.cols()));
            db.emplace_back(VecF::Zero(l.b.size()));
        }
    }
    void zero() {
        for (auto& m : dW) m.setZero();
        for (auto& v : db) v.setZero();
    }
};

struct Adam {
    std::vector<MatF> mW, vW;
    std::vector<VecF> mb, vb;
    double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    long long t = 0;

    void init(const ToyDenoiser& net) {
        for (const auto& l : net.layers()) {
            mW.emplace_back(MatF::Zero(l.W.rows(), l.W.cols()));
            vW.emplace_back(MatF::Zero(l.W.rows(), l.W.cols()));
            mb.emplace_back(VecF::Zero(l.b.size()));
            vb.emplace_back(VecF::Zero(l.b.size()));
        }
    }

    void step(ToyDenoiser& net, const Gradients& g, double lr) {
        ++t;
        const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(t));
        const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(t));
        const float a = static_cast<float>(lr * std::sqrt(bc2) / bc1);
        for (std::size_t i = 0; i < net.layers().size(); ++i) {
            auto& l = net.layers()[i];
            mW[i] = beta1 * mW[i] + (1.0 - beta1) * g.dW[i];
            vW[i] = beta2 * vW[i].array().matrix() +
                    (1.0 - beta2) * g.dW[i].array().square().matrix();
            l.W.array() -= a * mW[i].array() / (vW[i].array().sqrt() + static_cast<float>(eps));
            mb[i] = beta1 * mb[i] + (1.0 - beta1) * g.db[i];
            vb[i] = beta2 * vb[i].array().matrix() +
                    (1.0 - beta2) * g.db[i].array().square().matrix();
            l.b.array() -= a * mb[i].array() / (vb[i].array().sqrt() + static_cast<float>(eps));
        }
    }
};

// Backward through the conv stack. dOut is dL/d(final activation); gradients
// are accumulated into g so a batch can sum sample contributions.
inline void backward(const ToyDenoiser& net, NetWorkspace& ws, const MatF& dOut, Gradients& g,
                     const ToyArch& arch) {
    const int L = static_cast<int>(net.layers().size());
    ws.dact.resize(L + 1);
    ws.dact[L] = dOut;
    for (int i = L - 1; i >= 0; --i) {
        MatF dPre;
        if (i == L - 1) {
            dPre = ws.dact[L];
        } else {
            dPre = ws.dact[i + 1].binaryExpr(
                ws.pre[i], [](float d, float p) { return d * silu_grad(p); });
        }
        g.db[i] += dPre.rowwise().sum();
        g.dW[i].noalias() += dPre * ws.col[i].transpose();
        if (i > 0) {
            MatF dcol;
            dcol.noalias() = net.layers()[i].W.transpose() * dPre;
            ws.dact[i].setZero(net.layers()[i].in_ch, arch.pixels());
            col2im_add(dcol, arch.latent_h, arch.latent_w, ws.dact[i]);
        }
    }
}

}  // namespace detail

// One precomputed training sample view: everything but the noise.
struct ClipCache {
    std::vector<Image> frames;
    std::vector<std::vector<double>> appearance;  // per frame
    std::vector<Vec2> keypoints;                  // per frame
    std::vector<bool> valid;
};

inline ClipCache cache_clip(const VideoClip& clip) {
    ClipCache c;
    c.frames = clip.frames;
    c.appearance.reserve(clip.frames.size());
    c.keypoints.reserve(clip.frames.size());
    for (const auto& f : clip.frames) {
        c.appearance.push_back(encode_appearance(f));
        const auto det = detect_shape(f);
        c.keypoints.push_back(det ? Vec2{det->x, det->y} : Vec2{});
        c.valid.push_back(det.has_value());
    }
    return c;
}

// Per-frame training recipe: sample a (source, driving) pair from one clip,
// noise the driving frame's latent, predict v (or eps) under conditioning
// dropout, take an L1 step. No operation ever sees two generated frames
// jointly.
inline std::pair<ToyDenoiser, TrainReport> train_toy(const std::vector<VideoClip>& train_clips,
                                                     const std::vector<VideoClip>& val_clips,
                                                     const NoiseSchedule& sched,
                                                     const ToyArch& arch, const TrainConfig& cfg) {
    if (train_clips.empty()) throw ParamError("training dataset is empty");
    if (cfg.loss_target != "v" && cfg.loss_target != "eps")
        throw ParamError("loss_target must be 'v' or 'eps'");

    const BlockCodec codec(arch.factor);
    const MotionEncoder menc{arch.latent_channels, arch.latent_h, arch.latent_w, arch.factor};

    std::vector<ClipCache> train_cache, val_cache;
    for (const auto& c : train_clips) train_cache.push_back(cache_clip(c));
    for (const auto& c : val_clips) val_cache.push_back(cache_clip(c));

    ToyDenoiser net(arch, cfg.seed);
    detail::Gradients grads;
    grads.init(net);
    detail::Adam adam;
    adam.init(net);

    Rng rng(cfg.seed);

    // Frozen held-out probes: fixed (clip, source, driving, t, eps) tuples.
    struct Probe {
        int clip, src, drv, t;
        Tensor eps;
    };
    std::vector<Probe> probes;
    if (!val_cache.empty()) {
        Rng vrng(cfg.seed + 0x9e3779b97f4a7c15ull);
        for (int i = 0; i < cfg.val_probes; ++i) {
            Probe p;
            p.clip = static_cast<int>(vrng.uniform_below(val_cache.size()));
            const auto n = val_cache[p.clip].frames.size();
            p.src = static_cast<int>(vrng.uniform_below(n));
            p.drv = static_cast<int>(vrng.uniform_below(n));
            p.t = 1 + static_cast<int>(vrng.uniform_below(sched.t_train));
            p.eps = vrng.normal_tensor(arch.latent_channels, arch.latent_h, arch.latent_w,
                                       arch.factor);
            probes.push_back(std::move(p));
        }
    }

    NetWorkspace ws;
    ws.act.resize(arch.depth + 1);
    TrainReport report;
    const int val_every = cfg.val_every > 0 ? cfg.val_every : std::max(1, cfg.steps / 4);

    auto run_probe_loss = [&](const std::vector<ClipCache>& cache) {
        double total = 0.0;
        for (const auto& p : probes) {
            const auto& cc = cache[p.clip];
            const Tensor z0 = codec.encode(cc.frames[p.drv]);
            const Tensor zt = add_noise(z0, p.eps, p.t, sched);
            const Tensor target = cfg.loss_target == "v"
                                      ? v_from_eps_z0(p.eps, z0, p.t, sched)
                                      : p.eps;
            const Tensor m = menc.encode(cc.keypoints[p.drv].x, cc.keypoints[p.drv].y);
            Conditioning cond{&cc.appearance[p.src], &m};
            net.assemble_features(zt, p.t, cond, ws.act[0]);
            const MatF& out = net.forward(ws);
            double l1 = 0.0;
            const int hw = arch.pixels();
            for (int c = 0; c < arch.latent_channels; ++c)
                for (int i = 0; i < hw; ++i)
                    l1 += std::fabs(out(c, i) - target[static_cast<std::size_t>(c) * hw + i]);
            total += l1 / (static_cast<double>(arch.latent_channels) * hw);
        }
        return total / probes.size();
    };

    if (!probes.empty()) report.val_points.emplace_back(0, run_probe_loss(val_cache));

    const int hw = arch.pixels();
    MatF dOut(arch.latent_channels, hw);

    for (int step = 1; step <= cfg.steps; ++step) {
        grads.zero();
        double batch_loss = 0.0;
        for (int b = 0; b < cfg.batch_size; ++b) {
            const int ci = static_cast<int>(rng.uniform_below(train_cache.size()));
            const auto& cc = train_cache[ci];
            const int n = static_cast<int>(cc.frames.size());
            const int src = static_cast<int>(rng.uniform_below(n));
            const int drv = static_cast<int>(rng.uniform_below(n));
            const int t = 1 + static_cast<int>(rng.uniform_below(sched.t_train));
            const Tensor z0 = codec.encode(cc.frames[drv]);
            const Tensor eps =
                rng.normal_tensor(arch.latent_channels, arch.latent_h, arch.latent_w, arch.factor);
            const Tensor zt = add_noise(z0, eps, t, sched);
            const Tensor target = cfg.loss_target == "v" ? v_from_eps_z0(eps, z0, t, sched) : eps;

            const bool drop = rng.uniform() < cfg.p_drop;
            Tensor m;
            Conditioning cond;
            if (!drop) {
                m = menc.encode(cc.keypoints[drv].x, cc.keypoints[drv].y);
                cond.appearance = &cc.appearance[src];
                cond.motion = &m;
            }

            net.assemble_features(zt, t, cond, ws.act[0]);
            const MatF& out = net.forward(ws);

            const float inv = 1.0f / (static_cast<float>(cfg.batch_size) *
                                      arch.latent_channels * hw);
            for (int c = 0; c < arch.latent_channels; ++c)
                for (int i = 0; i < hw; ++i) {
                    const float diff =
                        out(c, i) - static_cast<float>(target[static_cast<std::size_t>(c) * hw + i]);
                    batch_loss += std::fabs(diff);
                    dOut(c, i) = diff > 0.0f ? inv : (diff < 0.0f ? -inv : 0.0f);
                }
            detail::backward(net, ws, dOut, grads, arch);
        }
        batch_loss /= static_cast<double>(cfg.batch_size) * arch.latent_channels * hw;
        if (!std::isfinite(batch_loss))
            throw NumericDivergenceError("training loss diverged at step " + std::to_string(step));
        report.loss_curve.push_back(batch_loss);
        adam.step(net, grads, cfg.lr);

        if (!probes.empty() && step % val_every == 0)
            report.val_points.emplace_back(step, run_probe_loss(val_cache));
    }

    return {std::move(net), std::move(report)};
}

}  // namespace clc::toy
