#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "clc/core/image.hpp"
#include "clc/core/rng.hpp"
#include "clc/core/tensor.hpp"
#include "clc/diffusion/ops.hpp"
#include "clc/diffusion/schedule.hpp"
#include "clc/sampler/feedback.hpp"

namespace clc {

// Conditioning handed to a denoiser call. Null pointers mean the
// unconditional branch of classifier-free guidance; appearance and motion
// are dropped jointly.
struct Conditioning {
    const std::vector<double>* appearance = nullptr;
    const Tensor* motion = nullptr;

    static Conditioning null() { return {}; }
    bool is_null() const { return appearance == nullptr && motion == nullptr; }
};

// Abstract denoiser: predicts v from (latent, timestep, conditioning).
// Implementations must be deterministic and safe for concurrent calls.
class Denoiser {
public:
    virtual ~Denoiser() = default;
    virtual Tensor predict_v(const Tensor& z, int t, const Conditioning& cond) const = 0;
};

// Appearance features fixed per video plus one motion encoding per frame,
// each shaped like the latent. Opaque to the sampler.
struct ConditioningBundle {
    std::vector<double> appearance;
    std::vector<Tensor> motion;
};

struct GeneratedFrame {
    int index = 0;
    Tensor z0_hat;  // fully denoised latent of this frame
    Tensor x;       // sampler input before motion was added
};

// Optional hook mapping a final latent to a decoded image; the sampler
// itself never depends on any concrete decoder.
using DecodeFn = std::function<Image(const Tensor&)>;

// Pull-based motion source for unbounded generation. Returns nullopt when
// the stream ends.
using MotionSource = std::function<std::optional<Tensor>()>;

// Streaming generator for the feedback-controlled frame loop. Holds only
// z_T and the running sampler input x between frames, so memory stays
// constant no matter how many frames are pulled.
class FrameStream {
public:
    FrameStream(const Denoiser& denoiser, std::vector<double> appearance,
                MotionSource motion_source, const NoiseSchedule& sched,
                const FeedbackConfig& cfg)
        : denoiser_(denoiser),
          appearance_(std::move(appearance)),
          motion_source_(std::move(motion_source)),
          sched_(sched),
          cfg_(cfg),
          rng_(cfg.seed) {
        cfg_.validate();
        sched_.validate();
    }

    // Runs the full DDIM chain for the next frame, applies the state
    // update, and returns the frame. nullopt once the motion source ends.
    std::optional<GeneratedFrame> next() {
        std::optional<Tensor> motion = motion_source_();
        if (!motion) return std::nullopt;

        if (frame_index_ == 0) {
            z_T_ = rng_.normal_tensor(motion->channels(), motion->height(), motion->width(),
                                      motion->downsample_factor());
            x_ = z_T_;  // x_1 <- z_T
        } else if (cfg_.noise_mode == NoiseMode::independent_per_frame) {
            // Fresh z_T per frame; the feedback anchor is this frame's own
            // draw, so the ablation changes exactly one thing.
            z_T_ = rng_.normal_tensor(motion->channels(), motion->height(), motion->width(),
                                      motion->downsample_factor());
            x_ = feedback_update(z_T_, x_, cfg_.beta);  // x_ holds z0_hat of frame k-1 here
        } else {
            x_ = feedback_update(z_T_, x_, cfg_.beta);
        }

        require_same_shape(*motion, x_, "motion encoding vs latent");

        GeneratedFrame frame;
        frame.index = frame_index_;
        frame.x = x_;

        // Motion is added to the noise input once, to seed the chain; the
        // denoiser also receives it as a side input at every step.
        Tensor z = add(x_, *motion);
        Conditioning cond{&appearance_, &*motion};

        for (auto [t_cur, t_next] : sched_.ddim_pairs()) {
            Tensor v = denoiser_.predict_v(z, t_cur, cond);
            if (cfg_.cfg_scale != 1.0) {
                Tensor v_uncond = denoiser_.predict_v(z, t_cur, Conditioning::null());
                v = cfg_combine(v_uncond, v, cfg_.cfg_scale);
            }
            z = ddim_step(z, v, t_cur, t_next, sched_);
            if (!z.all_finite())
                throw NumericDivergenceError("non-finite latent at frame " +
                                             std::to_string(frame_index_) + ", timestep " +
                                             std::to_string(t_next));
        }

        frame.z0_hat = z;
        // Park z0_hat in x_; the next call folds it through feedback_update.
        x_ = std::move(z);
        ++frame_index_;
        return frame;
    }

    const Tensor& z_T() const { return z_T_; }

    // Latent grids retained across frames (z_T, x). The audit hook for the
    // constant-memory contract.
    int resident_latents() const { return 2; }

private:
    const Denoiser& denoiser_;
    std::vector<double> appearance_;
    MotionSource motion_source_;
    NoiseSchedule sched_;
    FeedbackConfig cfg_;
    Rng rng_;
    Tensor z_T_;
    Tensor x_;
    int frame_index_ = 0;
};

// Full trace of a bounded generation run: per-frame final latents and
// sampler inputs, the shared z_T, and (when a decoder is supplied) the
// decoded frames.
struct GenerationTrace {
    std::vector<Tensor> z0_hat;
    std::vector<Tensor> x;
    Tensor z_T;
    std::vector<Image> frames;
};

// Batch variant: collects n_frames from the same streaming loop, so any
// prefix of a stream is bit-identical to a batch run of that length.
inline GenerationTrace generate_video(const Denoiser& denoiser, const ConditioningBundle& cond,
                                      const NoiseSchedule& sched, const FeedbackConfig& cfg,
                                      int n_frames, const DecodeFn& decode = nullptr) {
    if (n_frames < 1) throw ParamError("n_frames must be >= 1");
    if (static_cast<int>(cond.motion.size()) < n_frames)
        throw ParamError("motion sequence has " + std::to_string(cond.motion.size()) +
                         " entries, need " + std::to_string(n_frames));

    std::size_t cursor = 0;
    MotionSource source = [&cond, &cursor, n_frames]() -> std::optional<Tensor> {
        if (cursor >= static_cast<std::size_t>(n_frames)) return std::nullopt;
        return cond.motion[cursor++];
    };

    FrameStream stream(denoiser, cond.appearance, std::move(source), sched, cfg);
    GenerationTrace trace;
    trace.z0_hat.reserve(n_frames);
    trace.x.reserve(n_frames);
    while (auto frame = stream.next()) {
        if (trace.z0_hat.empty()) trace.z_T = stream.z_T();
        if (decode) trace.frames.push_back(decode(frame->z0_hat));
        trace.x.push_back(std::move(frame->x));
        trace.z0_hat.push_back(std::move(frame->z0_hat));
    }
    return trace;
}

}  // namespace clc
