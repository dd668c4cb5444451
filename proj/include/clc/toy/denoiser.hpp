#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "clc/core/rng.hpp"
#include "clc/core/tensor.hpp"
#include "clc/sampler/generate.hpp"

namespace clc::toy {

using MatF = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic>;
using VecF = Eigen::VectorXf;

// Compact conditioned v-predictor: a stack of 3x3 convolutions over the
// latent grid with the conditioning broadcast as extra input channels.
// Activations are channel-major matrices (channels x h*w); convolutions run
// as im2col + GEMM in float32. Well under 2M parameters.

struct Conv3x3 {
    int in_ch = 0, out_ch = 0;
    MatF W;  // out_ch x (in_ch * 9)
    VecF b;  // out_ch

    void init(int in, int out, Rng& rng, double scale) {
        in_ch = in;
        out_ch = out;
        W.resize(out, in * 9);
        b.setZero(out);
        const double stddev = scale / std::sqrt(static_cast<double>(in * 9));
        for (int j = 0; j < W.cols(); ++j)
            for (int i = 0; i < W.rows(); ++i)
                W(i, j) = static_cast<float>(stddev * rng.normal());
    }

    std::size_t param_count() const { return static_cast<std::size_t>(W.size()) + b.size(); }
};

inline void im2col(const MatF& x, int h, int w, MatF& col) {
    const int ch = static_cast<int>(x.rows());
    col.resize(ch * 9, h * w);
    for (int c = 0; c < ch; ++c) {
        for (int k = 0; k < 9; ++k) {
            const int ky = k / 3 - 1, kx = k % 3 - 1;
            const int r = c * 9 + k;
            for (int y = 0; y < h; ++y) {
                const int sy = y + ky;
                for (int xx = 0; xx < w; ++xx) {
                    const int sx = xx + kx;
                    const bool inside = sy >= 0 && sy < h && sx >= 0 && sx < w;
                    col(r, y * w + xx) = inside ? x(c, sy * w + sx) : 0.0f;
                }
            }
        }
    }
}

inline void col2im_add(const MatF& dcol, int h, int w, MatF& dx) {
    const int ch = static_cast<int>(dx.rows());
    for (int c = 0; c < ch; ++c)
        for (int k = 0; k < 9; ++k) {
            const int ky = k / 3 - 1, kx = k % 3 - 1;
            for (int y = 0; y < h; ++y) {
                const int sy = y + ky;
                if (sy < 0 || sy >= h) continue;
                for (int xx = 0; xx < w; ++xx) {
                    const int sx = xx + kx;
                    if (sx < 0 || sx >= w) continue;
                    dx(c, sy * w + sx) += dcol(c * 9 + k, y * w + xx);
                }
            }
        }
}

inline float silu(float x) { return x / (1.0f + std::exp(-x)); }
inline float silu_grad(float x) {
    const float s = 1.0f / (1.0f + std::exp(-x));
    return s * (1.0f + x * (1.0f - s));
}

struct ToyArch {
    int latent_channels = 48;
    int latent_h = 16;
    int latent_w = 16;
    int factor = 4;
    int hidden = 48;
    int depth = 4;  // number of conv layers
    int t_train = 1000;
    int appearance_dim = 4;
    int t_feature_dim = 6;
    int motion_side_channels = 1;

    int input_channels() const {
        return latent_channels + motion_side_channels + t_feature_dim + appearance_dim;
    }
    int pixels() const { return latent_h * latent_w; }
};

// Scratch buffers for one forward/backward pass; reused across steps so the
// training loop does not allocate.
struct NetWorkspace {
    std::vector<MatF> act;   // act[0] = input features, act[i] = layer i output
    std::vector<MatF> pre;   // pre-activation of hidden layers
    std::vector<MatF> col;   // im2col buffers
    std::vector<MatF> dact;
};

class ToyDenoiser final : public Denoiser {
public:
    ToyDenoiser() = default;

    ToyDenoiser(const ToyArch& arch, std::uint64_t init_seed) : arch_(arch) {
        Rng rng(init_seed);
        layers_.resize(arch.depth);
        const int in0 = arch.input_channels();
        for (int i = 0; i < arch.depth; ++i) {
            const int in = i == 0 ? in0 : arch.hidden;
            const int out = i == arch.depth - 1 ? arch.latent_channels : arch.hidden;
            // final projection starts at zero so the untrained net predicts v = 0
            layers_[i].init(in, out, rng, i == arch.depth - 1 ? 0.0 : 1.0);
        }
    }

    const ToyArch& arch() const { return arch_; }
    std::vector<Conv3x3>& layers() { return layers_; }
    const std::vector<Conv3x3>& layers() const { return layers_; }

    std::size_t param_count() const {
        std::size_t n = 0;
        for (const auto& l : layers_) n += l.param_count();
        return n;
    }

    // Assembles the input feature matrix from latent, timestep and
    // conditioning. Row layout: latent channels, motion side channel(s),
    // timestep features, appearance features (broadcast).
    void assemble_features(const Tensor& z, int t, const Conditioning& cond, MatF& feat) const {
        const int hw = arch_.pixels();
        if (z.channels() != arch_.latent_channels || z.height() != arch_.latent_h ||
            z.width() != arch_.latent_w)
            throw ShapeError("latent " + z.shape_str() + " does not match the toy arch");
        feat.resize(arch_.input_channels(), hw);
        int row = 0;
        for (int c = 0; c < arch_.latent_channels; ++c, ++row)
            for (int i = 0; i < hw; ++i)
                feat(row, i) = static_cast<float>(z[static_cast<std::size_t>(c) * hw + i]);
        for (int mc = 0; mc < arch_.motion_side_channels; ++mc, ++row) {
            if (cond.motion) {
                const Tensor& m = *cond.motion;
                require_same_shape(m, z, "motion vs latent");
                for (int i = 0; i < hw; ++i)
                    feat(row, i) = static_cast<float>(m[static_cast<std::size_t>(mc) * hw + i]);
            } else {
                feat.row(row).setZero();
            }
        }
        const double tau = static_cast<double>(t) / arch_.t_train;
        const double pi = 3.14159265358979323846;
        const double tf[6] = {2.0 * tau - 1.0, std::sin(pi * tau),   std::cos(pi * tau),
                              std::sin(2.0 * pi * tau), std::cos(2.0 * pi * tau),
                              std::sin(4.0 * pi * tau)};
        for (int k = 0; k < arch_.t_feature_dim; ++k, ++row)
            feat.row(row).setConstant(static_cast<float>(tf[k]));
        for (int k = 0; k < arch_.appearance_dim; ++k, ++row) {
            const double v = cond.appearance && static_cast<int>(cond.appearance->size()) > k
                                 ? (*cond.appearance)[k]
                                 : 0.0;
            feat.row(row).setConstant(static_cast<float>(v));
        }
    }

    // Forward pass through the conv stack; keeps intermediates in ws for a
    // later backward pass.
    const MatF& forward(NetWorkspace& ws) const {
        const int L = static_cast<int>(layers_.size());
        ws.pre.resize(L);
        ws.col.resize(L);
        if (static_cast<int>(ws.act.size()) != L + 1) ws.act.resize(L + 1);
        for (int i = 0; i < L; ++i) {
            im2col(ws.act[i], arch_.latent_h, arch_.latent_w, ws.col[i]);
            ws.pre[i].noalias() = layers_[i].W * ws.col[i];
            ws.pre[i].colwise() += layers_[i].b;
            if (i + 1 < L) {
                ws.act[i + 1] = ws.pre[i].unaryExpr([](float v) { return silu(v); });
            } else {
                ws.act[i + 1] = ws.pre[i];
            }
        }
        return ws.act[L];
    }

    Tensor predict_v(const Tensor& z, int t, const Conditioning& cond) const override {
        thread_local NetWorkspace ws;
        if (ws.act.empty()) ws.act.resize(layers_.size() + 1);
        assemble_features(z, t, cond, ws.act[0]);
        const MatF& out = forward(ws);
        Tensor v(arch_.latent_channels, arch_.latent_h, arch_.latent_w, arch_.factor);
        const int hw = arch_.pixels();
        for (int c = 0; c < arch_.latent_channels; ++c)
            for (int i = 0; i < hw; ++i)
                v[static_cast<std::size_t>(c) * hw + i] = out(c, i);
        return v;
    }

private:
    ToyArch arch_;
    std::vector<Conv3x3> layers_;
};

}  // namespace clc::toy
