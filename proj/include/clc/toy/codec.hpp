#pragma once

#include <cmath>

#include "clc/core/image.hpp"
#include "clc/core/tensor.hpp"

namespace clc::toy {

// Fixed, training-free stand-in for the frozen autoencoder: a space-to-depth
// block transform with downsampling factor f. Each f x f pixel block maps to
// 3*f*f latent channels, bytes rescaled to [-1, 1]. The permutation is
// orthogonal, so latent-space Gaussian noise stays Gaussian per pixel, and
// decode(encode(I)) == I exactly (quantization is the identity on the byte
// grid).

class BlockCodec {
public:
    // latent_scale plays the role of the usual latent normalization constant:
    // it brings the latent distribution close to unit variance so the noise
    // schedule's SNR profile matches the data.
    explicit BlockCodec(int f = 4, double latent_scale = 2.0) : f_(f), scale_(latent_scale) {
        if (f <= 0 || (f & (f - 1)) != 0)
            throw ParamError("downsample factor must be a power of two, got " + std::to_string(f));
        if (scale_ <= 0.0) throw ParamError("latent scale must be positive");
    }

    int factor() const { return f_; }
    double latent_scale() const { return scale_; }
    int latent_channels() const { return 3 * f_ * f_; }

    Tensor encode(const Image& img) const {
        if (img.height() % f_ != 0 || img.width() % f_ != 0)
            throw ShapeError("image " + std::to_string(img.width()) + "x" +
                             std::to_string(img.height()) + " not divisible by f=" +
                             std::to_string(f_));
        const int h = img.height() / f_, w = img.width() / f_;
        Tensor z(latent_channels(), h, w, f_);
        for (int by = 0; by < h; ++by)
            for (int bx = 0; bx < w; ++bx)
                for (int dy = 0; dy < f_; ++dy)
                    for (int dx = 0; dx < f_; ++dx)
                        for (int c = 0; c < 3; ++c) {
                            const int ch = (dy * f_ + dx) * 3 + c;
                            const double byte = img.at(by * f_ + dy, bx * f_ + dx, c);
                            z.at(ch, by, bx) = (byte / 255.0 * 2.0 - 1.0) * scale_;
                        }
        return z;
    }

    Image decode(const Tensor& z) const {
        if (z.channels() != latent_channels())
            throw ShapeError("latent has " + std::to_string(z.channels()) +
                             " channels, codec expects " + std::to_string(latent_channels()));
        Image img(z.height() * f_, z.width() * f_);
        for (int by = 0; by < z.height(); ++by)
            for (int bx = 0; bx < z.width(); ++bx)
                for (int dy = 0; dy < f_; ++dy)
                    for (int dx = 0; dx < f_; ++dx)
                        for (int c = 0; c < 3; ++c) {
                            const int ch = (dy * f_ + dx) * 3 + c;
                            const double v = (z.at(ch, by, bx) / scale_ + 1.0) / 2.0 * 255.0;
                            img.at(by * f_ + dy, bx * f_ + dx, c) =
                                static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
                        }
        return img;
    }

private:
    int f_;
    double scale_;
};

}  // namespace clc::toy
