#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "clc/core/errors.hpp"

namespace clc {

namespace detail {
// Global accounting of live tensor payload, used by the streaming-memory
// tests. Updated on every alloc/free; negligible cost next to the math.
inline std::atomic<std::int64_t>& live_tensor_bytes() {
    static std::atomic<std::int64_t> bytes{0};
    return bytes;
}
inline std::atomic<std::int64_t>& live_tensor_count() {
    static std::atomic<std::int64_t> count{0};
    return count;
}

struct TrackedAllocator {
    using value_type = double;
    template <class U>
    struct rebind {
        using other = TrackedAllocator;
    };
    TrackedAllocator() = default;
    TrackedAllocator(const TrackedAllocator&) noexcept = default;
    double* allocate(std::size_t n) {
        live_tensor_bytes() += static_cast<std::int64_t>(n * sizeof(double));
        live_tensor_count() += 1;
        return static_cast<double*>(::operator new(n * sizeof(double)));
    }
    void deallocate(double* p, std::size_t n) noexcept {
        live_tensor_bytes() -= static_cast<std::int64_t>(n * sizeof(double));
        live_tensor_count() -= 1;
        ::operator delete(p);
    }
    bool operator==(const TrackedAllocator&) const { return true; }
    bool operator!=(const TrackedAllocator&) const { return false; }
};
}  // namespace detail

// Dense (c, h, w) tensor in row-major order, double precision. This is the
// latent unit that flows through the diffusion process; downsample_factor
// records the pixel-to-latent ratio f = H/h = W/w (a power of two, 1 when
// untied to any image).
class Tensor {
public:
    Tensor() = default;
    Tensor(int c, int h, int w, int downsample_factor = 1)
        : c_(c), h_(h), w_(w), f_(downsample_factor) {
        if (c <= 0 || h <= 0 || w <= 0)
            throw ShapeError("tensor dims must be positive, got (" + shape_str() + ")");
        if (f_ <= 0 || (f_ & (f_ - 1)) != 0)
            throw ParamError("downsample_factor must be a power of two, got " +
                             std::to_string(f_));
        data_.assign(static_cast<std::size_t>(c) * h * w, 0.0);
    }

    static Tensor like(const Tensor& other) {
        return Tensor(other.c_, other.h_, other.w_, other.f_);
    }

    int channels() const { return c_; }
    int height() const { return h_; }
    int width() const { return w_; }
    int downsample_factor() const { return f_; }
    std::size_t size() const { return data_.size(); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    double& at(int c, int y, int x) { return data_[idx(c, y, x)]; }
    double at(int c, int y, int x) const { return data_[idx(c, y, x)]; }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    bool same_shape(const Tensor& o) const {
        return c_ == o.c_ && h_ == o.h_ && w_ == o.w_;
    }

    std::string shape_str() const {
        return std::to_string(c_) + "x" + std::to_string(h_) + "x" + std::to_string(w_);
    }

    bool all_finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

private:
    std::size_t idx(int c, int y, int x) const {
        return (static_cast<std::size_t>(c) * h_ + y) * w_ + x;
    }

    int c_ = 0, h_ = 0, w_ = 0, f_ = 1;
    std::vector<double, detail::TrackedAllocator> data_;
};

inline void require_same_shape(const Tensor& a, const Tensor& b, const char* what) {
    if (!a.same_shape(b))
        throw ShapeError(std::string(what) + ": " + a.shape_str() + " vs " + b.shape_str());
}

// Elementwise helpers used across the diffusion/sampling code.

inline Tensor axpby(double alpha, const Tensor& a, double beta, const Tensor& b) {
    require_same_shape(a, b, "axpby operands");
    Tensor out = Tensor::like(a);
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) out[i] = alpha * a[i] + beta * b[i];
    return out;
}

inline Tensor add(const Tensor& a, const Tensor& b) { return axpby(1.0, a, 1.0, b); }
inline Tensor sub(const Tensor& a, const Tensor& b) { return axpby(1.0, a, -1.0, b); }

inline Tensor scale(const Tensor& a, double s) {
    Tensor out = Tensor::like(a);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
    return out;
}

inline double l2_norm(const Tensor& a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * a[i];
    return std::sqrt(acc);
}

inline double max_abs_diff(const Tensor& a, const Tensor& b) {
    require_same_shape(a, b, "max_abs_diff operands");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

}  // namespace clc
