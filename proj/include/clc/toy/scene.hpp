#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "clc/core/errors.hpp"
#include "clc/core/image.hpp"
#include "clc/core/rng.hpp"

namespace clc::toy {

// Synthetic "moving shape" scenes: a saturated colored shape travelling over
// a grayscale background. Backgrounds carry no chroma so the shape is
// recoverable by a chroma detector, and their pattern is deliberately NOT
// part of the conditioning: a generator must commit to one of several
// plausible backgrounds per frame, which is exactly the ambiguity the
// feedback loop is meant to stabilize.

enum class ShapeKind { disc, square };

struct Vec2 {
    double x = 0.0, y = 0.0;
};

// Indefinitely extendable center path. Lines bounce off the canvas margins
// so streams of any length stay in frame.
struct Trajectory {
    enum class Kind { fixed, line, circle };
    Kind kind = Kind::fixed;
    Vec2 start{32.0, 32.0};
    Vec2 velocity{0.0, 0.0};   // line: pixels per frame
    double orbit_radius = 0.0; // circle
    double omega = 0.0;        // circle: radians per frame
    double phase = 0.0;
    double margin_lo = 0.0, margin_hi = 0.0;  // line bounce bounds (per axis)

    Vec2 at(int k) const {
        switch (kind) {
            case Kind::fixed:
                return start;
            case Kind::circle:
                return {start.x + orbit_radius * std::cos(phase + omega * k),
                        start.y + orbit_radius * std::sin(phase + omega * k)};
            case Kind::line: {
                auto bounce = [](double p, double lo, double hi) {
                    const double span = hi - lo;
                    if (span <= 0.0) return lo;
                    double q = std::fmod(p - lo, 2.0 * span);
                    if (q < 0.0) q += 2.0 * span;
                    return lo + (q <= span ? q : 2.0 * span - q);
                };
                return {bounce(start.x + velocity.x * k, margin_lo, margin_hi),
                        bounce(start.y + velocity.y * k, margin_lo, margin_hi)};
            }
        }
        return start;
    }
};

// Grayscale background patterns; id selects the gradient direction.
struct Background {
    int pattern_id = 0;  // 0 flat, 1 horizontal, 2 vertical, 3 diag down, 4 diag up
    double level_lo = 0.3;
    double level_hi = 0.7;

    double level_at(double x, double y, int canvas) const {
        const double n = canvas > 1 ? canvas - 1.0 : 1.0;
        double t = 0.0;
        switch (pattern_id) {
            case 0: t = 0.0; break;
            case 1: t = x / n; break;
            case 2: t = y / n; break;
            case 3: t = (x + y) / (2.0 * n); break;
            case 4: t = (x + (n - y)) / (2.0 * n); break;
            default: throw ParamError("unknown background pattern " + std::to_string(pattern_id));
        }
        return level_lo + (level_hi - level_lo) * t;
    }
};

struct SceneSpec {
    int canvas = 64;
    ShapeKind shape = ShapeKind::disc;
    double color[3] = {0.9, 0.2, 0.2};  // [0,1], saturated
    double radius = 8.0;
    Trajectory trajectory;
    Background background;
    double fps = 20.0;
};

namespace detail {
inline double disc_coverage(double dx, double dy, double radius) {
    const double d = std::sqrt(dx * dx + dy * dy);
    return std::clamp(radius + 0.5 - d, 0.0, 1.0);
}
inline double square_coverage(double dx, double dy, double radius) {
    const double cx = std::clamp(radius + 0.5 - std::fabs(dx), 0.0, 1.0);
    const double cy = std::clamp(radius + 0.5 - std::fabs(dy), 0.0, 1.0);
    return cx * cy;
}
}  // namespace detail

inline Image render_frame(const SceneSpec& spec, int k) {
    const Vec2 c = spec.trajectory.at(k);
    const double r = spec.radius;
    if (r <= 0.0) throw ParamError("shape radius must be positive");
    if (c.x < r || c.y < r || c.x > spec.canvas - 1 - r || c.y > spec.canvas - 1 - r)
        throw ParamError("trajectory leaves canvas margins at frame " + std::to_string(k));

    Image img(spec.canvas, spec.canvas);
    for (int y = 0; y < spec.canvas; ++y) {
        for (int x = 0; x < spec.canvas; ++x) {
            const double bg = spec.background.level_at(x, y, spec.canvas);
            const double a = spec.shape == ShapeKind::disc
                                 ? detail::disc_coverage(x - c.x, y - c.y, r)
                                 : detail::square_coverage(x - c.x, y - c.y, r);
            for (int ch = 0; ch < 3; ++ch) {
                const double v = a * spec.color[ch] + (1.0 - a) * bg;
                img.at(y, x, ch) = static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
            }
        }
    }
    return img;
}

inline VideoClip render_clip(const SceneSpec& spec, int n_frames) {
    if (n_frames < 1) throw ParamError("n_frames must be >= 1");
    VideoClip clip;
    clip.fps = spec.fps;
    clip.frames.reserve(n_frames);
    for (int k = 0; k < n_frames; ++k) clip.frames.push_back(render_frame(spec, k));
    return clip;
}

// Randomized scene family used for dataset synthesis. Shape color and size
// are later exposed to the model through the appearance features; the
// background never is.
inline SceneSpec random_scene(Rng& rng, int canvas = 64) {
    SceneSpec spec;
    spec.canvas = canvas;
    spec.shape = rng.uniform() < 0.5 ? ShapeKind::disc : ShapeKind::square;
    spec.radius = 6.0 + 4.0 * rng.uniform() * (canvas / 64.0);

    // saturated color via hsv -> rgb, value/saturation pinned high
    const double h = rng.uniform() * 6.0;
    const double s = 0.8 + 0.2 * rng.uniform();
    const double v = 0.85 + 0.15 * rng.uniform();
    const int sector = static_cast<int>(h) % 6;
    const double f = h - std::floor(h);
    const double p = v * (1.0 - s), q = v * (1.0 - s * f), t = v * (1.0 - s * (1.0 - f));
    const double table[6][3] = {{v, t, p}, {q, v, p}, {p, v, t}, {p, q, v}, {t, p, v}, {v, p, q}};
    for (int i = 0; i < 3; ++i) spec.color[i] = table[sector][i];

    spec.background.pattern_id = static_cast<int>(rng.uniform_below(5));
    spec.background.level_lo = 0.15 + 0.3 * rng.uniform();
    spec.background.level_hi = 0.55 + 0.3 * rng.uniform();

    const double margin = spec.radius + 1.5;
    const double lo = margin, hi = canvas - 1 - margin;
    auto in_span = [&](double frac) { return lo + (hi - lo) * frac; };
    if (rng.uniform() < 0.5) {
        spec.trajectory.kind = Trajectory::Kind::line;
        spec.trajectory.start = {in_span(rng.uniform()), in_span(rng.uniform())};
        const double speed = 0.8 + 1.2 * rng.uniform();
        const double ang = rng.uniform() * 2.0 * 3.14159265358979323846;
        spec.trajectory.velocity = {speed * std::cos(ang), speed * std::sin(ang)};
        spec.trajectory.margin_lo = lo;
        spec.trajectory.margin_hi = hi;
    } else {
        spec.trajectory.kind = Trajectory::Kind::circle;
        const double orbit = 6.0 + rng.uniform() * ((hi - lo) / 2.0 - 6.0);
        const double cx = (lo + hi) / 2.0 + (rng.uniform() - 0.5) * (hi - lo - 2.0 * orbit);
        const double cy = (lo + hi) / 2.0 + (rng.uniform() - 0.5) * (hi - lo - 2.0 * orbit);
        spec.trajectory.start = {cx, cy};
        spec.trajectory.orbit_radius = orbit;
        spec.trajectory.omega = 2.0 * 3.14159265358979323846 / (25.0 + 35.0 * rng.uniform());
        spec.trajectory.phase = rng.uniform() * 2.0 * 3.14159265358979323846;
    }
    return spec;
}

}  // namespace clc::toy
