#include <catch2/catch_amalgamated.hpp>

#include "clc/core/rng.hpp"
#include "clc/diffusion/ops.hpp"
#include "clc/diffusion/schedule.hpp"

using namespace clc;

namespace {

Tensor scalar_grid(double v) {
    Tensor t(1, 1, 1);
    t[0] = v;
    return t;
}

// Schedule stub whose alpha_bar at t=1 is a chosen value; lets the
// hand-evaluated fixtures pin exact coefficients.
NoiseSchedule stub_schedule(double alpha_bar_1) {
    NoiseSchedule s;
    s.t_train = 1;
    s.beta_min = s.beta_max = 1.0 - alpha_bar_1;
    s.alpha_bar = {1.0, alpha_bar_1};
    s.ddim_steps = {1};
    return s;
}

// Denoiser-free analytic oracle: the true v for a chain targeting z0.
Tensor oracle_v(const Tensor& zt, int t, const Tensor& z0, const NoiseSchedule& s) {
    const double ab = s.alpha_bar_at(t);
    const double sa = std::sqrt(ab), sb = std::sqrt(1.0 - ab);
    // implied eps = (zt - sa*z0)/sb; v = sa*eps - sb*z0
    Tensor v = Tensor::like(zt);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double eps = (zt[i] - sa * z0[i]) / sb;
        v[i] = sa * eps - sb * z0[i];
    }
    return v;
}

}  // namespace

TEST_CASE("add_noise at t=0 is the identity on z0") {
    const auto s = make_linear_schedule(10, 0.1, 0.1, 2);
    Rng rng(1);
    const Tensor z0 = rng.normal_tensor(2, 3, 3);
    const Tensor eps = rng.normal_tensor(2, 3, 3);
    const Tensor zt = add_noise(z0, eps, 0, s);
    REQUIRE(max_abs_diff(zt, z0) == 0.0);
}

TEST_CASE("add_noise hand fixture at alpha_bar 0.25") {
    const auto s = stub_schedule(0.25);
    const auto zt = add_noise(scalar_grid(2.0), scalar_grid(4.0), 1, s);
    // 0.5*2 + sqrt(0.75)*4
    REQUIRE(zt[0] == Catch::Approx(1.0 + 3.4641016151).epsilon(1e-9));
}

TEST_CASE("add_noise preserves unit variance for unit-variance inputs") {
    const auto s = make_linear_schedule(1000, 1e-4, 0.02, 30);
    Rng rng(42);
    for (int t : {1, 250, 500, 999}) {
        double sum = 0.0, sum_sq = 0.0;
        const int n = 100000;
        Tensor z0(1, 1, 1), eps(1, 1, 1);
        for (int i = 0; i < n; ++i) {
            z0[0] = rng.normal();
            eps[0] = rng.normal();
            const double v = add_noise(z0, eps, t, s)[0];
            sum += v;
            sum_sq += v * v;
        }
        const double var = sum_sq / n - (sum / n) * (sum / n);
        REQUIRE(var == Catch::Approx(1.0).margin(0.02));
    }
}

TEST_CASE("add_noise rejects mismatched shapes and bad timesteps") {
    const auto s = make_linear_schedule(10, 0.1, 0.1, 2);
    Tensor a(1, 2, 2), b(1, 3, 3);
    CHECK_THROWS_AS(add_noise(a, b, 1, s), ShapeError);
    Tensor c(1, 2, 2);
    CHECK_THROWS_AS(add_noise(a, c, 11, s), ParamError);
    CHECK_THROWS_AS(add_noise(a, c, -1, s), ParamError);
}

TEST_CASE("v target collapses at the endpoints") {
    // alpha_bar = 1: v = eps
    const auto s1 = make_linear_schedule(10, 0.1, 0.1, 2);
    const auto v1 = v_from_eps_z0(scalar_grid(4.0), scalar_grid(2.0), 0, s1);
    REQUIRE(v1[0] == 4.0);
    // alpha_bar = 0 limit: v = -z0
    auto s0 = stub_schedule(0.5);
    s0.alpha_bar[1] = 0.0;
    const auto v0 = v_from_eps_z0(scalar_grid(4.0), scalar_grid(2.0), 1, s0);
    REQUIRE(v0[0] == -2.0);
}

TEST_CASE("v target hand fixture at alpha_bar 0.25") {
    const auto s = stub_schedule(0.25);
    const auto v = v_from_eps_z0(scalar_grid(4.0), scalar_grid(2.0), 1, s);
    // 0.5*4 - sqrt(0.75)*2 = 0.2679492
    REQUIRE(v[0] == Catch::Approx(0.2679491924).epsilon(1e-9));
}

TEST_CASE("z0/eps recovery hand fixture") {
    const auto s = stub_schedule(0.25);
    const auto [z0_hat, eps_hat] = z0_eps_from_v(scalar_grid(1.0), scalar_grid(2.0), 1, s);
    REQUIRE(z0_hat[0] == Catch::Approx(-1.2320508076).epsilon(1e-9));
    // eps_hat = sqrt(0.75)*1 + 0.5*2
    REQUIRE(eps_hat[0] == Catch::Approx(1.8660254038).epsilon(1e-9));
}

TEST_CASE("z0/eps recovery at alpha_bar 1 returns z_t") {
    const auto s = make_linear_schedule(10, 0.1, 0.1, 2);
    const auto [z0_hat, eps_hat] = z0_eps_from_v(scalar_grid(3.0), scalar_grid(2.0), 0, s);
    REQUIRE(z0_hat[0] == 3.0);
}

TEST_CASE("v/eps/z0 algebraic triangle holds on random cases") {
    const auto s = make_linear_schedule(1000, 1e-4, 0.02, 30);
    Rng rng(7);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const int t = 1 + static_cast<int>(rng.uniform_below(1000));
        Tensor z0(1, 1, 4), eps(1, 1, 4);
        for (int k = 0; k < 4; ++k) {
            z0[k] = rng.normal();
            eps[k] = rng.normal();
        }
        const Tensor v = v_from_eps_z0(eps, z0, t, s);
        const Tensor zt = add_noise(z0, eps, t, s);
        const auto [z0_hat, eps_hat] = z0_eps_from_v(zt, v, t, s);
        const Tensor zt_back = add_noise(z0_hat, eps_hat, t, s);
        worst = std::max({worst, max_abs_diff(z0_hat, z0), max_abs_diff(eps_hat, eps),
                          max_abs_diff(zt_back, zt)});
    }
    REQUIRE(worst < 1e-6);
}

TEST_CASE("ddim_step at t_next=0 returns z0_hat exactly") {
    const auto s = make_linear_schedule(100, 1e-3, 0.02, 5);
    Rng rng(3);
    const Tensor zt = rng.normal_tensor(2, 4, 4);
    const Tensor v = rng.normal_tensor(2, 4, 4);
    const int t = s.ddim_steps.back();
    const Tensor stepped = ddim_step(zt, v, t, 0, s);
    const auto [z0_hat, eps_hat] = z0_eps_from_v(zt, v, t, s);
    REQUIRE(max_abs_diff(stepped, z0_hat) == 0.0);
}

TEST_CASE("ddim_step validates the step pair and shapes") {
    const auto s = make_linear_schedule(100, 1e-3, 0.02, 5);
    Tensor a(1, 2, 2), bad(1, 3, 3);
    CHECK_THROWS_AS(ddim_step(a, a, 50, 50, s), ParamError);
    CHECK_THROWS_AS(ddim_step(a, a, 50, 60, s), ParamError);
    CHECK_THROWS_AS(ddim_step(a, bad, 50, 25, s), ShapeError);
}

TEST_CASE("ddim chain with the analytic oracle inverts forward noising") {
    const auto s = make_linear_schedule(1000, 1e-4, 0.02, 30);
    Rng rng(11);
    const Tensor z0 = rng.normal_tensor(4, 8, 8);
    Tensor z = rng.normal_tensor(4, 8, 8);  // pure noise start
    for (auto [t_cur, t_next] : s.ddim_pairs()) {
        const Tensor v = oracle_v(z, t_cur, z0, s);
        z = ddim_step(z, v, t_cur, t_next, s);
    }
    REQUIRE(max_abs_diff(z, z0) < 1e-5);
}

TEST_CASE("cfg_combine identities and fixture") {
    Rng rng(5);
    const Tensor u = rng.normal_tensor(2, 3, 3);
    const Tensor c = rng.normal_tensor(2, 3, 3);
    REQUIRE(max_abs_diff(cfg_combine(u, c, 1.0), c) == 0.0);
    REQUIRE(max_abs_diff(cfg_combine(u, c, 0.0), u) == 0.0);
    const auto guided = cfg_combine(scalar_grid(0.0), scalar_grid(2.0), 3.5);
    REQUIRE(guided[0] == Catch::Approx(7.0));
    CHECK_THROWS_AS(cfg_combine(u, c, -0.5), ParamError);
}

TEST_CASE("cfg_combine fixes its diagonal for every scale") {
    Rng rng(6);
    const Tensor a = rng.normal_tensor(1, 4, 4);
    for (double sc : {0.0, 0.7, 1.0, 3.5, 9.0})
        REQUIRE(max_abs_diff(cfg_combine(a, a, sc), a) < 1e-12);
}

TEST_CASE("cfg_combine is linear in each argument") {
    Rng rng(8);
    const Tensor u1 = rng.normal_tensor(1, 3, 3), u2 = rng.normal_tensor(1, 3, 3);
    const Tensor c1 = rng.normal_tensor(1, 3, 3), c2 = rng.normal_tensor(1, 3, 3);
    const double sc = 2.5, a = 0.3, b = 0.7;
    const Tensor lhs = cfg_combine(axpby(a, u1, b, u2), axpby(a, c1, b, c2), sc);
    const Tensor rhs = axpby(a, cfg_combine(u1, c1, sc), b, cfg_combine(u2, c2, sc));
    REQUIRE(max_abs_diff(lhs, rhs) < 1e-12);
}
