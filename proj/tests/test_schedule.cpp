#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "clc/diffusion/schedule.hpp"
#include "clc/io/config.hpp"

using namespace clc;

TEST_CASE("linear schedule defaults") {
    const auto s = make_linear_schedule(1000, 1e-4, 0.02, 30);
    REQUIRE(s.alpha_bar.size() == 1001);
    REQUIRE(s.alpha_bar[0] == 1.0);
    REQUIRE(s.ddim_steps.size() == 30);
    REQUIRE(s.ddim_steps.front() == 1000);
    for (std::size_t i = 1; i < s.ddim_steps.size(); ++i)
        REQUIRE(s.ddim_steps[i] < s.ddim_steps[i - 1]);
    for (int t = 1; t <= 1000; ++t) REQUIRE(s.alpha_bar[t] < s.alpha_bar[t - 1]);
    // terminal signal level of the linear 1e-4..0.02 schedule is tiny
    REQUIRE(s.alpha_bar[1000] < 1e-4);
    REQUIRE(s.alpha_bar[1000] > 0.0);
}

TEST_CASE("single-step schedule is the direct product") {
    const auto s = make_linear_schedule(1, 0.5, 0.5, 1);
    REQUIRE(s.alpha_bar.size() == 2);
    REQUIRE(s.alpha_bar[0] == 1.0);
    REQUIRE(s.alpha_bar[1] == Catch::Approx(0.5));
    REQUIRE(s.ddim_steps == std::vector<int>{1});
}

TEST_CASE("schedule parameter validation") {
    CHECK_THROWS_AS(make_linear_schedule(10, 0.1, 0.1, 20), ParamError);  // count > T
    CHECK_THROWS_AS(make_linear_schedule(10, 0.1, 0.1, 0), ParamError);
    CHECK_THROWS_AS(make_linear_schedule(10, 0.0, 0.1, 2), ParamError);
    CHECK_THROWS_AS(make_linear_schedule(10, 0.2, 0.1, 2), ParamError);
    CHECK_THROWS_AS(make_linear_schedule(10, 0.1, 1.0, 2), ParamError);
}

TEST_CASE("alpha_bar equals the running product of (1 - beta_t)") {
    const int T = 100;
    const double b0 = 1e-3, b1 = 5e-2;
    const auto s = make_linear_schedule(T, b0, b1, 10);
    double prod = 1.0;
    for (int t = 1; t <= T; ++t) {
        const double beta = b0 + (b1 - b0) * (t - 1) / (T - 1);
        prod *= 1.0 - beta;
        REQUIRE(s.alpha_bar[t] == Catch::Approx(prod).epsilon(1e-12));
    }
}

TEST_CASE("schedule config round trip") {
    const auto s = make_linear_schedule(500, 2e-4, 0.015, 25);
    std::istringstream in(schedule_to_config(s));
    const auto back = schedule_from_config(in);
    REQUIRE(back.t_train == s.t_train);
    REQUIRE(back.ddim_steps == s.ddim_steps);
    REQUIRE(back.alpha_bar == s.alpha_bar);
    REQUIRE(back.hash() == s.hash());
}

TEST_CASE("schedule config rejects unknown keys") {
    std::istringstream in("t_train = 10\nbeta_min = 0.1\nbeta_max = 0.1\nddim_count = 2\nfoo = 1\n");
    CHECK_THROWS_AS(schedule_from_config(in), ConfigError);
}

TEST_CASE("ddim pair chain terminates at zero") {
    const auto s = make_linear_schedule(1000, 1e-4, 0.02, 30);
    const auto pairs = s.ddim_pairs();
    REQUIRE(pairs.size() == 30);
    REQUIRE(pairs.front().first == 1000);
    REQUIRE(pairs.back().second == 0);
    for (const auto& [cur, next] : pairs) REQUIRE(next < cur);
}
