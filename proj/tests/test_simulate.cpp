#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qwalk/error.hpp"
#include "qwalk/random.hpp"
#include "qwalk/simulate.hpp"
#include "qwalk/walks.hpp"
#include "support.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <map>

using namespace qwalk;
using namespace testing;

namespace {

// Pearson statistic of `draws` increments from z against the exact law.
void check_increments(const WalkSpec& spec, Point z, std::uint64_t draws, std::uint64_t seed) {
    const Sampler sampler(spec);
    const auto& law = spec.law_at(z);
    std::map<std::pair<std::int64_t, std::int64_t>, double> counts;
    Rng rng(seed);
    for (std::uint64_t i = 0; i < draws; ++i) {
        const Point w = sampler.step(z, rng);
        CHECK_MESSAGE(law.prob(w - z) > 0, "step outside the support");
        counts[{w.x - z.x, w.y - z.y}] += 1.0;
    }
    double stat = 0.0;
    for (const auto& a : law.atoms()) {
        const double expected = to_double(a.prob) * static_cast<double>(draws);
        const double got = counts[{a.dx, a.dy}];
        stat += (got - expected) * (got - expected) / expected;
    }
    const auto df = static_cast<double>(law.size() - 1);
    if (df < 1) return;
    const double critical = boost::math::quantile(boost::math::complement(boost::math::chi_squared(df), 0.01));
    CHECK(stat < critical);
}

WalkSpec two_row_spec() {
    std::vector<IncrementLaw> h{law({{1, 1, "1/2"}, {0, 1, "1/2"}}), law({{-1, 0, "1/2"}, {0, 1, "1/4"}, {0, -1, "1/4"}})};
    std::vector<IncrementLaw> v{law({{1, 0, "1/2"}, {1, 1, "1/2"}}), law({{0, -1, "1/2"}, {1, 0, "1/4"}, {-1, 0, "1/4"}})};
    return WalkSpec(2, four_point(), h, v, default_corner_laws(2, h, v));
}

}  // namespace

TEST_CASE("rng streams are reproducible and distinct") {
    Rng a(stream_seed(42, 0)), b(stream_seed(42, 0)), c(stream_seed(42, 1));
    for (int i = 0; i < 100; ++i) {
        const auto x = a();
        CHECK(x == b());
        CHECK(x != c());
    }
    Rng u(3);
    double mean = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double v = u.uniform();
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
        mean += v;
    }
    CHECK(mean / 100000 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("alias table reproduces its weights") {
    std::vector<double> w{0.1, 0.2, 0.3, 0.4};
    AliasTable t(w);
    double total = 0.0;
    for (std::uint32_t i = 0; i < w.size(); ++i) {
        CHECK(std::fabs(t.probability(i) - w[i]) < 1e-9);
        total += t.probability(i);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    AliasTable one({5.0});
    Rng rng(1);
    for (int i = 0; i < 10; ++i) CHECK(one.sample(rng) == 0);
    CHECK_THROWS_AS(AliasTable(std::vector<double>{}), DomainError);
    CHECK_THROWS_AS(AliasTable({0.0, 0.0}), DomainError);
}

TEST_CASE("step follows the regional laws") {
    auto spec = two_row_spec();
    check_increments(spec, {2, 2}, 1'000'000, 1);
    check_increments(spec, {2, 0}, 1'000'000, 2);
    check_increments(spec, {9, 1}, 1'000'000, 3);
    check_increments(spec, {1, 7}, 1'000'000, 4);
    check_increments(spec, {0, 0}, 200'000, 5);
    auto mirror = mirror_spec(eight_point());
    check_increments(mirror, {0, 0}, 1'000'000, 6);
    check_increments(mirror, {5, 0}, 1'000'000, 7);
}

TEST_CASE("trajectories stay in the quadrant") {
    auto spec = lindley_spec(diagonal("1/8", "3/8"));
    const Sampler s(spec);
    Rng rng(9);
    Point z{0, 0};
    for (int i = 0; i < 1'000'000; ++i) {
        z = s.step(z, rng);
        REQUIRE(z.x >= 0);
        REQUIRE(z.y >= 0);
    }
}

TEST_CASE("passage time boundary cases") {
    auto spec = two_row_spec();
    const Sampler s(spec);
    Rng rng(1);
    CHECK(passage_time(s, {1, 1}, 2.0, 10, rng) == std::optional<std::uint64_t>{0});
    // Four-point steps move one unit, so from distance 5 nothing reaches radius 3 in one step.
    CHECK_FALSE(passage_time(s, {4, 3}, 3.0, 1, rng).has_value());

    std::vector<IncrementLaw> h{law({{-1, 0, "1"}})}, v{law({{0, -1, "1"}})};
    WalkSpec inward(1, law({{-1, 0, "1/2"}, {0, -1, "1/2"}}), h, v, default_corner_laws(1, h, v));
    const Sampler si(inward);
    CHECK(passage_time(si, {3, 0}, 2.0, 10, rng) == std::optional<std::uint64_t>{1});
}

TEST_CASE("survival grid") {
    auto g = survival_grid(1'000'000);
    CHECK(g.front() == 1);
    CHECK(g.back() == 1'000'000);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
    for (int k = 0; std::pow(1.25, k) < 1e6; ++k) {
        const auto v = static_cast<std::uint64_t>(std::llround(std::pow(1.25, k)));
        CHECK(std::find(g.begin(), g.end(), v) != g.end());
    }
    CHECK(survival_grid(1) == std::vector<std::uint64_t>{1});
}

TEST_CASE("fitter recovers injected power laws") {
    const std::uint64_t T = 1'000'000'000;
    for (double a : {0.25, 0.2902, 0.5}) {
        std::vector<GridPoint> grid;
        for (auto n : survival_grid(1'000'000)) {
            GridPoint p;
            p.n = n;
            p.survival = n < 2 ? 1.0 : std::pow(static_cast<double>(n), -a);
            p.survivors = static_cast<std::uint64_t>(std::llround(p.survival * T));
            grid.push_back(p);
        }
        auto f = fit_tail(grid, T, 1, 0);
        CHECK(std::fabs(f.slope + a) < 1e-3);
        CHECK(f.n_min >= 100);
    }
    std::vector<double> x{1, 10, 100}, y{1, 0.1, 0.01};
    CHECK(loglog_fit(x, y).first == doctest::Approx(-1.0));
}

TEST_CASE("survival curve is deterministic across thread counts") {
    auto spec = mirror_spec(diagonal("3/8", "1/8"));
    SimConfig cfg;
    cfg.start = {12, 9};
    cfg.radius = 3.0;
    cfg.horizon = 20'000;
    cfg.trials = 3000;
    cfg.master_seed = 77;
    cfg.threads = 1;
    auto a = survival_curve(spec, cfg);
    cfg.threads = 3;
    auto b = survival_curve(spec, cfg);
    REQUIRE(a.grid.size() == b.grid.size());
    for (std::size_t i = 0; i < a.grid.size(); ++i) {
        CHECK(a.grid[i].survivors == b.grid[i].survivors);
        if (i > 0) CHECK(a.grid[i].survival <= a.grid[i - 1].survival);
    }
    CHECK(a.fit.slope == b.fit.slope);
    CHECK(a.fit.ci_lo == b.fit.ci_lo);
    CHECK(a.fit.ci_lo <= a.fit.slope);
    CHECK(a.fit.slope <= a.fit.ci_hi);
    CHECK(a.censored_fraction >= 0.0);

    cfg.start = {1, 1};
    CHECK_THROWS_AS(survival_curve(spec, cfg), DomainError);
    cfg.start = {12, 9};
    cfg.radius = 1.0;
    CHECK_THROWS_AS(survival_curve(spec, cfg), DomainError);
}

TEST_CASE("transient walk keeps a censored fraction") {
    auto spec = lindley_spec(diagonal("1/8", "3/8"));
    SimConfig cfg;
    cfg.start = {8, 8};
    cfg.radius = 4.0;
    cfg.trials = 2000;
    cfg.master_seed = 5;
    std::vector<double> censored;
    for (std::uint64_t h : {2000ULL, 4000ULL, 8000ULL}) {
        cfg.horizon = h;
        censored.push_back(survival_curve(spec, cfg).censored_fraction);
    }
    CHECK(censored[2] <= censored[1]);
    CHECK(censored[1] <= censored[0]);
    CHECK(censored[2] > 0.2);
}

TEST_CASE("compressed clock stays in its band") {
    auto spec = mirror_spec(eight_point());
    const Sampler s(spec);
    for (int N : {1, 2, 8, 64}) {
        for (std::uint64_t i = 0; i < 200; ++i) {
            Rng rng(stream_seed(3, i));
            // passage_time throws if n <= T(n) <= N n fails.
            CHECK_NOTHROW(passage_time(s, {10, 0}, 2.0, 2000, rng, N));
        }
    }
}

TEST_CASE("stabilization probe") {
    SUBCASE("equal row drifts") {
        std::vector<IncrementLaw> h{law({{0, 1, "1/2"}, {1, 1, "1/4"}, {-1, 1, "1/4"}}), law({{0, 1, "1/2"}, {1, 1, "1/4"}, {-1, 1, "1/4"}})};
        std::vector<IncrementLaw> v{law({{1, 0, "1"}}), law({{1, 0, "1"}})};
        WalkSpec spec(2, four_point(), h, v, default_corner_laws(2, h, v));
        for (std::uint64_t n : {1ULL, 10ULL, 50ULL}) {
            auto e = stabilization_probe(spec, 1, n, {static_cast<std::int64_t>(4 * n + 3), 0}, 20000, 11);
            CHECK(std::fabs(e.estimate.x) < 4 * e.std_error.x + 1e-12);
            CHECK(std::fabs(e.estimate.y - 1.0) < 4 * e.std_error.y + 1e-12);
        }
    }
    SUBCASE("R = 1 converges to the single row drift") {
        auto spec = two_row_spec();
        std::vector<IncrementLaw> h{law({{1, 1, "1/2"}, {-1, 1, "1/4"}, {0, 1, "1/4"}})}, v{law({{1, 0, "1"}})};
        WalkSpec one(1, four_point(), h, v, default_corner_laws(1, h, v));
        auto e = stabilization_probe(one, 1, 200, {401, 0}, 20000, 3);
        CHECK(std::fabs(e.estimate.x - 0.25) < 4 * e.std_error.x);
        CHECK(std::fabs(e.estimate.y - 1.0) < 4 * e.std_error.y);
    }
    SUBCASE("start too close to the corner") {
        CHECK_THROWS_AS(stabilization_probe(two_row_spec(), 1, 10, {30, 0}, 100, 1), DomainError);
        CHECK_THROWS_AS(stabilization_probe(two_row_spec(), 1, 10, {50, 5}, 100, 1), DomainError);
    }
}

TEST_CASE("excursion maximum probe") {
    auto spec = mirror_spec(diagonal("3/8", "1/8"));
    auto e = excursion_max_probe(spec, {10, 10}, 4.0, {5.0, 14.0, 20.0, 40.0, 80.0}, 4000, 1'000'000, 3);
    CHECK(e.points[0].probability == 1.0);
    CHECK(e.points[1].probability == 1.0);
    for (std::size_t i = 1; i < e.points.size(); ++i) CHECK(e.points[i].probability <= e.points[i - 1].probability);
    CHECK(e.slope < 0.0);
    auto f = excursion_max_probe(spec, {10, 10}, 4.0, {40.0}, 16000, 1'000'000, 4);
    const double ratio = e.points[3].stderr_ / f.points[0].stderr_;
    CHECK(ratio == doctest::Approx(2.0).epsilon(0.15));
    CHECK_THROWS_AS(excursion_max_probe(spec, {1, 1}, 4.0, {5.0}, 10, 10, 1), DomainError);
}
