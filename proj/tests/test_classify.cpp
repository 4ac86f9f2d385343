#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qwalk/classify.hpp"
#include "qwalk/error.hpp"
#include "support.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace qwalk;
using namespace testing;
using std::numbers::pi;

namespace {

Mat2 fig_sigma() { return {3.0, -1.0, -1.0, 3.0}; }

Mat2 random_pd(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    while (true) {
        Mat2 a{u(gen), u(gen), u(gen), u(gen)};
        Mat2 s = a * a.transpose();
        if (s.det() > 1e-3 * s.trace() * s.trace()) return s;
    }
}

}  // namespace

TEST_CASE("transform matrix") {
    CHECK(max_abs_diff(transform_matrix(Mat2::identity()), Mat2::identity()) < 1e-15);

    const double c = 1.0 / (2.0 * std::sqrt(6.0));
    Mat2 expected{3.0 * c, 1.0 * c, 0.0, 2.0 * std::sqrt(2.0) * c};
    auto T = transform_matrix(fig_sigma());
    CHECK(max_abs_diff(T, expected) < 1e-15);
    CHECK(T.a11 == doctest::Approx(0.6124).epsilon(1e-4));
    CHECK(T.a12 == doctest::Approx(0.2041).epsilon(1e-3));
    CHECK(T.a22 == doctest::Approx(0.5774).epsilon(1e-4));

    CHECK(max_abs_diff(transform_matrix({4.0, 0.0, 0.0, 1.0}), Mat2{0.5, 0.0, 0.0, 1.0}) < 1e-15);

    CHECK_THROWS_AS(transform_matrix({1.0, 1.0, 1.0, 1.0}), HypothesisError);
    CHECK_THROWS_AS(transform_matrix({-1.0, 0.0, 0.0, 1.0}), HypothesisError);
}

TEST_CASE("transform normalizes random covariances") {
    std::mt19937_64 gen(7);
    for (int k = 0; k < 1000; ++k) {
        auto s = random_pd(gen);
        auto T = transform_matrix(s);
        CHECK(max_abs_diff(T * s * T.transpose(), Mat2::identity()) < 1e-12);
        CHECK(T.a21 == 0.0);
        CHECK(T.a11 > 0.0);
        CHECK(T.a22 > 0.0);
    }
}

TEST_CASE("wedge angle") {
    CHECK(wedge_angle(Mat2::identity()) == doctest::Approx(pi / 2));
    CHECK(correlation(fig_sigma()) == doctest::Approx(-1.0 / 3.0));
    CHECK(wedge_angle(fig_sigma()) == doctest::Approx(1.23096).epsilon(1e-5));
    CHECK(wedge_angle({1.0, 0.999999, 0.999999, 1.0}) == doctest::Approx(pi).epsilon(1e-2));
}

TEST_CASE("boundary and effective drifts") {
    std::vector<IncrementLaw> h{law({{0, 1, "1"}})}, v{law({{1, 0, "1"}})};
    WalkSpec s(1, four_point(), h, v, default_corner_laws(1, h, v));
    CHECK(boundary_drift(s, 1, 0) == Vec2{0.0, 1.0});
    std::vector<IncrementLaw> h2{law({{1, 1, "1/2"}, {-1, 1, "1/2"}})};
    WalkSpec s2(1, four_point(), h2, v, default_corner_laws(1, h2, v));
    CHECK(boundary_drift(s2, 1, 0) == Vec2{0.0, 1.0});

    StationaryMeasure one;
    one.weights = {1.0};
    CHECK(effective_drift(s2, 1, one) == boundary_drift(s2, 1, 0));

    auto mu = effective_drift({Vec2{0.0, 3.0}, Vec2{3.0, 0.0}}, {1.0 / 3.0, 2.0 / 3.0});
    CHECK(mu.x == doctest::Approx(2.0));
    CHECK(mu.y == doctest::Approx(1.0));
    auto same = effective_drift({Vec2{0.5, 2.0}, Vec2{0.5, 2.0}}, {0.3, 0.7});
    CHECK(same.x == doctest::Approx(0.5));
    CHECK(same.y == doctest::Approx(2.0));
    CHECK_THROWS_AS(effective_drift({Vec2{0.0, 1.0}, Vec2{0.0, 1.0}}, {0.3, 0.3}), DomainError);
}

TEST_CASE("reflection angles on the worked covariance") {
    auto a = reflection_angles(Mat2::identity(), {0.0, 1.0}, {1.0, 0.0});
    CHECK(a.theta1 == 0.0);
    CHECK(a.theta2 == 0.0);
    CHECK(std::fabs(a.phi1) < 1e-15);
    CHECK(std::fabs(a.phi2) < 1e-15);

    auto b = reflection_angles(fig_sigma(), {-1.0, 1.0}, {2.0, 1.0});
    CHECK(b.theta1 == doctest::Approx(pi / 4));
    CHECK(b.phi1 == doctest::Approx(std::atan(1.0 / std::sqrt(2.0))).epsilon(1e-12));
    CHECK(b.phi1 == doctest::Approx(0.61548).epsilon(1e-5));
    CHECK(b.theta2 == doctest::Approx(-std::asin(1.0 / std::sqrt(5.0))).epsilon(1e-12));
    CHECK(b.phi2 == doctest::Approx(std::atan(-5.0 / (4.0 * std::sqrt(2.0)))).epsilon(1e-12));
    CHECK(std::fabs(b.phi2 + 0.7238) < 1e-3);

    const double c = chi(wedge_angle(fig_sigma()), b.phi1, b.phi2);
    CHECK(c == doctest::Approx((std::atan(1.0 / std::sqrt(2.0)) + std::atan(-5.0 / (4.0 * std::sqrt(2.0)))) /
                               std::acos(1.0 / 3.0)));
    CHECK(std::fabs(c + 0.088) < 1e-3);
    CHECK(verdict_of(c) == Verdict::Transient);

    CHECK_THROWS_AS(reflection_angles(fig_sigma(), {0.0, 0.0}, {1.0, 0.0}), HypothesisError);
    CHECK_THROWS_AS(reflection_angles(fig_sigma(), {1.0, -1.0}, {1.0, 0.0}), HypothesisError);
    CHECK_THROWS_AS(reflection_angles(fig_sigma(), {0.0, 1.0}, {-1.0, 3.0}), HypothesisError);
}

TEST_CASE("closed-form angles match the geometric construction") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> ang(-1.5, 1.5), len(0.1, 5.0), scale(0.01, 100.0);
    for (int k = 0; k < 2000; ++k) {
        auto s = random_pd(gen);
        const double t1 = ang(gen), t2 = ang(gen);
        Vec2 m1 = len(gen) * Vec2{-std::sin(t1), std::cos(t1)};
        Vec2 m2 = len(gen) * Vec2{std::cos(t2), -std::sin(t2)};
        auto f = reflection_angles(s, m1, m2);
        auto g = reflection_angles_geometric(s, m1, m2);
        CHECK(std::fabs(f.phi1 - g.phi1) < 1e-9);
        CHECK(std::fabs(f.phi2 - g.phi2) < 1e-9);
        CHECK(f.theta1 == doctest::Approx(t1).epsilon(1e-12));
        CHECK(f.theta2 == doctest::Approx(t2).epsilon(1e-12));
        CHECK(std::fabs(f.phi1) < pi / 2);
        CHECK(std::fabs(f.phi2) < pi / 2);

        // Directions only.
        const double c = scale(gen), d = scale(gen);
        auto h = reflection_angles(c * s, d * m1, d * m2);
        CHECK(std::fabs(h.phi1 - f.phi1) < 1e-12);
        CHECK(std::fabs(h.phi2 - f.phi2) < 1e-12);
        CHECK(std::fabs(wedge_angle(c * s) - wedge_angle(s)) < 1e-12);
    }
}

TEST_CASE("orthogonal reflection gives 2 - pi/phi0") {
    std::mt19937_64 gen(3);
    for (int k = 0; k < 1000; ++k) {
        auto s = random_pd(gen);
        auto a = reflection_angles(s, {0.0, 2.5}, {0.7, 0.0});
        const double phi0 = wedge_angle(s);
        CHECK(std::fabs(chi(phi0, a.phi1, a.phi2) - (2.0 - pi / phi0)) < 1e-12);
    }
    const double phi0 = std::acos(-0.5);
    CHECK(phi0 == doctest::Approx(2 * pi / 3));
    CHECK(2.0 - pi / phi0 == doctest::Approx(0.5));
}

TEST_CASE("classify a full model") {
    auto r = classify(orthogonal_spec());
    CHECK(r.rho == 0.0);
    CHECK(r.phi0 == doctest::Approx(pi / 2));
    CHECK(std::fabs(r.chi) < 1e-12);
    CHECK(r.verdict == Verdict::Critical);
    CHECK(r.pi1.weights == std::vector<double>{1.0});

    // Correlated interior and orthogonal pushes.
    auto interior = diagonal("3/8", "1/8");
    auto rr = classify(simple_spec(interior, law({{1, 1, "1/2"}, {-1, 1, "1/2"}}), law({{1, 1, "1/2"}, {1, -1, "1/2"}})));
    CHECK(rr.rho == doctest::Approx(0.5));
    CHECK(rr.chi == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rr.tail_exponent == doctest::Approx(0.25));
    CHECK(rr.verdict == Verdict::Recurrent);
    CHECK(max_abs_diff(rr.transform * rr.sigma * rr.transform.transpose(), Mat2::identity()) < 1e-12);

    auto bad = simple_spec(law({{1, 0, "1/2"}, {-1, 0, "1/2"}}), law({{0, 1, "1"}}), law({{1, 0, "1"}}));
    CHECK_THROWS_AS(classify(bad), HypothesisError);
}
