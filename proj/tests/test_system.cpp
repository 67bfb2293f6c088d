#include <doctest.h>

#include <cmath>

#include "sgl/system.hpp"
#include "sgl/util.hpp"

using namespace sgl;

namespace {

const ShearletSystem& sys() {
    static ShearletSystem s = ShearletSystem::make_default();
    return s;
}

DirectionalWeight unit_weight() {
    return DirectionalWeight::constant(1.0, 2.0, 1.0);
}

} // namespace

TEST_CASE("fourier element closed form and parameter checks") {
    const auto& s = sys();
    // psi1_hat(0) = 0 forces zero on the xi_1 = 0 line for the first cone
    for (double xi2 : {-3.0, 0.5, 7.0})
        CHECK(std::abs(fourier_element(s, 1.0, 0.0, {0, 0}, 1, {0.0, xi2})) == 0.0);

    // translation is a pure phase
    const std::complex<double> v0 = fourier_element(s, 0.5, 0.3, {0, 0}, 1, {2.0, 1.0});
    const std::complex<double> v1 = fourier_element(s, 0.5, 0.3, {0.5, 0.0}, 1, {2.0, 1.0});
    CHECK(std::abs(std::abs(v0) - std::abs(v1)) < 1e-14);

    // closed form at a = 1/4, s = 0, xi = (4,0) and an interior point
    const GeneratorProfile& g = s.generator();
    const std::complex<double> e1 = fourier_element(s, 0.25, 0.0, {0, 0}, 1, {4.0, 0.0});
    CHECK(std::abs(e1 - std::pow(0.25, 0.75) * g.psi1(1.0) * g.phi1(0.0)) < 1e-14);
    const std::complex<double> e2 = fourier_element(s, 0.25, 0.0, {0, 0}, 1, {2.0, 0.0});
    CHECK(std::abs(e2 - std::pow(0.25, 0.75) * g.psi1(0.5) * g.phi1(0.0)) < 1e-14);

    CHECK_THROWS_AS((void)fourier_element(s, 0.0, 0.0, {0, 0}, 1, {1, 1}), std::invalid_argument);
    CHECK_THROWS_AS((void)fourier_element(s, 3.0, 0.0, {0, 0}, 1, {1, 1}), std::invalid_argument);
    CHECK_THROWS_AS((void)fourier_element(s, 1.0, 2.5, {0, 0}, 1, {1, 1}), std::invalid_argument);
    CHECK_THROWS_AS((void)fourier_element(s, 1.0, 0.0, {0, 0}, 2, {1, 1}), std::invalid_argument);
}

TEST_CASE("shear covariance at random frequencies") {
    const auto& s = sys();
    Rng rng(17);
    for (int t = 0; t < 100; ++t) {
        const double a = std::exp(rng.uniform(std::log(0.05), std::log(2.0)));
        const double sh = rng.uniform(-0.5, 0.5);
        const double s0 = rng.uniform(-0.5, 0.5);
        const Vec2 xi{rng.uniform(-8.0, 8.0), rng.uniform(-8.0, 8.0)};
        // element at S_{s0}^T xi equals the (s + s0)-element at xi
        const Vec2 xis{xi.x, xi.y + s0 * xi.x};
        const double lhs = std::abs(fourier_element(s, a, sh, {0, 0}, 1, xis));
        const double rhs = std::abs(fourier_element(s, a, sh + s0, {0, 0}, 1, xi));
        CHECK(std::fabs(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("scale covariance against the generator") {
    const auto& s = sys();
    const GeneratorProfile& g = s.generator();
    Rng rng(23);
    for (int t = 0; t < 100; ++t) {
        const double a = std::exp(rng.uniform(std::log(0.02), std::log(2.0)));
        const Vec2 xi{rng.uniform(-20.0, 20.0), rng.uniform(-20.0, 20.0)};
        const double lhs = std::abs(fourier_element(s, a, 0.0, {0, 0}, 1, xi));
        const double rhs = std::pow(a, 0.75) * std::fabs(g.psi_hat(a * xi.x, std::sqrt(a) * xi.y));
        CHECK(std::fabs(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("second cone swaps the coordinates") {
    const auto& s = sys();
    Rng rng(29);
    for (int t = 0; t < 50; ++t) {
        const double a = std::exp(rng.uniform(std::log(0.05), std::log(2.0)));
        const double sh = rng.uniform(-1.0, 1.0);
        const Vec2 xi{rng.uniform(-8.0, 8.0), rng.uniform(-8.0, 8.0)};
        const double lhs = std::abs(fourier_element(s, a, sh, {0, 0}, -1, xi));
        const double rhs = std::abs(fourier_element(s, a, sh, {0, 0}, 1, {xi.y, xi.x}));
        CHECK(std::fabs(lhs - rhs) < 1e-14);
    }
}

TEST_CASE("H1 multiplier basics") {
    const auto& s = sys();
    const DirectionalWeight w = unit_weight();
    // at the origin only the low pass contributes, and K_hat(0) = 0
    CHECK(h1_multiplier(s, w, {0.0, 0.0}) == 0.0);
    // symmetry under xi -> -xi (even profile moduli)
    for (const Vec2 xi : {Vec2{3.0, 1.0}, Vec2{0.5, -2.0}, Vec2{-4.0, 4.0}}) {
        const double m1 = h1_multiplier(s, w, xi);
        const double m2 = h1_multiplier(s, w, {-xi.x, -xi.y});
        CHECK(std::fabs(m1 - m2) < 1e-12 * std::max(1.0, m1));
    }
}

TEST_CASE("multiplier ratio stays within scanned frame bounds") {
    const auto& s = sys();
    const DirectionalWeight w = unit_weight();
    const FrameBounds fb = frame_bounds(s, w, 1.0, 64.0, 32, 48);
    REQUIRE(fb.ok);
    CHECK(fb.a_est > 0.0);
    CHECK(fb.b_est >= fb.a_est);
    Rng rng(31);
    for (int t = 0; t < 40; ++t) {
        const double r = std::exp(rng.uniform(0.0, std::log(64.0)));
        const double ang = rng.uniform(0.0, 2 * M_PI);
        const Vec2 xi{r * std::cos(ang), r * std::sin(ang)};
        const double ratio = h1_multiplier(s, w, xi) / (r * r);
        CHECK(ratio >= fb.a_est * 0.8);
        CHECK(ratio <= fb.b_est * 1.2);
    }
}

TEST_CASE("frame bounds scale quadratically in the weight") {
    const auto& s = sys();
    const DirectionalWeight w = unit_weight();
    const DirectionalWeight w2 = w.scaled(2.0);
    // on the annulus [4, 32] the low pass vanishes (K window ends at 3)
    const FrameBounds fb1 = frame_bounds(s, w, 4.0, 32.0, 16, 32);
    const FrameBounds fb2 = frame_bounds(s, w2, 4.0, 32.0, 16, 32);
    CHECK(fb2.a_est / fb1.a_est == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(fb2.b_est / fb1.b_est == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("zero weight is rejected as a weight invariant") {
    CHECK_THROWS_AS(DirectionalWeight::constant(0.0, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("system parameter invariants") {
    CHECK_THROWS_AS(ShearletSystem(make_default_generator(), 0.5, 2.0, 1.0, 1.0,
                                   Bump1D{0, 0, 1.6, 3.0, 1.0}, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(ShearletSystem(make_default_generator(), 2.0, 0.5, 1.0, 1.0,
                                   Bump1D{0, 0, 1.6, 3.0, 1.0}, 1.0),
                    std::invalid_argument);
    const ShearletSystem& s = sys();
    CHECK(s.gamma() == 2.0);
    CHECK(s.delta() == 2.0);
    CHECK(s.c_psi() > 0.0);
    // K_hat / |xi| = 1 on [-1,1]^2
    CHECK(s.low_pass_hat(0.3, -0.7) / std::hypot(0.3, 0.7) == doctest::Approx(1.0));
    CHECK(s.low_pass_hat(1.0, 1.0) / std::sqrt(2.0) == doctest::Approx(1.0));
}

TEST_CASE("frame scan refinement is stable") {
    const auto& s = sys();
    const DirectionalWeight w = unit_weight();
    const FrameBounds coarse = frame_bounds(s, w, 1.0, 32.0, 24, 32);
    const FrameBounds fine = frame_bounds(s, w, 1.0, 32.0, 48, 64);
    CHECK(std::fabs(fine.a_est - coarse.a_est) / coarse.a_est < 0.05);
}
