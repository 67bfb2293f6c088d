#include <doctest.h>

#include <cmath>
#include <complex>

#include "sgl/transforms.hpp"
#include "sgl/util.hpp"

using namespace sgl;

namespace {

const TransformContext& ctx() {
    static TransformContext c(ShearletSystem::make_default(),
                              DirectionalWeight::constant(1.0, 2.0, 1.0), QuadratureSpec{16, 32});
    return c;
}

GridField band_limited_field(int n, Rng& rng, int k_lo, int k_hi) {
    SpectralField F(n, 1.0);
    for (int k1 = -k_hi; k1 <= k_hi; ++k1)
        for (int k2 = -k_hi; k2 <= k_hi; ++k2) {
            const double r = std::hypot(k1, k2);
            if (r < k_lo || r > k_hi) continue;
            if (k1 < 0 || (k1 == 0 && k2 <= 0)) continue;
            const std::complex<double> z(rng.normal(), rng.normal());
            F.at_freq(k1, k2) = z;
            F.at_freq(-k1, -k2) = std::conj(z);
        }
    return from_spectral(F);
}

} // namespace

TEST_CASE("periodized coefficient of a constant vanishes") {
    GridField one(64, 1.0, 3.3);
    for (double a : {2.0, 0.5, 0.125})
        for (double s : {-1.0, 0.0, 0.7})
            for (int iota : {1, -1})
                CHECK(periodized_coefficient(one, ctx(), a, s, {0.3, 0.1}, iota) == 0.0);
}

TEST_CASE("periodized coefficient is linear in the weight") {
    Rng rng(5);
    GridField f = band_limited_field(64, rng, 4, 20);
    TransformContext c2(ShearletSystem::make_default(), DirectionalWeight::constant(2.0, 2.0, 1.0),
                        QuadratureSpec{16, 32});
    const double v1 = periodized_coefficient(f, ctx(), 0.25, 0.3, {0.2, 0.7}, 1);
    const double v2 = periodized_coefficient(f, c2, 0.25, 0.3, {0.2, 0.7}, 1);
    CHECK(v2 == doctest::Approx(2.0 * v1).epsilon(1e-12));
}

TEST_CASE("single-mode coefficient modulus is independent of t2 for the first cone") {
    GridField f = GridField::sample(64, 1.0, [](double x1, double) { return std::cos(2 * M_PI * x1); });
    const double base = std::fabs(periodized_coefficient(f, ctx(), 0.5, 0.2, {0.3, 0.1}, 1));
    for (double t2 : {0.0, 0.25, 0.8}) {
        const double v = std::fabs(periodized_coefficient(f, ctx(), 0.5, 0.2, {0.3, t2}, 1));
        CHECK(std::fabs(v - base) < 1e-12 * std::max(1.0, base));
    }
}

TEST_CASE("periodized coefficient agrees with direct spatial quadrature on a refined grid") {
    // independent oracle: sample the periodised element through an inverse FFT
    // on a 4x refined grid and integrate the product spatially
    GridField f = GridField::sample(64, 1.0, [](double x1, double x2) {
        return std::cos(2 * M_PI * x1) + 0.5 * std::sin(2 * M_PI * (x1 + 2 * x2));
    });
    const double a = 0.5, s = 0.3;
    const Vec2 t{0.37, 0.61};
    const int iota = 1;
    const double lib = periodized_coefficient(f, ctx(), a, s, t, iota);

    const int nf = 256; // 4x refined
    const ShearletSystem& sys = ctx().sys();
    SpectralField E(nf, 1.0);
    for (int k1 = -nf / 2 + 1; k1 < nf / 2; ++k1)
        for (int k2 = -nf / 2 + 1; k2 < nf / 2; ++k2)
            E.at_freq(k1, k2) = std::conj(fourier_element(sys, a, s, t, iota,
                                                          {static_cast<double>(k1), static_cast<double>(k2)})) *
                                ctx().weight()(iota, s);
    GridField psi_per = from_spectral(E); // conj(psi_hat) synthesised on the fine grid
    GridField f_fine = GridField::sample(nf, 1.0, [](double x1, double x2) {
        return std::cos(2 * M_PI * x1) + 0.5 * std::sin(2 * M_PI * (x1 + 2 * x2));
    });
    const double spatial = inner_product(f_fine, psi_per);
    CHECK(std::fabs(lib - spatial) < 1e-8 * std::max(1.0, std::fabs(lib)));
}

TEST_CASE("besov_continuous basics and route equivalence") {
    GridField zero(64, 1.0, 0.0);
    CHECK(besov_continuous(zero, ctx()).value == 0.0);
    GridField one(64, 1.0, 1.0);
    CHECK(besov_continuous(one, ctx()).value == 0.0);

    Rng rng(13);
    GridField f = band_limited_field(64, rng, 3, 24);
    const SeminormResult direct = besov_continuous(f, ctx());

    // multiplier-side oracle on the identical node grid
    const std::vector<double> m = shear_multiplier_grid(ctx(), 64, 1.0, 5.0);
    SpectralField F = to_spectral(f);
    double oracle = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) oracle += m[i] * std::norm(F.coeffs()[i]);
    CHECK(std::fabs(direct.value - oracle) <= 1e-8 * oracle);

    // shift invariance under the periodic translation of the grid
    GridField shifted(64, 1.0);
    for (int i = 0; i < 64; ++i)
        for (int j = 0; j < 64; ++j) shifted.at(i, j) = f.at((i + 13) % 64, (j + 7) % 64);
    const SeminormResult s2 = besov_continuous(shifted, ctx());
    CHECK(std::fabs(s2.value - direct.value) <= 1e-9 * direct.value);

    // quadratic homogeneity
    GridField g = f;
    g *= 3.0;
    CHECK(besov_continuous(g, ctx()).value == doctest::Approx(9.0 * direct.value).epsilon(1e-10));
}

TEST_CASE("besov_continuous lies inside the frame-bound sandwich") {
    Rng rng(37);
    GridField f = band_limited_field(64, rng, 2, 16);
    const SeminormResult b = besov_continuous(f, ctx());
    const FrameBounds fb = frame_bounds(ctx().sys(), ctx().weight(), 1.0, 24.0, 32, 48, ctx().quad());
    SpectralField F = to_spectral(f);
    double s2 = 0.0, sk = 0.0;
    for (int i = 0; i < 64; ++i)
        for (int j = 0; j < 64; ++j) {
            const int k1 = F.freq_of_index(i), k2 = F.freq_of_index(j);
            const double e = std::norm(F.at_idx(i, j));
            s2 += (k1 * k1 + k2 * k2) * e;
            const double kh = ctx().sys().low_pass_hat(k1, k2);
            sk += kh * kh * e;
        }
    CHECK(b.value <= fb.b_est * s2 * 1.02);
    CHECK(b.value >= (fb.a_est * s2 - sk) * 0.98);
}

TEST_CASE("besov_box: zero and far-support fields") {
    GridField zero(128, 4.0, 0.0);
    CHECK(besov_box(zero, ctx(), 0.25).value == 0.0);

    // a bump far from the box contributes only band-limited tails
    auto bump = [](double cx, double cy) {
        return [cx, cy](double x1, double x2) {
            const double r = std::hypot(x1 - cx, x2 - cy) / 0.15;
            return r < 1.0 ? std::exp(-1.0 / (1.0 - r * r)) : 0.0;
        };
    };
    GridField centered = GridField::sample(128, 4.0, bump(0.0, 0.0), true);
    GridField far = GridField::sample(128, 4.0, bump(1.3, 1.3), true);
    const double v_centered = besov_box(centered, ctx(), 0.25).value;
    const double v_far = besov_box(far, ctx(), 0.25).value;
    CHECK(v_centered > 0.0);
    CHECK(v_far < 1e-4 * v_centered);
}

TEST_CASE("besov_box seam-leak detector") {
    GridField at_seam = GridField::sample(
        128, 4.0,
        [](double x1, double x2) {
            const double r = std::hypot(x1 - 1.9, x2) / 0.1;
            return r < 1.0 ? 1.0 - r : 0.0;
        },
        true);
    CHECK_THROWS_AS((void)besov_box(at_seam, ctx(), 0.25), SupportLeakError);
}

TEST_CASE("rounding operators") {
    // grid {-1, -0.5, 0, 0.5, ...} for c = 0.5, Gamma = 2
    CHECK(round_scale(0.3, 0.5, 2.0) == doctest::Approx(0.0));
    CHECK(round_scale(-5.0, 0.5, 2.0) == doctest::Approx(-1.0));
    CHECK(round_scale(0.5, 0.5, 2.0) == doctest::Approx(0.5));
    CHECK(round_scale(0.74, 0.5, 2.0) == doctest::Approx(0.5));

    // K_{j,c} = {-1 + 0.5 z : |k| <= 2} for c = 0.5, Delta = 1, j = 2
    CHECK(round_shear(0.7, 2.0, 0.5, 1.0) == doctest::Approx(0.5));
    CHECK(round_shear(-2.0, 2.0, 0.5, 1.0) == doctest::Approx(-2.0));
    CHECK_THROWS_AS((void)round_shear(2.5, 2.0, 0.5, 1.0), std::invalid_argument);

    // idempotence and bracketing
    Rng rng(41);
    for (int t = 0; t < 200; ++t) {
        const double c = std::exp(rng.uniform(std::log(0.05), std::log(1.0)));
        const double x = rng.uniform(-0.9, 4.0);
        const double r = round_scale(x, c, 2.0);
        CHECK(round_scale(r, c, 2.0) == doctest::Approx(r).epsilon(1e-12));
        if (x >= -1.0) {
            CHECK(r <= x + 1e-12);
            CHECK(x < r + c + 1e-12);
        }
        const double j = 2.0;
        const double bound = std::pow(2.0, j / 2.0) * 1.0;
        const double y = rng.uniform(-bound * 0.99, bound * 0.99);
        const double rs = round_shear(y, j, c, 1.0);
        CHECK(rs <= y + 1e-12);
        CHECK(y < rs + c + 1e-12);
    }
}

namespace {

// walks the index-set definitions literally, independent of the library loops
std::size_t enumerate_entries(double c, double gamma, double delta, double j_ceiling) {
    std::size_t total = 0;
    for (int iota : {1, -1}) {
        for (int q = 0;; ++q) {
            const double j = c * q - std::log2(gamma);
            if (j > j_ceiling + 1e-12) break;
            // K_{j,c}
            std::size_t n_shears = 0;
            const double bound = std::pow(2.0, j / 2.0) * delta;
            for (long z = static_cast<long>(std::ceil((-bound + delta) / c - 1e-9));; ++z) {
                const double k = -delta + c * z;
                if (k > bound + 1e-9) break;
                if (std::fabs(k) <= bound + 1e-9) ++n_shears;
            }
            const double d1 = iota == 1 ? c * std::pow(2.0, -j) : c * std::pow(2.0, -j / 2.0);
            const double d2 = iota == 1 ? c * std::pow(2.0, -j / 2.0) : c * std::pow(2.0, -j);
            std::size_t m_count = 0;
            for (long z1 = 0; d1 * z1 <= 1.0 + 1e-9; ++z1)
                for (long z2 = 0; d2 * z2 <= 1.0 + 1e-9; ++z2) ++m_count;
            total += n_shears * m_count;
        }
    }
    return total;
}

} // namespace

TEST_CASE("discrete transform entry count matches an independent enumerator") {
    GridField f = GridField::sample(64, 1.0, [](double x1, double x2) {
        return std::sin(2 * M_PI * x1) * std::cos(4 * M_PI * x2);
    });
    const CoefficientSet set = discrete_transform(f, ctx(), 1.0, 80u << 20);
    const std::size_t expected = enumerate_entries(1.0, 2.0, 2.0, set.j_ceiling);
    CHECK(set.total_entries() == expected);
}

TEST_CASE("discrete transform linearity and zero field") {
    GridField zero(32, 1.0, 0.0);
    const CoefficientSet zset = discrete_transform(zero, ctx(), 0.5);
    for (const auto& b : zset.blocks)
        for (double v : b.values) CHECK(v == 0.0);

    Rng rng(43);
    GridField f = band_limited_field(32, rng, 2, 10);
    GridField g = f;
    g *= 2.5;
    const CoefficientSet a = discrete_transform(f, ctx(), 0.5);
    const CoefficientSet b = discrete_transform(g, ctx(), 0.5);
    REQUIRE(a.blocks.size() == b.blocks.size());
    double max_err = 0.0;
    for (std::size_t i = 0; i < a.blocks.size(); ++i)
        for (std::size_t k = 0; k < a.blocks[i].values.size(); ++k)
            max_err = std::max(max_err, std::fabs(b.blocks[i].values[k] - 2.5 * a.blocks[i].values[k]));
    CHECK(max_err < 1e-10);
}

TEST_CASE("besov_discrete matches the lattice-free evaluation") {
    Rng rng(47);
    GridField f = band_limited_field(32, rng, 2, 12);
    for (double c : {1.0, 0.5, 0.3}) {
        const CoefficientSet set = discrete_transform(f, ctx(), c, 80u << 20);
        const double materialised = besov_discrete(set);
        const double direct = besov_discrete_value(f, ctx(), c).value;
        CHECK(std::fabs(materialised - direct) <= 1e-9 * std::max(1.0, materialised));
    }
}

TEST_CASE("besov_discrete scaling and empty set") {
    CoefficientSet empty;
    empty.c = 0.5;
    CHECK(besov_discrete(empty) == 0.0);

    Rng rng(53);
    GridField f = band_limited_field(32, rng, 2, 10);
    const double v1 = besov_discrete_value(f, ctx(), 0.5).value;
    GridField g = f;
    g *= 3.0;
    const double v2 = besov_discrete_value(g, ctx(), 0.5).value;
    CHECK(v2 == doctest::Approx(9.0 * v1).epsilon(1e-10));
}

TEST_CASE("discrete-continuous gap shrinks with the step") {
    Rng rng(59);
    GridField f = band_limited_field(64, rng, 2, 12);
    const double b = besov_continuous(f, ctx()).value;
    double prev_gap = 1e300;
    for (double c : {1.0, 0.5, 0.25}) {
        const double db = besov_discrete_value(f, ctx(), c).value;
        const double gap = std::fabs(db - b);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    CHECK(prev_gap / b < 0.2);
}

TEST_CASE("bessel check") {
    GridField zero(64, 1.0, 0.0);
    const BesselReport z = bessel_check(zero, ctx());
    CHECK(z.energy == 0.0);
    CHECK_FALSE(z.defined);

    Rng rng(61);
    GridField f = band_limited_field(64, rng, 3, 20);
    const BesselReport r1 = bessel_check(f, ctx());
    GridField g = f;
    g *= 2.0;
    const BesselReport r2 = bessel_check(g, ctx());
    CHECK(r1.ratio == doctest::Approx(r2.ratio).epsilon(1e-12));

    const double c_est = bessel_bound_estimate(ctx(), 64, 1.0);
    for (int t = 0; t < 10; ++t) {
        GridField h = band_limited_field(64, rng, 2, 24);
        const BesselReport rep = bessel_check(h, ctx());
        CHECK(rep.ratio <= c_est * 1.01);
    }
}

TEST_CASE("seminorm report writer") {
    write_seminorm_report({{"test", 1.25, 0.02, true}}, "seminorm_report_test.csv");
    std::FILE* fp = std::fopen("seminorm_report_test.csv", "rb");
    REQUIRE(fp != nullptr);
    char line[128];
    REQUIRE(std::fgets(line, sizeof(line), fp) != nullptr);
    CHECK(std::string(line) == "name,value,tolerance,converged\n");
    std::fclose(fp);
    std::remove("seminorm_report_test.csv");
}
