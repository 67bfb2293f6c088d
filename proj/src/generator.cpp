#include "sgl/generator.hpp"

#include <cmath>

#include "sgl/util.hpp"

namespace sgl {

namespace {

// 1-D helper integrals over the (even) profile supports.
double profile_integral(const GeneratorProfile& gen, bool psi, int power_of_u, int panels) {
    const double lo = psi ? std::max(gen.psi_lo, 1e-12) : 1e-12;
    const double hi = psi ? gen.psi_hi : gen.phi_hi;
    auto f = [&](double u) {
        const double p = psi ? gen.psi1(u) : gen.phi1(u);
        return p * p * std::pow(u, power_of_u);
    };
    return 2.0 * integrate(f, lo, hi, panels);
}

} // namespace

GeneratorProfile make_default_generator() {
    GeneratorProfile g;
    g.fast = true;
    g.psi_bump = Bump1D{0.125, 0.25, 0.5, 1.0, 1.0};
    g.phi_bump = Bump1D{0.0, 0.0, 0.5, 1.0, 1.0};
    g.psi_lo = 0.125;
    g.psi_hi = 1.0;
    g.phi_hi = 1.0;
    g.decay_M = 4;
    g.decay_L = 4;

    // lambda^2 * I1 * I2 = (2 pi)^2 with I1 = int |psi0|^2/u^4, I2 = int |phi|^2
    const double i1 = profile_integral(g, true, -4, 256);
    const double i2 = profile_integral(g, false, 0, 256);
    const double lambda = 2.0 * M_PI / std::sqrt(i1 * i2);
    g.normalization = lambda;
    g.psi_bump.amp = lambda;
    g.psi1_hat = [b = g.psi_bump](double u) { return b(u); };
    g.phi1_hat = [b = g.phi_bump](double u) { return b(u); };
    return g;
}

double normalization_integral(const GeneratorProfile& gen) {
    return profile_integral(gen, true, -4, 256) * profile_integral(gen, false, 0, 256);
}

namespace {

// 2-D quadrature of |psi_hat|^2 / |xi_1|^p, log grid in |xi_1|, linear in xi_2.
double admissibility_quad(const GeneratorProfile& gen, int octaves_pad, int nodes_per_octave, int n2) {
    const double lo = gen.psi_lo > 0 ? gen.psi_lo : 1e-8;
    const double hi = gen.psi_hi > 0 ? gen.psi_hi : 1e4;
    const double v_hi = gen.phi_hi > 0 ? gen.phi_hi : 1e4;
    const double llo = std::log2(lo) - octaves_pad;
    const double lhi = std::log2(hi) + octaves_pad;
    const int n1 = static_cast<int>(std::ceil((lhi - llo) * nodes_per_octave));
    const double h1 = (lhi - llo) / n1;
    const double h2 = 2.0 * v_hi / n2;
    double acc = 0.0;
    for (int i = 0; i <= n1; ++i) {
        const double u = std::pow(2.0, llo + i * h1);
        const double w1 = (i == 0 || i == n1) ? 0.5 : 1.0;
        const double pu = gen.psi1(u);
        if (pu == 0.0) continue;
        double inner = 0.0;
        for (int j = 0; j <= n2; ++j) {
            const double v = -v_hi + j * h2;
            const double w2 = (j == 0 || j == n2) ? 0.5 : 1.0;
            const double pv = gen.phi1(v);
            inner += w2 * pv * pv;
        }
        // both signs of xi_1; d xi_1 = u ln 2 d(log2 u)
        acc += w1 * 2.0 * (pu * pu / (u * u)) * u * std::log(2.0) * inner * h2;
    }
    return acc * h1;
}

} // namespace

double admissibility_constant(const GeneratorProfile& gen) {
    const double coarse = admissibility_quad(gen, 2, 64, 256);
    const double fine = admissibility_quad(gen, 3, 128, 512);
    if (coarse == 0.0 && fine == 0.0) return 0.0;
    const double rel = std::fabs(fine - coarse) / std::max(std::fabs(fine), 1e-300);
    if (rel > 1e-3)
        throw QuadratureError("admissibility_constant: quadrature did not converge (generator may be non-admissible)");
    return fine;
}

double admissibility_constant_gauss(const GeneratorProfile& gen) {
    const double lo = gen.psi_lo > 0 ? gen.psi_lo : 1e-8;
    const double hi = gen.psi_hi > 0 ? gen.psi_hi : 1e4;
    const double v_hi = gen.phi_hi > 0 ? gen.phi_hi : 1e4;
    auto fu = [&](double u) {
        const double p = gen.psi1(u);
        return p * p / (u * u);
    };
    auto fv = [&](double v) {
        const double p = gen.phi1(v);
        return p * p;
    };
    return (2.0 * integrate(fu, lo, hi, 256)) * (2.0 * integrate(fv, 0.0, v_hi, 256));
}

DecayConstants decay_bound_constants(const GeneratorProfile& gen) {
    DecayConstants c{0.0, 0.0};
    const double hi = std::max({gen.psi_hi, gen.phi_hi, 4.0}) * 4.0;
    const int samples = 20000;
    for (int i = 0; i <= samples; ++i) {
        const double u = hi * i / samples;
        const double envelope_psi = std::pow(std::min(u, 1.0), 4) / std::pow(1.0 + u, 4);
        const double envelope_phi = std::pow(1.0 + u, -4);
        const double pv = std::fabs(gen.psi1(u));
        const double fv = std::fabs(gen.phi1(u));
        if (pv > 0.0 && envelope_psi > 0.0) c.c_psi_bound = std::max(c.c_psi_bound, pv / envelope_psi);
        if (fv > 0.0) c.c_phi_bound = std::max(c.c_phi_bound, fv / envelope_phi);
    }
    return c;
}

} // namespace sgl
