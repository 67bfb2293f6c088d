#include "sgl/system.hpp"

#include <cmath>
#include <stdexcept>

namespace sgl {

ShearletSystem::ShearletSystem(GeneratorProfile gen, double gamma, double delta,
                               double gamma_star, double delta_star,
                               Bump1D k_window, double support_radius)
    : gen_(std::move(gen)),
      gamma_(gamma),
      delta_(delta),
      gamma_star_(gamma_star),
      delta_star_(delta_star),
      k_window_(k_window),
      support_radius_(support_radius) {
    if (gamma_ < gamma_star_ || delta_ < delta_star_)
        throw std::invalid_argument("ShearletSystem: need Gamma >= Gamma*, Delta >= Delta*");
    if (gamma_ <= 0.0 || delta_ <= 0.0) throw std::invalid_argument("ShearletSystem: positive Gamma, Delta");
    c_psi_ = admissibility_constant(gen_);
}

ShearletSystem ShearletSystem::make_default(double gamma, double delta) {
    return ShearletSystem(make_default_generator(), gamma, delta, 1.0, 1.0,
                          Bump1D{0.0, 0.0, 1.6, 3.0, 1.0}, 1.0);
}

double ShearletSystem::low_pass_hat(double xi1, double xi2) const {
    const double r = std::hypot(xi1, xi2);
    return r * k_window_(r);
}

void ShearletSystem::check_params(double a, double s, int iota) const {
    if (!(a > 0.0) || a > gamma_) throw std::invalid_argument("shearlet element: a must lie in (0, Gamma]");
    if (std::fabs(s) > delta_) throw std::invalid_argument("shearlet element: |s| must not exceed Delta");
    if (iota != 1 && iota != -1) throw std::invalid_argument("shearlet element: iota must be +1 or -1");
}

double ShearletSystem::element_hat(double a, double s, int iota, double xi1, double xi2) const {
    const double p = iota == 1 ? xi1 : xi2;
    const double q = iota == 1 ? xi2 : xi1;
    return std::pow(a, 0.75) * gen_.psi1(a * p) * gen_.phi1(std::sqrt(a) * (q + s * p));
}

std::complex<double> fourier_element(const ShearletSystem& sys, double a, double s,
                                     Vec2 t, int iota, Vec2 xi) {
    sys.check_params(a, s, iota);
    const double mag = sys.element_hat(a, s, iota, xi.x, xi.y);
    const double phase = -2.0 * M_PI * (xi.x * t.x + xi.y * t.y);
    return mag * std::complex<double>(std::cos(phase), std::sin(phase));
}

double shear_multiplier(const ShearletSystem& sys, const DirectionalWeight& weight, Vec2 xi,
                        double density_power, const QuadratureSpec& quad) {
    const GeneratorProfile& gen = sys.generator();
    const double ln2 = std::log(2.0);
    double total = 0.0;
    for (int iota : {1, -1}) {
        const double p = iota == 1 ? xi.x : xi.y;
        const double q = iota == 1 ? xi.y : xi.x;
        const double ap = std::fabs(p);
        if (ap == 0.0) continue; // psi1_hat(0) = 0
        double a_lo = gen.psi_lo / ap;
        double a_hi = std::min(gen.psi_hi / ap, sys.gamma());
        if (gen.psi_lo <= 0.0) a_lo = std::min(1e-6 / ap, a_hi / 1024.0);
        if (!(a_lo < a_hi)) continue;
        const double u_lo = std::log2(a_lo), u_hi = std::log2(a_hi);
        const int na = std::max(2, static_cast<int>(std::ceil((u_hi - u_lo) * quad.a_per_octave)));
        const double hu = (u_hi - u_lo) / na;
        for (int i = 0; i <= na; ++i) {
            const double a = std::pow(2.0, u_lo + i * hu);
            const double wa = (i == 0 || i == na) ? 0.5 : 1.0;
            const double psi_val = gen.psi1(a * p);
            if (psi_val == 0.0) continue;
            const double sq = std::sqrt(a);
            // support of phi1(sqrt(a)(q + s p)) in s, intersected with [-Delta, Delta]
            const double span = (gen.phi_hi > 0 ? gen.phi_hi : 1e6) / sq;
            double s_lo = (-q - span) / p;
            double s_hi = (-q + span) / p;
            if (s_lo > s_hi) std::swap(s_lo, s_hi);
            s_lo = std::max(s_lo, -sys.delta());
            s_hi = std::min(s_hi, sys.delta());
            if (!(s_lo < s_hi)) continue;
            const int ns = quad.s_nodes;
            const double hs = (s_hi - s_lo) / ns;
            double inner = 0.0;
            for (int j = 0; j <= ns; ++j) {
                const double s = s_lo + j * hs;
                const double ws = (j == 0 || j == ns) ? 0.5 : 1.0;
                const double w = weight(iota, s);
                if (w == 0.0) continue;
                const double phi_val = gen.phi1(sq * (q + s * p));
                inner += ws * w * w * phi_val * phi_val;
            }
            // a^{3/2} |psi_hat|^2 a^{-density_power} ds da, log-a Jacobian a ln2
            total += wa * hu * psi_val * psi_val * std::pow(a, 2.5 - density_power) * ln2 * inner * hs;
        }
    }
    return total;
}

double h1_multiplier(const ShearletSystem& sys, const DirectionalWeight& weight, Vec2 xi,
                     const QuadratureSpec& quad) {
    const double k = sys.low_pass_hat(xi.x, xi.y);
    return k * k + shear_multiplier(sys, weight, xi, 5.0, quad);
}

FrameBounds frame_bounds(const ShearletSystem& sys, const DirectionalWeight& weight,
                         double annulus_lo, double annulus_hi, int n_radial, int n_angular,
                         const QuadratureSpec& quad) {
    if (!(annulus_lo > 0.0) || !(annulus_hi > annulus_lo))
        throw std::invalid_argument("frame_bounds: invalid annulus");
    FrameBounds fb;
    fb.a_est = 1e300;
    fb.b_est = 0.0;
    const double llo = std::log(annulus_lo), lhi = std::log(annulus_hi);
    for (int i = 0; i < n_radial; ++i) {
        const double r = std::exp(llo + (lhi - llo) * (n_radial == 1 ? 0.0 : static_cast<double>(i) / (n_radial - 1)));
        for (int j = 0; j < n_angular; ++j) {
            const double ang = 2.0 * M_PI * j / n_angular;
            const Vec2 xi{r * std::cos(ang), r * std::sin(ang)};
            const double m = h1_multiplier(sys, weight, xi, quad);
            const double ratio = m / (r * r);
            fb.a_est = std::min(fb.a_est, ratio);
            fb.b_est = std::max(fb.b_est, ratio);
        }
    }
    fb.ok = fb.a_est > 1e-12 * std::max(fb.b_est, 1e-300);
    return fb;
}

} // namespace sgl
