#ifndef SGL_SYSTEM_HPP
#define SGL_SYSTEM_HPP

#include <complex>

#include "sgl/anisotropy.hpp"
#include "sgl/generator.hpp"

namespace sgl {

// Quadrature parameterisation shared by the (a,s) integrals: logarithmic
// trapezoid in a, uniform trapezoid in s.
struct QuadratureSpec {
    int a_per_octave = 64;
    int s_nodes = 64;
};

// Cone-adapted system: generator, scale ceiling Gamma, shear range Delta,
// the low-pass window K and an effective spatial support radius used by the
// seam-leak detector of the box functionals.
class ShearletSystem {
public:
    ShearletSystem() = default;
    ShearletSystem(GeneratorProfile gen, double gamma, double delta,
                   double gamma_star, double delta_star,
                   Bump1D k_window, double support_radius);

    static ShearletSystem make_default(double gamma = 2.0, double delta = 2.0);

    const GeneratorProfile& generator() const { return gen_; }
    double gamma() const { return gamma_; }
    double delta() const { return delta_; }
    double gamma_star() const { return gamma_star_; }
    double delta_star() const { return delta_star_; }
    double support_radius() const { return support_radius_; }
    double c_psi() const { return c_psi_; }

    // K_hat(xi) = |xi| * window(|xi|); K_hat/|xi| lies in [A,B] on [-1,1]^2.
    double low_pass_hat(double xi1, double xi2) const;

    // Frequency-domain element value without the translation phase:
    // a^{3/4} psi_hat(a xi_p, sqrt(a)(xi_q + s xi_p)) with (p,q) swapped for
    // the second cone.
    double element_hat(double a, double s, int iota, double xi1, double xi2) const;

    void check_params(double a, double s, int iota) const;

private:
    GeneratorProfile gen_;
    double gamma_ = 0.0, delta_ = 0.0, gamma_star_ = 0.0, delta_star_ = 0.0;
    Bump1D k_window_;
    double support_radius_ = 1.0;
    double c_psi_ = 0.0;
};

// Full Fourier transform of the shearlet element psi_{a,s,t,iota} at xi.
std::complex<double> fourier_element(const ShearletSystem& sys, double a, double s,
                                     Vec2 t, int iota, Vec2 xi);

// Squared H^1 frame multiplier |S(xi)|^2: |K_hat|^2 plus both cone integrals
// with Besov density a^{-2} a^{-3}. The (a,s) quadrature adapts its node
// placement to the (band-limited) integrand support at this frequency.
double h1_multiplier(const ShearletSystem& sys, const DirectionalWeight& weight, Vec2 xi,
                     const QuadratureSpec& quad = {});

// Shearlet part only (no low pass), same quadrature. density_power selects
// a^{-2} a^{-3} (besov, power 5) or a^{-3} (bessel, power 3) weighting.
double shear_multiplier(const ShearletSystem& sys, const DirectionalWeight& weight, Vec2 xi,
                        double density_power, const QuadratureSpec& quad = {});

struct FrameBounds {
    double a_est = 0.0;
    double b_est = 0.0;
    bool ok = false;
};

// min/max of multiplier(xi)/|xi|^2 over a log-radial scan of the annulus
// lo <= |xi| <= hi. ok is false when a_est fails to be positive.
FrameBounds frame_bounds(const ShearletSystem& sys, const DirectionalWeight& weight,
                         double annulus_lo, double annulus_hi, int n_radial, int n_angular,
                         const QuadratureSpec& quad = {});

} // namespace sgl

#endif
