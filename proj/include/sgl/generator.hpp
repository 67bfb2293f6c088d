#ifndef SGL_GENERATOR_HPP
#define SGL_GENERATOR_HPP

#include <functional>
#include <stdexcept>

namespace sgl {

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// C^4 polynomial step: s(0)=0, s(1)=1, first four derivatives vanish at both ends.
inline double smoothstep4(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * t * t * t * (126.0 + t * (-420.0 + t * (540.0 + t * (-315.0 + t * 70.0))));
}

// Even C^4 window in |u|: 0 outside [lo0, hi0], 1 on [lo1, hi1], smoothstep
// ramps between. lo0 == lo1 == 0 gives a low-pass plateau.
struct Bump1D {
    double lo0 = 0.0, lo1 = 0.0, hi1 = 0.0, hi0 = 0.0;
    double amp = 1.0;

    double operator()(double u) const {
        u = u < 0 ? -u : u;
        if (u >= hi0 || u <= lo0) return (u <= lo0 && lo0 == 0.0 && lo1 == 0.0) ? amp : 0.0;
        if (u >= hi1) return amp * smoothstep4((hi0 - u) / (hi0 - hi1));
        if (u >= lo1) return amp;
        return amp * smoothstep4((u - lo0) / (lo1 - lo0));
    }
};

// 1-D generator profiles psi^1 (wavelet) and phi^1 (scaling) in frequency,
// real-valued and even. The tensor generator is psi = psi^1 (x) phi^1.
struct GeneratorProfile {
    std::function<double(double)> psi1_hat;
    std::function<double(double)> phi1_hat;
    // support hints in |u| used by windowed frequency loops
    double psi_lo = 0.0;
    double psi_hi = 0.0;
    double phi_hi = 0.0;
    int decay_M = 4;
    int decay_L = 4;
    double normalization = 1.0;

    // fast inlined path for the default band-limited profiles
    bool fast = false;
    Bump1D psi_bump;
    Bump1D phi_bump;

    double psi1(double u) const { return fast ? psi_bump(u) : psi1_hat(u); }
    double phi1(double u) const { return fast ? phi_bump(u) : phi1_hat(u); }
    // tensor evaluation of psi_hat
    double psi_hat(double u, double v) const { return psi1(u) * phi1(v); }
};

// Band-limited Meyer-type default: psi1_hat a C^4 bump supported in
// 1/8 <= |u| <= 1 (plateau [1/4,1/2]), phi1_hat a C^4 low-pass supported in
// |u| <= 1 (plateau to 1/2), normalised so that
// integral |psi_hat|^2 / xi_1^4 = (2 pi)^2.
GeneratorProfile make_default_generator();

// Quadrature of integral |psi_hat(xi)|^2 / |xi_1|^4 dxi; equals (2 pi)^2 for a
// correctly normalised generator.
double normalization_integral(const GeneratorProfile& gen);

// C_psi = integral |psi_hat|^2 / |xi_1|^2 on a log-radial grid in xi_1.
// Throws QuadratureError when grid refinement fails to converge.
double admissibility_constant(const GeneratorProfile& gen);
// Same constant by composite Gauss-Legendre panels (independent rule).
double admissibility_constant_gauss(const GeneratorProfile& gen);

// Smallest C with |phi1_hat| <= C (1+|u|)^-4 and |psi1_hat| <= C min(|u|,1)^4/(1+|u|)^4,
// estimated by dense sampling. Finite for admissible generators.
struct DecayConstants {
    double c_psi_bound;
    double c_phi_bound;
};
DecayConstants decay_bound_constants(const GeneratorProfile& gen);

} // namespace sgl

#endif
