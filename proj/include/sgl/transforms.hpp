#ifndef SGL_TRANSFORMS_HPP
#define SGL_TRANSFORMS_HPP

#include <complex>
#include <string>
#include <vector>

#include "sgl/grid.hpp"
#include "sgl/system.hpp"

namespace sgl {

struct FrameScanError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SupportLeakError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// System + weight + quadrature spec, validated by a frame-bound scan at
// construction. All transform operations require a context.
class TransformContext {
public:
    TransformContext(ShearletSystem sys, DirectionalWeight weight, QuadratureSpec quad = {},
                     double scan_lo = 1.0, double scan_hi = 64.0, int scan_radial = 24,
                     int scan_angular = 32);

    const ShearletSystem& sys() const { return sys_; }
    const DirectionalWeight& weight() const { return weight_; }
    const QuadratureSpec& quad() const { return quad_; }
    const FrameBounds& frame() const { return frame_; }

private:
    ShearletSystem sys_;
    DirectionalWeight weight_;
    QuadratureSpec quad_;
    FrameBounds frame_;
};

// Shared logarithmic-in-a / uniform-in-s node grid for a given sampling
// resolution. Scales whose frequency window lies beyond the grid Nyquist are
// truncated; the finest evaluated scale is recorded as the resolution ceiling.
struct NodeGrid {
    std::vector<double> a;        // scale nodes, coarse to fine
    std::vector<double> a_weight; // trapezoid weight x log-step x a ln 2 (the da measure)
    std::vector<double> s;        // shear nodes on [-Delta, Delta]
    std::vector<double> s_weight; // trapezoid weight x step
    double a_min = 0.0;           // resolution ceiling (finest scale kept)
    bool ceiling_truncated = false;
};

NodeGrid make_node_grid(const ShearletSystem& sys, int grid_n, double side,
                        const QuadratureSpec& quad);

struct SeminormResult {
    double value = 0.0;
    bool converged = true;      // quadrature refinement agreement within 2%
    double refine_change = 0.0; // relative change under node-halving
    double a_min = 0.0;         // resolution ceiling
    bool ceiling_truncated = false;
};

// <f, psi^{omega,per}_{a,s,t,iota}> for one parameter tuple, evaluated
// spectrally (periodisation = integer-frequency sampling). side must be 1.
double periodized_coefficient(const GridField& f, const TransformContext& ctx,
                              double a, double s, Vec2 t, int iota);

// |f|_{B,p}^2 on the unit torus: Besov density a^{-2} a^{-3}, t integrated
// exactly over the full cell (Parseval per node).
SeminormResult besov_continuous(const GridField& f, const TransformContext& ctx);

// |f|_{B,[-r,r]}^2 with non-periodic elements emulated on an enlarged torus;
// t restricted to the centered box [-r,r]^2 (midpoint Riemann sum on the
// sampling grid). Errors if f carries mass near the torus seam.
SeminormResult besov_box(const GridField& f, const TransformContext& ctx, double r);

// Bessel-type energy (density a^{-3}, no a^{-2}) and its ratio to ||f||^2.
struct BesselReport {
    double energy = 0.0;
    double ratio = 0.0;
    bool defined = true; // false for f = 0
};
BesselReport bessel_check(const GridField& f, const TransformContext& ctx);

// sup over grid frequencies of the Bessel multiplier; coefficient energy of
// any grid field is bounded by this times ||f||^2.
double bessel_bound_estimate(const TransformContext& ctx, int grid_n, double side);

// Per-frequency multiplier table on the shared node grid. density_power = 5
// gives the Besov symbol (sum m(k) |f_hat(k)|^2 = |f|_{B,p}^2 with identical
// quadrature), density_power = 3 the Bessel symbol.
std::vector<double> shear_multiplier_grid(const TransformContext& ctx, int grid_n, double side,
                                          double density_power);

// rounding operator [x]_c on the scale grid c N_0 - log2(Gamma)
double round_scale(double x, double c, double gamma);
// rounding operator [x]_{j,c} on K_{j,c} = {k in -Delta + c Z : |k| <= 2^{j/2} Delta}
double round_shear(double x, double j, double c, double delta);

// scale indices j in J_c = c N_0 - log2(Gamma), truncated at the grid ceiling
std::vector<double> scale_indices(double c, double gamma, double j_ceiling);
// shear indices K_{j,c}
std::vector<double> shear_indices(double j, double c, double delta);

// Discrete coefficient set: per (iota, j, k) block of lattice samples.
struct CoefficientBlock {
    int iota = 1;
    double j = 0.0;
    double k = 0.0;      // shear index; shear value is 2^{-j/2} k
    double d1 = 0.0;     // lattice spacing along the first lattice axis
    double d2 = 0.0;
    int z1 = 0;          // lattice point counts (m = (d1 z1, d2 z2) in [0,1]^2)
    int z2 = 0;
    std::vector<double> values; // row-major z1 x z2
};

struct CoefficientSet {
    double c = 0.0;
    double gamma = 0.0;
    double delta = 0.0;
    double j_ceiling = 0.0;
    bool ceiling_truncated = false;
    std::vector<CoefficientBlock> blocks;

    std::size_t total_entries() const;
};

// Materialises all coefficients (direct evaluation; intended for small grids
// and CSV export). Throws when the entry count exceeds max_entries.
CoefficientSet discrete_transform(const GridField& f, const TransformContext& ctx, double c,
                                  std::size_t max_entries = 4u << 20);

// ln2 c^4 sum 2^{2j} |entry|^2 over a materialised set.
double besov_discrete(const CoefficientSet& set);

// Same value computed without materialising the lattice (exact Dirichlet-kernel
// contraction per (j,k) block); used by the discrete energies and sweeps.
SeminormResult besov_discrete_value(const GridField& f, const TransformContext& ctx, double c);

// CSV export with columns (iota, j, k, m1, m2, value).
void write_coefficients_csv(const CoefficientSet& set, const std::string& path);

// CSV rows (name, value, tolerance, converged-flag).
struct SeminormReportRow {
    std::string name;
    double value;
    double tolerance;
    bool converged;
};
void write_seminorm_report(const std::vector<SeminormReportRow>& rows, const std::string& path);

} // namespace sgl

#endif
