#ifndef SGL_ENERGIES_HPP
#define SGL_ENERGIES_HPP

#include <optional>
#include <string>
#include <vector>

#include "sgl/phase.hpp"
#include "sgl/transforms.hpp"

namespace sgl {

// double well W(u) = u^2 (1-u)^2
double double_well(double u);
double double_well_derivative(double u);

// (1/4 eps) mean of W(u) over the grid
double potential_term(const GridField& f, double eps);

// c = integral_0^1 sqrt(W(s)) ds = 1/6, by quadrature, asserted against the
// closed form.
double perimeter_constant();

// Omega(n)^2 = max(|n1|,|n2|) (|n1| w(1, n2/n1)^2 + |n2| w(-1, n1/n2)^2),
// with w(+-1, +-inf) = 0. The coefficients carry |.| so that Omega(-n) =
// Omega(n); the literal right-hand side of the association (which can go
// negative for mixed-sign normals) is exposed separately.
double norm_from_weight(const DirectionalWeight& w, Vec2 n);
double association_rhs_literal(const DirectionalWeight& w, Vec2 n);
AnisotropyNorm make_norm_from_weight(const DirectionalWeight& w);

struct WeightFitResult {
    DirectionalWeight weight;
    double residual = 0.0; // rms error of Omega^2 over the sample directions
    bool attained = false; // residual below threshold
};

// Regularised Gauss-Newton fit of a piecewise-linear weight whose induced
// anisotropy matches the target on sampled directions. Exactness is claimed
// for Omega values only; the weight itself is not unique.
WeightFitResult weight_from_norm(const AnisotropyNorm& target, double delta, double delta_star,
                                 int breakpoints = 65, double ridge = 1e-4,
                                 double residual_threshold = 1e-2);

// mean over the grid of Omega(grad f)^2, gradient by spectral differentiation
double anisotropic_dirichlet(const GridField& f, const AnisotropyNorm& norm);
// finite-difference fallback for non-smooth fields
double anisotropic_dirichlet_fd(const GridField& f, const AnisotropyNorm& norm);

struct TameReport {
    bool member = false;
    double margin = 0.0; // |f|_B^2 - (anisotropic dirichlet - U(|f|_H1^2))
    double besov = 0.0;
    double dirichlet = 0.0;
    double slack = 0.0; // U(|f|_H1^2)
};

// U(x) = x / log2(2 + x)
double tame_slack(double x);

TameReport tame_membership(const GridField& f, const TransformContext& ctx,
                           const AnisotropyNorm& norm);

enum class TameFlag { unchecked, member, not_member };

struct EnergyReport {
    std::string label;
    double eps = 0.0;
    double elastic = 0.0;
    double potential = 0.0;
    double total = 0.0;
    bool finite = true; // false when u lies outside the tame set
    TameFlag tame = TameFlag::unchecked;
    double tame_margin = 0.0;
    int grid_n = 0;
    double step_c = 0.0; // discrete step, 0 for continuous energies
    bool quad_converged = true;
};

// classical anisotropic Ginzburg-Landau energy
EnergyReport gl_energy(const GridField& f, double eps, const AnisotropyNorm& norm);
// shearlet-based energy (flagged infinite outside the tame set)
EnergyReport sgl_energy(const GridField& f, double eps, const TransformContext& ctx,
                        const AnisotropyNorm& norm);
// discrete shearlet-based energy at step c = step_map(eps)
EnergyReport dsgl_energy(const GridField& f, double eps, const TransformContext& ctx,
                         const AnisotropyNorm& norm, double step_c);

// P_Omega restricted to polygons: (1/6) sum_i Omega(n_i) |edge_i|
double perimeter_functional(const Polygon& p, const AnisotropyNorm& norm);

void write_energy_reports(const std::vector<EnergyReport>& reports, const std::string& path);

} // namespace sgl

#endif
