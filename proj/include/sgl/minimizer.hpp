#ifndef SGL_MINIMIZER_HPP
#define SGL_MINIMIZER_HPP

#include <string>
#include <vector>

#include "sgl/transforms.hpp"

namespace sgl {

// Squared Fourier symbol of the Besov seminorm on the working grid:
// sum sigma(k) |f_hat(k)|^2 equals |f|_{B,p}^2 at the shared quadrature.
// The variant with the low pass adds |K_hat(k)|^2.
struct MultiplierTable {
    int n = 0;
    bool with_low_pass = false;
    double gamma0 = 0.0; // scale cap used for the S_p variant (0 = full Gamma)
    std::vector<double> sigma;

    double at_freq(int k1, int k2) const;
};

MultiplierTable build_multiplier(const TransformContext& ctx, int grid_n, bool with_low_pass,
                                 double gamma0 = 0.0);

// one semi-implicit step: implicit in the elastic symbol, explicit in the
// double-well derivative
GridField flow_step(const GridField& u, double tau, double eps, const MultiplierTable& table);

struct FlowTrace {
    std::vector<double> elastic;
    std::vector<double> potential;
    std::vector<double> total;
    int steps = 0;
    bool diverged = false;
};

struct MinimizeResult {
    GridField field;
    FlowTrace trace;
};

struct MinimizeOptions {
    int max_steps = 500;
    double energy_tol = 1e-9; // stop when the relative decrease falls below
    double tau = 0.0;         // 0 = default eps/10
    std::string snapshot_dir; // empty = no snapshots
    int snapshot_every = 0;
};

// gradient flow of eps sum sigma |u_hat|^2 + potential; aborts with the
// divergence flag after five consecutive energy increases
MinimizeResult minimize(const GridField& u0, double eps, const MultiplierTable& table,
                        const MinimizeOptions& opts = {});

double table_energy(const GridField& u, const MultiplierTable& table);

void write_flow_trace(const FlowTrace& t, const std::string& path);

} // namespace sgl

#endif
