#include "sgl/minimizer.hpp"

#include <cmath>
#include <stdexcept>

#include "sgl/energies.hpp"
#include "sgl/util.hpp"

namespace sgl {

double MultiplierTable::at_freq(int k1, int k2) const {
    const int i = k1 >= 0 ? k1 : k1 + n;
    const int j = k2 >= 0 ? k2 : k2 + n;
    return sigma[static_cast<std::size_t>(i) * n + j];
}

MultiplierTable build_multiplier(const TransformContext& ctx, int grid_n, bool with_low_pass,
                                 double gamma0) {
    MultiplierTable t;
    t.n = grid_n;
    t.with_low_pass = with_low_pass;
    t.gamma0 = gamma0;
    if (gamma0 > 0.0 && gamma0 < ctx.sys().gamma()) {
        // scale-capped variant: rebuild the system with ceiling gamma0
        ShearletSystem capped(ctx.sys().generator(), gamma0, ctx.sys().delta(),
                              std::min(gamma0, ctx.sys().gamma_star()), ctx.sys().delta_star(),
                              Bump1D{0.0, 0.0, 1.6, 3.0, 1.0}, ctx.sys().support_radius());
        TransformContext capped_ctx(capped, ctx.weight(), ctx.quad());
        t.sigma = shear_multiplier_grid(capped_ctx, grid_n, 1.0, 5.0);
    } else {
        t.sigma = shear_multiplier_grid(ctx, grid_n, 1.0, 5.0);
    }
    if (with_low_pass) {
        for (int i = 0; i < grid_n; ++i) {
            const int k1 = i <= grid_n / 2 - 1 ? i : i - grid_n;
            for (int j = 0; j < grid_n; ++j) {
                const int k2 = j <= grid_n / 2 - 1 ? j : j - grid_n;
                const double k = ctx.sys().low_pass_hat(k1, k2);
                t.sigma[static_cast<std::size_t>(i) * grid_n + j] += k * k;
            }
        }
    }
    return t;
}

double table_energy(const GridField& u, const MultiplierTable& table) {
    const SpectralField F = to_spectral(u);
    double s = 0.0;
    for (std::size_t i = 0; i < table.sigma.size(); ++i) s += table.sigma[i] * std::norm(F.coeffs()[i]);
    return s;
}

GridField flow_step(const GridField& u, double tau, double eps, const MultiplierTable& table) {
    if (!(tau > 0.0) || !(eps > 0.0)) throw std::invalid_argument("flow_step: tau, eps must be positive");
    if (u.n() != table.n) throw std::invalid_argument("flow_step: grid/table size mismatch");
    GridField wprime(u.n(), u.side());
    for (std::size_t i = 0; i < u.values().size(); ++i)
        wprime.values()[i] = double_well_derivative(u.values()[i]);
    SpectralField U = to_spectral(u);
    const SpectralField Wp = to_spectral(wprime);
    const double c = tau / (4.0 * eps);
    for (std::size_t i = 0; i < U.coeffs().size(); ++i) {
        U.coeffs()[i] = (U.coeffs()[i] - c * Wp.coeffs()[i]) / (1.0 + 2.0 * tau * eps * table.sigma[i]);
    }
    return from_spectral(U);
}

MinimizeResult minimize(const GridField& u0, double eps, const MultiplierTable& table,
                        const MinimizeOptions& opts) {
    u0.validate();
    const double tau = opts.tau > 0.0 ? opts.tau : eps / 10.0;
    MinimizeResult res{u0, {}};
    auto record = [&](const GridField& u) {
        const double el = eps * table_energy(u, table);
        const double pot = potential_term(u, eps);
        res.trace.elastic.push_back(el);
        res.trace.potential.push_back(pot);
        res.trace.total.push_back(el + pot);
    };
    record(res.field);
    int rising = 0;
    for (int step = 1; step <= opts.max_steps; ++step) {
        res.field = flow_step(res.field, tau, eps, table);
        record(res.field);
        res.trace.steps = step;
        if (!opts.snapshot_dir.empty() && opts.snapshot_every > 0 && step % opts.snapshot_every == 0)
            write_asgf1(res.field, opts.snapshot_dir + "/step_" + std::to_string(step) + ".asgf1");
        const double prev = res.trace.total[step - 1];
        const double cur = res.trace.total[step];
        if (cur > prev * (1.0 + 1e-12)) {
            if (++rising >= 5) {
                res.trace.diverged = true;
                break;
            }
        } else {
            rising = 0;
        }
        if (prev > 0.0 && (prev - cur) >= 0.0 && (prev - cur) / prev < opts.energy_tol) break;
    }
    return res;
}

void write_flow_trace(const FlowTrace& t, const std::string& path) {
    CsvWriter csv(path, {"step", "elastic", "potential", "total"});
    for (std::size_t i = 0; i < t.total.size(); ++i)
        csv.row_values({static_cast<double>(i), t.elastic[i], t.potential[i], t.total[i]});
}

} // namespace sgl
