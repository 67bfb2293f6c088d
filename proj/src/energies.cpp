#include "sgl/energies.hpp"

#include <cmath>
#include <stdexcept>

#include "sgl/util.hpp"

namespace sgl {

double double_well(double u) {
    return u * u * (1.0 - u) * (1.0 - u);
}

double double_well_derivative(double u) {
    return 2.0 * u * (1.0 - u) * (1.0 - 2.0 * u);
}

double potential_term(const GridField& f, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("potential_term: eps must be positive");
    double s = 0.0;
    for (double v : f.values()) s += double_well(v);
    return s / f.values().size() / (4.0 * eps);
}

double perimeter_constant() {
    // integral_0^1 s(1-s) ds
    const double q = integrate([](double s) { return std::sqrt(double_well(s)); }, 0.0, 1.0, 128);
    if (std::fabs(q - 1.0 / 6.0) > 1e-12)
        throw std::runtime_error("perimeter_constant: quadrature disagrees with 1/6");
    return q;
}

double norm_from_weight(const DirectionalWeight& w, Vec2 n) {
    const double a1 = std::fabs(n.x), a2 = std::fabs(n.y);
    const double w1 = n.x != 0.0 ? w(1, n.y / n.x) : 0.0;   // w(+-1, +-inf) = 0
    const double w2 = n.y != 0.0 ? w(-1, n.x / n.y) : 0.0;
    const double sq = std::max(a1, a2) * (a1 * w1 * w1 + a2 * w2 * w2);
    return std::sqrt(std::max(sq, 0.0));
}

double association_rhs_literal(const DirectionalWeight& w, Vec2 n) {
    const double w1 = n.x != 0.0 ? w(1, n.y / n.x) : 0.0;
    const double w2 = n.y != 0.0 ? w(-1, n.x / n.y) : 0.0;
    return std::max(std::fabs(n.x), std::fabs(n.y)) * (n.x * w1 * w1 + n.y * w2 * w2);
}

AnisotropyNorm make_norm_from_weight(const DirectionalWeight& w) {
    return AnisotropyNorm(
        [w](Vec2 v) {
            const double len = std::hypot(v.x, v.y);
            if (len == 0.0) return 0.0;
            return len * norm_from_weight(w, {v.x / len, v.y / len});
        },
        "weight");
}

WeightFitResult weight_from_norm(const AnisotropyNorm& target, double delta, double delta_star,
                                 int breakpoints, double ridge, double residual_threshold) {
    // unknowns: weight values on the uniform breakpoint grids of both cones
    const int m = breakpoints;
    const int unknowns = 2 * m;
    const auto bp = [&](int i) { return -delta + 2.0 * delta * i / (m - 1); };

    // sample directions whose shear ratios hit the breakpoints of each cone
    struct Sample {
        Vec2 n;
        double target_sq;
    };
    std::vector<Sample> samples;
    for (int cone = 0; cone < 2; ++cone) {
        for (int i = 0; i < m; ++i) {
            const double s = bp(i);
            Vec2 n = cone == 0 ? Vec2{1.0, s} : Vec2{s, 1.0};
            const double len = std::hypot(n.x, n.y);
            n = {n.x / len, n.y / len};
            const double t = target(n);
            samples.push_back({n, t * t});
        }
    }

    std::vector<double> vals(unknowns, 1.0);
    const auto weight_of = [&](const std::vector<double>& v) {
        std::vector<double> pos(v.begin(), v.begin() + m), neg(v.begin() + m, v.end());
        for (auto& x : pos) x = std::max(x, 0.0);
        for (auto& x : neg) x = std::max(x, 0.0);
        // keep the core strictly positive so the weight stays admissible
        const int lo = static_cast<int>(std::floor((delta - delta_star) / (2.0 * delta) * (m - 1)));
        const int hi = m - 1 - lo;
        for (int i = lo; i <= hi; ++i) {
            pos[i] = std::max(pos[i], 1e-3);
            neg[i] = std::max(neg[i], 1e-3);
        }
        return DirectionalWeight(delta, delta_star, pos, neg);
    };

    // Gauss-Newton on residuals r_d = Omega_fit(n_d)^2 - Omega_target(n_d)^2
    const int nd = static_cast<int>(samples.size());
    for (int iter = 0; iter < 60; ++iter) {
        DirectionalWeight cur = weight_of(vals);
        std::vector<double> resid(nd);
        std::vector<double> jac(static_cast<std::size_t>(nd) * unknowns, 0.0);
        const auto hat = [&](double s, int& i0, double& f0) {
            const double pos = (s + delta) / (2.0 * delta) * (m - 1);
            i0 = std::clamp(static_cast<int>(pos), 0, m - 2);
            f0 = pos - i0;
        };
        for (int d = 0; d < nd; ++d) {
            const Vec2 n = samples[d].n;
            const double fit = norm_from_weight(cur, n);
            resid[d] = fit * fit - samples[d].target_sq;
            const double mx = std::max(std::fabs(n.x), std::fabs(n.y));
            // d(Omega^2)/d(value_i) via the PL hat coordinates
            if (n.x != 0.0 && std::fabs(n.y / n.x) <= delta) {
                int i0;
                double fr;
                hat(n.y / n.x, i0, fr);
                const double wv = cur(1, n.y / n.x);
                const double c = mx * std::fabs(n.x) * 2.0 * wv;
                jac[static_cast<std::size_t>(d) * unknowns + i0] += c * (1.0 - fr);
                jac[static_cast<std::size_t>(d) * unknowns + i0 + 1] += c * fr;
            }
            if (n.y != 0.0 && std::fabs(n.x / n.y) <= delta) {
                int i0;
                double fr;
                hat(n.x / n.y, i0, fr);
                const double wv = cur(-1, n.x / n.y);
                const double c = mx * std::fabs(n.y) * 2.0 * wv;
                jac[static_cast<std::size_t>(d) * unknowns + m + i0] += c * (1.0 - fr);
                jac[static_cast<std::size_t>(d) * unknowns + m + i0 + 1] += c * fr;
            }
        }
        // normal equations with ridge toward the constant weight
        std::vector<double> ata(static_cast<std::size_t>(unknowns) * unknowns, 0.0);
        std::vector<double> atb(unknowns, 0.0);
        for (int d = 0; d < nd; ++d)
            for (int i = 0; i < unknowns; ++i) {
                const double ji = jac[static_cast<std::size_t>(d) * unknowns + i];
                if (ji == 0.0) continue;
                atb[i] -= ji * resid[d];
                for (int j = 0; j < unknowns; ++j)
                    ata[static_cast<std::size_t>(i) * unknowns + j] +=
                        ji * jac[static_cast<std::size_t>(d) * unknowns + j];
            }
        double mean = 0.0;
        for (double v : vals) mean += v;
        mean /= unknowns;
        for (int i = 0; i < unknowns; ++i) {
            ata[static_cast<std::size_t>(i) * unknowns + i] += ridge;
            atb[i] += ridge * (mean - vals[i]); // pull toward the constant weight
        }
        std::vector<double> step = solve_dense(ata, atb, unknowns);
        double step_norm = 0.0;
        for (int i = 0; i < unknowns; ++i) {
            vals[i] += step[i];
            step_norm += step[i] * step[i];
        }
        if (step_norm < 1e-20) break;
    }

    WeightFitResult out{weight_of(vals), 0.0, false};
    double ss = 0.0;
    for (const auto& smp : samples) {
        const double fit = norm_from_weight(out.weight, smp.n);
        const double e = fit * fit - smp.target_sq;
        ss += e * e;
    }
    out.residual = std::sqrt(ss / samples.size());
    out.attained = out.residual <= residual_threshold;
    return out;
}

namespace {

double dirichlet_from_gradient(const GridField& g1, const GridField& g2, const AnisotropyNorm& norm) {
    double s = 0.0;
    const auto& a = g1.values();
    const auto& b = g2.values();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double v = norm(a[i], b[i]);
        s += v * v;
    }
    return s / a.size();
}

void check_norm(const AnisotropyNorm& norm) {
    Rng rng(0x5eedu);
    if (!norm.self_test(rng, 64))
        throw std::invalid_argument("anisotropic_dirichlet: Omega fails the norm self-test");
}

} // namespace

double anisotropic_dirichlet(const GridField& f, const AnisotropyNorm& norm) {
    check_norm(norm);
    auto [g1, g2] = spectral_gradient(f);
    return dirichlet_from_gradient(g1, g2, norm);
}

double anisotropic_dirichlet_fd(const GridField& f, const AnisotropyNorm& norm) {
    check_norm(norm);
    const int n = f.n();
    const double h = f.side() / n;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        const int ip = (i + 1) % n, im = (i + n - 1) % n;
        for (int j = 0; j < n; ++j) {
            const int jp = (j + 1) % n, jm = (j + n - 1) % n;
            const double d1 = (f.at(ip, j) - f.at(im, j)) / (2 * h);
            const double d2 = (f.at(i, jp) - f.at(i, jm)) / (2 * h);
            const double v = norm(d1, d2);
            s += v * v;
        }
    }
    return s / (static_cast<double>(n) * n);
}

double tame_slack(double x) {
    return x / std::log2(2.0 + x);
}

TameReport tame_membership(const GridField& f, const TransformContext& ctx,
                           const AnisotropyNorm& norm) {
    TameReport rep;
    rep.besov = besov_continuous(f, ctx).value;
    rep.dirichlet = anisotropic_dirichlet(f, norm);
    rep.slack = tame_slack(h1_seminorm_sq(f));
    rep.margin = rep.besov - (rep.dirichlet - rep.slack);
    rep.member = rep.margin >= 0.0;
    return rep;
}

EnergyReport gl_energy(const GridField& f, double eps, const AnisotropyNorm& norm) {
    if (!(eps > 0.0)) throw std::invalid_argument("gl_energy: eps must be positive");
    EnergyReport r;
    r.label = "gl";
    r.eps = eps;
    r.grid_n = f.n();
    r.elastic = eps * anisotropic_dirichlet(f, norm);
    r.potential = potential_term(f, eps);
    r.total = r.elastic + r.potential;
    return r;
}

EnergyReport sgl_energy(const GridField& f, double eps, const TransformContext& ctx,
                        const AnisotropyNorm& norm) {
    if (!(eps > 0.0)) throw std::invalid_argument("sgl_energy: eps must be positive");
    EnergyReport r;
    r.label = "sgl";
    r.eps = eps;
    r.grid_n = f.n();
    const TameReport tame = tame_membership(f, ctx, norm);
    r.tame = tame.member ? TameFlag::member : TameFlag::not_member;
    r.tame_margin = tame.margin;
    const SeminormResult b = besov_continuous(f, ctx);
    r.quad_converged = b.converged;
    r.elastic = eps * b.value;
    r.potential = potential_term(f, eps);
    r.finite = tame.member;
    r.total = r.elastic + r.potential; // reported even when flagged infinite
    return r;
}

EnergyReport dsgl_energy(const GridField& f, double eps, const TransformContext& ctx,
                         const AnisotropyNorm& norm, double step_c) {
    if (!(eps > 0.0)) throw std::invalid_argument("dsgl_energy: eps must be positive");
    if (!(step_c > 0.0) || step_c > 1.0)
        throw std::invalid_argument("dsgl_energy: step T(eps) must lie in (0,1]");
    EnergyReport r;
    r.label = "dsgl";
    r.eps = eps;
    r.grid_n = f.n();
    r.step_c = step_c;
    const TameReport tame = tame_membership(f, ctx, norm);
    r.tame = tame.member ? TameFlag::member : TameFlag::not_member;
    r.tame_margin = tame.margin;
    r.elastic = eps * besov_discrete_value(f, ctx, step_c).value;
    r.potential = potential_term(f, eps);
    r.finite = tame.member;
    r.total = r.elastic + r.potential;
    return r;
}

double perimeter_functional(const Polygon& p, const AnisotropyNorm& norm) {
    const double c = perimeter_constant();
    double s = 0.0;
    for (int i = 0; i < p.size(); ++i) {
        const Vec2 n = p.outer_normal(i);
        s += norm(n) * p.edge_length(i);
    }
    return c * s;
}

void write_energy_reports(const std::vector<EnergyReport>& reports, const std::string& path) {
    CsvWriter csv(path, {"label", "eps", "elastic", "potential", "total", "tame_flag", "grid_n", "step_c"});
    for (const auto& r : reports) {
        const char* tf = r.tame == TameFlag::unchecked ? "unchecked"
                         : r.tame == TameFlag::member  ? "tame"
                                                       : "not_tame";
        csv.row({r.label, format_double(r.eps), format_double(r.elastic), format_double(r.potential),
                 format_double(r.total), tf, std::to_string(r.grid_n), format_double(r.step_c)});
    }
}

} // namespace sgl
