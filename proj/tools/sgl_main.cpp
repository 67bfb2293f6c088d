#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "sgl/experiments.hpp"
#include "sgl/generator.hpp"
#include "sgl/util.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerdictFail = 2;
constexpr int kExitValidation = 3;
constexpr int kExitNonConvergence = 4;

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    int grid = 0;
    std::string eps;
    std::uint64_t seed = 1;
    int workers = 1;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool with_eps_list = true) {
    cmd->add_option("--config", a.config_path, "configuration file (key = value with [sections])");
    cmd->add_option("--out", a.out_dir, "output directory");
    cmd->add_option("--grid", a.grid, "grid side (power of two)");
    if (with_eps_list) cmd->add_option("--eps", a.eps, "comma-separated epsilon list");
    cmd->add_option("--seed", a.seed, "random seed");
    cmd->add_option("--workers", a.workers, "worker count for sweep dispatch");
}

sgl::ExperimentConfig build_config(const CommonArgs& a) {
    sgl::Config c;
    if (!a.config_path.empty()) c = sgl::Config::from_file(a.config_path);
    if (a.grid > 0) c.set("experiment.grid", std::to_string(a.grid));
    if (!a.eps.empty()) c.set("experiment.eps", a.eps);
    c.set("experiment.seed", std::to_string(a.seed));
    c.set("experiment.workers", std::to_string(a.workers));
    c.set("experiment.out", a.out_dir);
    sgl::ExperimentConfig cfg = sgl::ExperimentConfig::from_config(c);
    std::filesystem::create_directories(cfg.out_dir);
    return cfg;
}

std::vector<sgl::Vec2> parse_normals(const std::string& spec) {
    // semicolon-separated pairs "x,y"
    std::vector<sgl::Vec2> out;
    std::string tok;
    std::istringstream ss(spec);
    while (std::getline(ss, tok, ';')) {
        const auto comma = tok.find(',');
        if (comma == std::string::npos) throw std::runtime_error("normals: expected x,y;x,y;...");
        sgl::Vec2 n{std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1))};
        const double len = std::hypot(n.x, n.y);
        out.push_back({n.x / len, n.y / len});
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"shearlet-based Ginzburg-Landau energies: transforms, sweeps and minimisation"};
    app.require_subcommand(1);

    CommonArgs fb_args;
    auto* fb = app.add_subcommand("frame-bounds", "frame-bound scan and homogeneous isometry check");
    add_common(fb, fb_args);
    double fb_weight_lambda = 1.0;
    fb->add_option("--weight-lambda", fb_weight_lambda, "constant weight level");

    CommonArgs hv_args;
    std::string hv_normals = "1,0;0,1;0.70710678118654752,0.70710678118654752;0.96592582628906829,0.25881904510252076";
    auto* hv = app.add_subcommand("sweep-heaviside", "Besov-box / H1 ratio sweep for smoothed Heavisides");
    add_common(hv, hv_args);
    hv->add_option("--normals", hv_normals, "semicolon-separated normal pairs");

    CommonArgs pg_args;
    std::string pg_polygon;
    auto* pg = app.add_subcommand("sweep-polygon", "Besov vs anisotropic Dirichlet sweep for polygon phase fields");
    add_common(pg, pg_args);
    pg->add_option("--polygon", pg_polygon, "polygon vertex CSV (default: centered square)");

    CommonArgs cd_args;
    auto* cd = app.add_subcommand("compare-discrete", "discrete vs continuous seminorm and energy comparison");
    add_common(cd, cd_args);

    CommonArgs ce_args;
    auto* ce = app.add_subcommand("counterexample", "quotient study of the two-bump counterexample pair");
    add_common(ce, ce_args);

    CommonArgs mn_args;
    std::string mn_input, mn_output = "minimized.asgf1";
    double mn_eps = 1.0 / 32, mn_tau = 0.0;
    int mn_steps = 500;
    auto* mn = app.add_subcommand("minimize", "semi-implicit spectral gradient flow");
    add_common(mn, mn_args, false);
    mn->add_option("--input", mn_input, "initial field (ASGF1)");
    mn->add_option("--output", mn_output, "final field file name");
    mn->add_option("--eps", mn_eps, "phase-field epsilon");
    mn->add_option("--tau", mn_tau, "time step (default eps/10)");
    mn->add_option("--max-steps", mn_steps, "step limit");

    CommonArgs tr_args;
    std::string tr_input;
    double tr_c = 1.0;
    auto* tr = app.add_subcommand("transform", "discrete shearlet coefficients of a field");
    add_common(tr, tr_args);
    tr->add_option("--input", tr_input, "field (ASGF1)");
    tr->add_option("--c", tr_c, "step parameter");

    CommonArgs sm_args;
    std::string sm_input;
    auto* sm = app.add_subcommand("seminorm", "continuous Besov seminorm of a field");
    add_common(sm, sm_args);
    sm->add_option("--input", sm_input, "field (ASGF1)");

    CommonArgs en_args;
    std::string en_input;
    double en_eps = 1.0 / 32;
    auto* en = app.add_subcommand("energy", "GL / SGL energy report of a field");
    add_common(en, en_args, false);
    en->add_option("--input", en_input, "field (ASGF1)");
    en->add_option("--eps", en_eps, "phase-field epsilon");

    std::string mf_kind = "constant", mf_output = "field.asgf1";
    double mf_value = 0.0, mf_eps = 1.0 / 32;
    int mf_grid = 64;
    auto* mf = app.add_subcommand("make-field", "write a sample field (ASGF1)");
    mf->add_option("--kind", mf_kind, "constant | square-phase");
    mf->add_option("--value", mf_value, "constant value");
    mf->add_option("--eps", mf_eps, "phase-field epsilon for square-phase");
    mf->add_option("--grid", mf_grid, "grid side");
    mf->add_option("--output", mf_output, "output path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (fb->parsed()) {
            sgl::ExperimentConfig cfg = build_config(fb_args);
            cfg.weight_lambda = fb_weight_lambda;
            if (!(fb_weight_lambda > 0.0)) {
                std::fprintf(stderr, "frame-bounds: weight must be strictly positive on the core\n");
                return kExitVerdictFail;
            }
            const sgl::FrameReport rep = run_frame_bounds(cfg);
            sgl::CsvWriter csv(cfg.out_dir + "/frame_bounds.csv", {"quantity", "value"});
            csv.row({"a_est", sgl::format_double(rep.bounds.a_est)});
            csv.row({"b_est", sgl::format_double(rep.bounds.b_est)});
            csv.row({"a_est_refined", sgl::format_double(rep.a_est_refined)});
            csv.row({"c_psi", sgl::format_double(rep.c_psi)});
            for (std::size_t i = 0; i < rep.isometry_ratios.size(); ++i)
                csv.row({"isometry_ratio_" + std::to_string(i), sgl::format_double(rep.isometry_ratios[i])});
            std::printf("A_est = %.6g  B_est = %.6g  C_psi = %.6g  isometry %s\n", rep.bounds.a_est,
                        rep.bounds.b_est, rep.c_psi, rep.isometry_ok ? "ok" : "FAIL");
            if (!rep.bounds.ok) return kExitVerdictFail;
            if (!rep.isometry_ok) return kExitVerdictFail;
            return kExitOk;
        }
        if (hv->parsed()) {
            sgl::ExperimentConfig cfg = build_config(hv_args);
            if (cfg.grid_n < 64) cfg.grid_n = 1024;
            const auto normals = parse_normals(hv_normals);
            const auto results = run_sweep_heaviside(cfg, normals);
            bool ok = true, converged = true;
            for (std::size_t i = 0; i < results.size(); ++i) {
                write_sweep_csv(results[i], cfg.out_dir + "/heaviside_" + std::to_string(i) + ".csv");
                std::printf("%s verdict=%d\n", results[i].note.c_str(), results[i].verdict ? 1 : 0);
                ok = ok && results[i].verdict;
                for (const auto& row : results[i].rows) converged = converged && row.quad_converged;
            }
            if (!converged) return kExitNonConvergence;
            return ok ? kExitOk : kExitVerdictFail;
        }
        if (pg->parsed()) {
            sgl::ExperimentConfig cfg = build_config(pg_args);
            const sgl::Polygon p = pg_polygon.empty() ? sgl::default_square_polygon()
                                                      : sgl::read_polygon_csv(pg_polygon);
            const sgl::PolygonSweep sweep = run_sweep_polygon(cfg, p);
            write_sweep_csv(sweep.gap, cfg.out_dir + "/polygon_gap.csv", "tame_margin");
            std::printf("perimeter target %.6g, final SGL rel err %.3f, gap decreasing %d, margins ok %d\n",
                        sweep.perimeter_target, sweep.final_sgl_rel_err, sweep.gap_decreasing ? 1 : 0,
                        sweep.margins_ok ? 1 : 0);
            return sweep.gap.verdict ? kExitOk : kExitVerdictFail;
        }
        if (cd->parsed()) {
            sgl::ExperimentConfig cfg = build_config(cd_args);
            const sgl::DiscreteComparison cmp = run_compare_discrete(cfg);
            write_sweep_csv(cmp.fixed_field, cfg.out_dir + "/discrete_fixed_field.csv", "db_value");
            write_sweep_csv(cmp.energy_sweep, cfg.out_dir + "/discrete_energy.csv", "step_c");
            std::printf("gap slope %.3f (target 1 +- 0.3), final |DSGL-SGL|/SGL = %.4f\n",
                        cmp.fixed_field.slope.slope, cmp.final_rel_gap);
            return (cmp.slope_ok && cmp.energy_sweep.verdict) ? kExitOk : kExitVerdictFail;
        }
        if (ce->parsed()) {
            sgl::ExperimentConfig cfg = build_config(ce_args);
            const sgl::CounterexampleReport rep = run_counterexample(cfg);
            sgl::CsvWriter csv(cfg.out_dir + "/counterexample.csv",
                               {"n", "q_u", "q_g", "q_sum", "diff"});
            for (std::size_t i = 0; i < rep.q_u.size(); ++i)
                csv.row_values({static_cast<double>(i + 1), rep.q_u[i], rep.q_g[i], rep.q_sum[i],
                                rep.diff[i]});
            std::printf("diff decreasing %d, D-independence rel %.4f\n", rep.diff_decreasing ? 1 : 0,
                        rep.d_independence_rel);
            return (rep.diff_decreasing && rep.d_independence_rel <= 0.02) ? kExitOk : kExitVerdictFail;
        }
        if (mn->parsed()) {
            sgl::ExperimentConfig cfg = build_config(mn_args);
            if (mn_input.empty()) {
                std::fprintf(stderr, "minimize: --input required\n");
                return kExitValidation;
            }
            sgl::GridField u0 = sgl::read_asgf1(mn_input);
            sgl::ShearletSystem sys = sgl::ShearletSystem::make_default(cfg.gamma, cfg.delta);
            sgl::TransformContext ctx(sys, cfg.make_weight(), cfg.quad);
            const sgl::MultiplierTable table = build_multiplier(ctx, u0.n(), false);
            sgl::MinimizeOptions opts;
            opts.max_steps = mn_steps;
            opts.tau = mn_tau;
            const sgl::MinimizeResult res = minimize(u0, mn_eps, table, opts);
            write_flow_trace(res.trace, cfg.out_dir + "/flow_trace.csv");
            write_asgf1(res.field, cfg.out_dir + "/" + mn_output);
            std::printf("steps %d final energy %.8g%s\n", res.trace.steps, res.trace.total.back(),
                        res.trace.diverged ? " (diverged)" : "");
            return res.trace.diverged ? kExitNonConvergence : kExitOk;
        }
        if (tr->parsed()) {
            sgl::ExperimentConfig cfg = build_config(tr_args);
            if (tr_input.empty()) {
                std::fprintf(stderr, "transform: --input required\n");
                return kExitValidation;
            }
            sgl::GridField f = sgl::read_asgf1(tr_input);
            sgl::ShearletSystem sys = sgl::ShearletSystem::make_default(cfg.gamma, cfg.delta);
            sgl::TransformContext ctx(sys, cfg.make_weight(), cfg.quad);
            const sgl::CoefficientSet set = discrete_transform(f, ctx, tr_c);
            write_coefficients_csv(set, cfg.out_dir + "/coefficients.csv");
            std::printf("entries %zu, DB value %.8g\n", set.total_entries(), besov_discrete(set));
            return kExitOk;
        }
        if (sm->parsed()) {
            sgl::ExperimentConfig cfg = build_config(sm_args);
            if (sm_input.empty()) {
                std::fprintf(stderr, "seminorm: --input required\n");
                return kExitValidation;
            }
            sgl::GridField f = sgl::read_asgf1(sm_input);
            sgl::ShearletSystem sys = sgl::ShearletSystem::make_default(cfg.gamma, cfg.delta);
            sgl::TransformContext ctx(sys, cfg.make_weight(), cfg.quad);
            const sgl::SeminormResult r = besov_continuous(f, ctx);
            std::vector<sgl::SeminormReportRow> rows{{"besov_continuous_sq", r.value, 0.02, r.converged}};
            write_seminorm_report(rows, cfg.out_dir + "/seminorm.csv");
            std::printf("besov^2 = %.10g (converged %d, a_min %.3g)\n", r.value, r.converged ? 1 : 0,
                        r.a_min);
            return r.converged ? kExitOk : kExitNonConvergence;
        }
        if (en->parsed()) {
            sgl::ExperimentConfig cfg = build_config(en_args);
            if (en_input.empty()) {
                std::fprintf(stderr, "energy: --input required\n");
                return kExitValidation;
            }
            sgl::GridField f = sgl::read_asgf1(en_input);
            sgl::ShearletSystem sys = sgl::ShearletSystem::make_default(cfg.gamma, cfg.delta);
            sgl::TransformContext ctx(sys, cfg.make_weight(), cfg.quad);
            const sgl::AnisotropyNorm omega = make_norm_from_weight(ctx.weight());
            std::vector<sgl::EnergyReport> reports;
            reports.push_back(gl_energy(f, en_eps, omega));
            reports.push_back(sgl_energy(f, en_eps, ctx, omega));
            write_energy_reports(reports, cfg.out_dir + "/energy.csv");
            std::printf("gl total %.8g | sgl total %.8g (%s)\n", reports[0].total, reports[1].total,
                        reports[1].finite ? "tame" : "not tame");
            return kExitOk;
        }
        if (mf->parsed()) {
            sgl::GridField f(mf_grid, 1.0, 0.0);
            if (mf_kind == "constant") {
                f = sgl::GridField(mf_grid, 1.0, mf_value);
            } else if (mf_kind == "square-phase") {
                f = polygon_phase_field(sgl::default_square_polygon(), mf_eps,
                                        sgl::TransitionProfile::smoothstep(),
                                        sgl::DirectionalWidth::constant(3.0), mf_grid);
            } else {
                std::fprintf(stderr, "make-field: unknown kind %s\n", mf_kind.c_str());
                return kExitValidation;
            }
            write_asgf1(f, mf_output);
            return kExitOk;
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return kExitValidation;
    } catch (const sgl::QuadratureError& e) {
        std::fprintf(stderr, "numerical non-convergence: %s\n", e.what());
        return kExitNonConvergence;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    }
    return kExitOk;
}
