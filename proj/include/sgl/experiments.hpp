#ifndef SGL_EXPERIMENTS_HPP
#define SGL_EXPERIMENTS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sgl/energies.hpp"
#include "sgl/minimizer.hpp"
#include "sgl/util.hpp"

namespace sgl {

// key = value configuration with [section] headers; keys are "section.key".
class Config {
public:
    Config() = default;
    static Config from_file(const std::string& path);
    static Config from_string(const std::string& text);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;
    std::string get(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;

private:
    std::map<std::string, std::string> kv_;
};

struct ExperimentConfig {
    int grid_n = 256;
    double gamma = 2.0;
    double delta = 2.0;
    QuadratureSpec quad{64, 64};
    double weight_lambda = 1.0;
    double weight_plateau = -1.0; // -1 = 0.95 delta
    std::vector<double> eps_list{1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
    std::uint64_t seed = 1;
    int workers = 1;
    std::string out_dir = ".";
    // heaviside sweep
    double box_r = 0.25;
    double heaviside_w = 3.0;
    double torus_side = 4.0;
    std::string profile = "smoothstep";
    // polygon sweep
    std::string polygon_file;
    double poly_width = 0.0; // 0 = optimal for the profile
    double tanh_lambda = 4.0;
    // discrete comparison
    double t_power = 0.6;
    std::vector<double> c_list{1.0, 0.5, 0.25, 0.125};
    // counterexample
    int counter_n_max = 6;
    int counter_grid = 512;

    static ExperimentConfig from_config(const Config& c);
    TransitionProfile make_profile() const;
    DirectionalWeight make_weight() const;
};

struct SweepRow {
    double eps = 0.0;
    double measured = 0.0;
    double reference = 0.0;
    double ratio = 0.0;
    bool resolution_flagged = false;
    bool quad_converged = true;
    double extra = 0.0; // experiment-specific auxiliary value
};

struct SweepResult {
    std::vector<SweepRow> rows; // sorted by eps descending
    LineFit slope;              // least squares on log-log data
    bool verdict = false;
    std::string note;
};

void write_sweep_csv(const SweepResult& r, const std::string& path,
                     const std::string& extra_name = "extra");

struct FrameReport {
    FrameBounds bounds;
    double c_psi = 0.0;
    std::vector<double> isometry_ratios;
    bool isometry_ok = false;
    double a_est_refined = 0.0; // 2x refined scan
};

FrameReport run_frame_bounds(const ExperimentConfig& cfg);

// ratio besov_box / (Omega(n)^2 H^1_box) per eps for each normal
std::vector<SweepResult> run_sweep_heaviside(const ExperimentConfig& cfg,
                                             const std::vector<Vec2>& normals);

struct PolygonSweep {
    SweepResult gap;          // measured = |B - AD| normalised, reference = eps^-1 / log2
    std::vector<double> tame_margins;
    std::vector<double> sgl_totals;
    double perimeter_target = 0.0;
    bool margins_ok = false;   // >= 0 for eps <= 2^-5
    bool gap_decreasing = false;
    double final_sgl_rel_err = 0.0; // |SGL - P_Omega| / P_Omega at finest eps
};

PolygonSweep run_sweep_polygon(const ExperimentConfig& cfg, const Polygon& p);

struct DiscreteComparison {
    SweepResult fixed_field;   // gap |DB(c) - B| vs c, slope fitted
    SweepResult energy_sweep;  // |DSGL - SGL| vs eps with T(eps) = eps^p
    bool slope_ok = false;     // slope within 1 +- 0.3
    double final_rel_gap = 0.0;
};

DiscreteComparison run_compare_discrete(const ExperimentConfig& cfg);

struct CounterexampleReport {
    std::vector<double> q_u, q_g, q_sum; // quotients per index, for jump set D
    std::vector<double> diff;            // |q_sum - q_g|
    double q_g_alt_final = 0.0;          // final g-quotient for the second jump set
    bool diff_decreasing = false;
    double d_independence_rel = 0.0; // |q_g(D) - q_g(D')| / mean at final index
};

CounterexampleReport run_counterexample(const ExperimentConfig& cfg);

// square with vertices (0.3,0.3) .. (0.3,0.7)
Polygon default_square_polygon();

// per-unit-length Ginzburg-Landau cost of a planar profile with width w:
// (1/w) int Xi'^2 + (w/4) int W(1/2 - Xi); minimised over w at
// w* = 2 sqrt(int Xi'^2 / int W).
double profile_line_energy(const TransitionProfile& profile, double w);
double optimal_profile_width(const TransitionProfile& profile);

} // namespace sgl

#endif
