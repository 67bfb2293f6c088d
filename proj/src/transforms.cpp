#include "sgl/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sgl/util.hpp"

namespace sgl {

TransformContext::TransformContext(ShearletSystem sys, DirectionalWeight weight, QuadratureSpec quad,
                                   double scan_lo, double scan_hi, int scan_radial, int scan_angular)
    : sys_(std::move(sys)), weight_(std::move(weight)), quad_(quad) {
    frame_ = frame_bounds(sys_, weight_, scan_lo, scan_hi, scan_radial, scan_angular, quad_);
    if (!frame_.ok)
        throw FrameScanError("frame-bound scan failed: lower bound not positive for this system/weight");
}

NodeGrid make_node_grid(const ShearletSystem& sys, int grid_n, double side,
                        const QuadratureSpec& quad) {
    const GeneratorProfile& gen = sys.generator();
    NodeGrid g;
    const double xi_max = (grid_n / 2 - 1) / side;
    double a_min;
    if (gen.psi_lo > 0.0) {
        a_min = gen.psi_lo / xi_max;
        g.ceiling_truncated = true;
    } else {
        a_min = sys.gamma() * std::pow(2.0, -16);
        g.ceiling_truncated = true;
    }
    a_min = std::min(a_min, sys.gamma() / 2.0);
    g.a_min = a_min;

    const double u_lo = std::log2(a_min), u_hi = std::log2(sys.gamma());
    int na = static_cast<int>(std::ceil((u_hi - u_lo) * quad.a_per_octave));
    na = std::max(4, na + (na % 2)); // even interval count so node-halving nests
    const double hu = (u_hi - u_lo) / na;
    const double ln2 = std::log(2.0);
    g.a.resize(na + 1);
    g.a_weight.resize(na + 1);
    for (int i = 0; i <= na; ++i) {
        const double a = std::pow(2.0, u_hi - i * hu); // coarse to fine
        g.a[i] = a;
        const double trap = (i == 0 || i == na) ? 0.5 : 1.0;
        g.a_weight[i] = trap * hu * ln2 * a; // da = a ln2 du
    }
    int ns = std::max(4, quad.s_nodes + (quad.s_nodes % 2));
    const double hs = 2.0 * sys.delta() / ns;
    g.s.resize(ns + 1);
    g.s_weight.resize(ns + 1);
    for (int j = 0; j <= ns; ++j) {
        g.s[j] = -sys.delta() + j * hs;
        g.s_weight[j] = ((j == 0 || j == ns) ? 0.5 : 1.0) * hs;
    }
    return g;
}

namespace {

double phi_sup(const GeneratorProfile& gen) {
    if (gen.fast) return gen.phi_bump.amp;
    double m = 0.0;
    const double hi = gen.phi_hi > 0 ? gen.phi_hi : 16.0;
    for (int i = 0; i <= 2048; ++i) m = std::max(m, std::fabs(gen.phi1(hi * i / 2048.0)));
    return m;
}

// Frequency window of one node: rows kp in [kp_lo, kp_hi] (positive branch),
// per-row column window in kq. Frequencies are k/side.
struct NodeWindow {
    int kp_lo = 1, kp_hi = 0;
    double sqrt_a = 0.0;
};

NodeWindow node_window(const GeneratorProfile& gen, double a, int grid_n, double side) {
    NodeWindow w;
    w.sqrt_a = std::sqrt(a);
    const int cap = grid_n / 2 - 1;
    if (gen.psi_lo > 0.0 && gen.psi_hi > 0.0) {
        w.kp_lo = std::max(1, static_cast<int>(std::ceil(side * gen.psi_lo / a - 1e-12)));
        w.kp_hi = std::min(cap, static_cast<int>(std::floor(side * gen.psi_hi / a + 1e-12)));
    } else {
        w.kp_lo = 1;
        w.kp_hi = cap;
    }
    return w;
}

void column_range(const GeneratorProfile& gen, double a, double s, double kp_phys, double side,
                  int grid_n, int& kq_lo, int& kq_hi) {
    const int cap = grid_n / 2 - 1;
    if (gen.phi_hi > 0.0) {
        const double span = gen.phi_hi / std::sqrt(a);
        const double centre = -s * kp_phys;
        kq_lo = std::max(-cap, static_cast<int>(std::ceil(side * (centre - span) - 1e-12)));
        kq_hi = std::min(cap, static_cast<int>(std::floor(side * (centre + span) + 1e-12)));
    } else {
        kq_lo = -cap;
        kq_hi = cap;
    }
}

// Evaluates node sums for one field. Owns |coeff|^2 tables and per-row prefix
// energies for the upper-bound pruning.
class NodeEvaluator {
public:
    NodeEvaluator(const SpectralField& F, const TransformContext& ctx)
        : F_(F), ctx_(ctx), n_(F.n()), side_(F.side()) {
        const std::size_t total = static_cast<std::size_t>(n_) * n_;
        abs2_.resize(total);
        for (std::size_t i = 0; i < total; ++i) abs2_[i] = std::norm(F.coeffs()[i]);
        phi_sup_ = phi_sup(ctx.sys().generator());
        build_prefix();
    }

    int n() const { return n_; }
    double side() const { return side_; }

    // upper bound for the full-torus t-integral of this node (cost: one pass
    // over the window rows)
    double node_bound(int iota, double a, double s) const {
        const GeneratorProfile& gen = ctx_.sys().generator();
        const double w = ctx_.weight()(iota, s);
        if (w == 0.0) return 0.0;
        NodeWindow win = node_window(gen, a, n_, side_);
        if (win.kp_lo > win.kp_hi) return 0.0;
        const double a34 = std::pow(a, 0.75);
        double acc = 0.0;
        for (int kp = win.kp_lo; kp <= win.kp_hi; ++kp) {
            const double rf = a34 * gen.psi1(a * kp / side_);
            if (rf == 0.0) continue;
            int kq_lo, kq_hi;
            column_range(gen, a, s, static_cast<double>(kp) / side_, side_, n_, kq_lo, kq_hi);
            if (kq_lo > kq_hi) continue;
            acc += rf * rf * row_window_energy(iota, kp, kq_lo, kq_hi);
        }
        return 2.0 * w * w * phi_sup_ * phi_sup_ * acc * side_ * side_;
    }

    // exact full-torus t-integral: side^2 sum |g_k|^2 (both branches)
    double eval_periodic(int iota, double a, double s) const {
        const GeneratorProfile& gen = ctx_.sys().generator();
        const double w = ctx_.weight()(iota, s);
        if (w == 0.0) return 0.0;
        NodeWindow win = node_window(gen, a, n_, side_);
        const double a34 = std::pow(a, 0.75);
        double acc = 0.0;
        for (int kp = win.kp_lo; kp <= win.kp_hi; ++kp) {
            const double kp_phys = static_cast<double>(kp) / side_;
            const double rf = a34 * gen.psi1(a * kp_phys);
            if (rf == 0.0) continue;
            int kq_lo, kq_hi;
            column_range(gen, a, s, kp_phys, side_, n_, kq_lo, kq_hi);
            double row = 0.0;
            const double darg = win.sqrt_a / side_;
            double arg = win.sqrt_a * (kq_lo / side_ + s * kp_phys);
            for (int kq = kq_lo; kq <= kq_hi; ++kq, arg += darg) {
                const double pv = gen.phi1(arg);
                if (pv != 0.0) row += pv * pv * abs2_at(iota, kp, kq);
            }
            acc += rf * rf * row;
        }
        return 2.0 * w * w * acc * side_ * side_;
    }

    // fills caller storage with the positive-branch window g = c_k w el(k);
    // returns rows [kp, offset into cols array, count] for the box transform
    struct RowSpan {
        int kp;
        int kq_lo;
        int count;
        std::size_t offset;
    };
    double assemble(int iota, double a, double s, std::vector<RowSpan>& rows,
                    std::vector<std::complex<double>>& cols) const {
        rows.clear();
        cols.clear();
        const GeneratorProfile& gen = ctx_.sys().generator();
        const double w = ctx_.weight()(iota, s);
        if (w == 0.0) return 0.0;
        NodeWindow win = node_window(gen, a, n_, side_);
        const double a34 = std::pow(a, 0.75);
        double energy = 0.0;
        for (int kp = win.kp_lo; kp <= win.kp_hi; ++kp) {
            const double kp_phys = static_cast<double>(kp) / side_;
            const double rf = w * a34 * gen.psi1(a * kp_phys);
            if (rf == 0.0) continue;
            int kq_lo, kq_hi;
            column_range(gen, a, s, kp_phys, side_, n_, kq_lo, kq_hi);
            if (kq_lo > kq_hi) continue;
            RowSpan span{kp, kq_lo, kq_hi - kq_lo + 1, cols.size()};
            const double darg = win.sqrt_a / side_;
            double arg = win.sqrt_a * (kq_lo / side_ + s * kp_phys);
            for (int kq = kq_lo; kq <= kq_hi; ++kq, arg += darg) {
                const double pv = gen.phi1(arg);
                const std::complex<double> g = pv == 0.0
                    ? std::complex<double>(0.0, 0.0)
                    : rf * pv * coeff_at(iota, kp, kq);
                cols.push_back(g);
                energy += std::norm(g);
            }
            rows.push_back(span);
        }
        return 2.0 * energy * side_ * side_;
    }

private:
    const SpectralField& F_;
    const TransformContext& ctx_;
    int n_;
    double side_;
    double phi_sup_ = 1.0;
    std::vector<double> abs2_;
    std::vector<double> prefix1_; // orientation iota=+1: rows k1, prefix over k2 index
    std::vector<double> prefix2_; // orientation iota=-1: rows k2, prefix over k1 index

    std::complex<double> coeff_at(int iota, int kp, int kq) const {
        return iota == 1 ? F_.at_freq(kp, kq) : F_.at_freq(kq, kp);
    }
    double abs2_at(int iota, int kp, int kq) const {
        const int i = kp >= 0 ? kp : kp + n_;
        const int j = kq >= 0 ? kq : kq + n_;
        return iota == 1 ? abs2_[static_cast<std::size_t>(i) * n_ + j]
                         : abs2_[static_cast<std::size_t>(j) * n_ + i];
    }

    void build_prefix() {
        const int half = n_ / 2;
        prefix1_.assign(static_cast<std::size_t>(half) * (n_ + 1), 0.0);
        prefix2_.assign(static_cast<std::size_t>(half) * (n_ + 1), 0.0);
        for (int kp = 1; kp < half; ++kp) {
            double acc1 = 0.0, acc2 = 0.0;
            const std::size_t base = static_cast<std::size_t>(kp) * (n_ + 1);
            for (int qi = 0; qi < n_; ++qi) {
                const int kq = qi - half; // frequency order
                const int jq = kq >= 0 ? kq : kq + n_;
                acc1 += abs2_[static_cast<std::size_t>(kp) * n_ + jq];
                acc2 += abs2_[static_cast<std::size_t>(jq) * n_ + kp];
                prefix1_[base + qi + 1] = acc1;
                prefix2_[base + qi + 1] = acc2;
            }
        }
    }

    double row_window_energy(int iota, int kp, int kq_lo, int kq_hi) const {
        const int half = n_ / 2;
        const std::size_t base = static_cast<std::size_t>(kp) * (n_ + 1);
        const auto& pre = iota == 1 ? prefix1_ : prefix2_;
        const int lo = kq_lo + half, hi = kq_hi + half;
        return pre[base + hi + 1] - pre[base + lo];
    }
};

struct NodeTable {
    // raw t-integral per (cone, a-node, s-node)
    std::vector<double> e;
    int na = 0, ns = 0;
    double& at(int ic, int ia, int is) {
        return e[(static_cast<std::size_t>(ic) * na + ia) * ns + is];
    }
    double at(int ic, int ia, int is) const {
        return e[(static_cast<std::size_t>(ic) * na + ia) * ns + is];
    }
};

// combine node energies with the grid weights; stride 2 recombines on the
// node-halved grid for the refinement check
double combine(const NodeTable& tab, const NodeGrid& grid, double density_power, int stride) {
    const int na = tab.na, ns = tab.ns;
    double total = 0.0;
    for (int ic = 0; ic < 2; ++ic) {
        for (int ia = 0; ia < na; ia += stride) {
            const bool a_end = (ia == 0 || ia == na - 1);
            double wa = grid.a_weight[ia];
            if (stride > 1) {
                // rebuild trapezoid weight on the coarse grid
                const double unit = grid.a_weight[ia] / ((ia == 0 || ia == na - 1) ? 0.5 : 1.0);
                wa = unit * stride * (a_end ? 0.5 : 1.0);
            }
            const double apow = std::pow(grid.a[ia], -density_power);
            double srow = 0.0;
            for (int is = 0; is < ns; is += stride) {
                const bool s_end = (is == 0 || is == ns - 1);
                double ws = grid.s_weight[is];
                if (stride > 1) {
                    const double unit = grid.s_weight[is] / ((is == 0 || is == ns - 1) ? 0.5 : 1.0);
                    ws = unit * stride * (s_end ? 0.5 : 1.0);
                }
                srow += ws * tab.at(ic, ia, is);
            }
            total += wa * apow * srow;
        }
    }
    return total;
}

enum class TIntegral { full_torus, box };

SeminormResult evaluate_seminorm(const GridField& f, const TransformContext& ctx,
                                 double density_power, TIntegral mode, double box_r) {
    f.validate();
    const SpectralField F = to_spectral(f);
    const NodeGrid grid = make_node_grid(ctx.sys(), f.n(), f.side(), ctx.quad());
    NodeEvaluator ev(F, ctx);

    const int na = static_cast<int>(grid.a.size());
    const int ns = static_cast<int>(grid.s.size());
    NodeTable tab;
    tab.na = na;
    tab.ns = ns;
    tab.e.assign(static_cast<std::size_t>(2) * na * ns, 0.0);

    // pass 1: upper bounds (weighted) for pruning
    std::vector<double> ub(tab.e.size(), 0.0);
    double ub_total = 0.0;
    for (int ic = 0; ic < 2; ++ic) {
        const int iota = ic == 0 ? 1 : -1;
        for (int ia = 0; ia < na; ++ia) {
            const double wfac = grid.a_weight[ia] * std::pow(grid.a[ia], -density_power);
            for (int is = 0; is < ns; ++is) {
                const double b = ev.node_bound(iota, grid.a[ia], grid.s[is]);
                const double wb = b * wfac * grid.s_weight[is];
                ub[(static_cast<std::size_t>(ic) * na + ia) * ns + is] = wb;
                ub_total += wb;
            }
        }
    }
    const double prune = 1e-12 * ub_total / std::max<std::size_t>(tab.e.size(), 1);

    // box transform tables (midpoint t samples)
    int nb = 0;
    double hcell = 0.0;
    std::vector<std::complex<double>> etab; // e^{2 pi i k t_j / side}, k index-major
    std::vector<double> tpts;
    if (mode == TIntegral::box) {
        hcell = f.side() / f.n();
        nb = std::max(2, static_cast<int>(std::floor(2.0 * box_r / hcell + 0.5)));
        tpts.resize(nb);
        for (int j = 0; j < nb; ++j) tpts[j] = -box_r + (j + 0.5) * (2.0 * box_r / nb);
        etab.resize(static_cast<std::size_t>(f.n()) * nb);
        for (int ki = 0; ki < f.n(); ++ki) {
            const int k = ki - f.n() / 2;
            for (int j = 0; j < nb; ++j) {
                const double ph = 2.0 * M_PI * k * tpts[j] / f.side();
                etab[static_cast<std::size_t>(ki) * nb + j] = {std::cos(ph), std::sin(ph)};
            }
        }
    }

    std::vector<NodeEvaluator::RowSpan> rows;
    std::vector<std::complex<double>> cols;
    std::vector<std::complex<double>> srow;   // stage-1 output: rows x nb
    std::vector<std::complex<double>> cgrid;  // stage-2 accumulator: nb x nb

    for (int ic = 0; ic < 2; ++ic) {
        const int iota = ic == 0 ? 1 : -1;
        for (int ia = 0; ia < na; ++ia) {
            for (int is = 0; is < ns; ++is) {
                const std::size_t idx = (static_cast<std::size_t>(ic) * na + ia) * ns + is;
                if (ub[idx] <= prune) continue;
                if (mode == TIntegral::full_torus) {
                    tab.e[idx] = ev.eval_periodic(iota, grid.a[ia], grid.s[is]);
                    continue;
                }
                ev.assemble(iota, grid.a[ia], grid.s[is], rows, cols);
                if (rows.empty()) continue;
                const int half = f.n() / 2;
                srow.assign(rows.size() * nb, {0.0, 0.0});
                for (std::size_t r = 0; r < rows.size(); ++r) {
                    const auto& sp = rows[r];
                    std::complex<double>* out = srow.data() + r * nb;
                    for (int q = 0; q < sp.count; ++q) {
                        const std::complex<double> g = cols[sp.offset + q];
                        if (g.real() == 0.0 && g.imag() == 0.0) continue;
                        const std::complex<double>* e = etab.data() +
                            static_cast<std::size_t>(sp.kq_lo + q + half) * nb;
                        for (int j = 0; j < nb; ++j) out[j] += g * e[j];
                    }
                }
                cgrid.assign(static_cast<std::size_t>(nb) * nb, {0.0, 0.0});
                for (std::size_t r = 0; r < rows.size(); ++r) {
                    const std::complex<double>* e = etab.data() +
                        static_cast<std::size_t>(rows[r].kp + half) * nb;
                    const std::complex<double>* s1 = srow.data() + r * nb;
                    for (int jp = 0; jp < nb; ++jp) {
                        const std::complex<double> ep = e[jp];
                        std::complex<double>* out = cgrid.data() + static_cast<std::size_t>(jp) * nb;
                        for (int jq = 0; jq < nb; ++jq) out[jq] += ep * s1[jq];
                    }
                }
                double boxsum = 0.0;
                for (const auto& z : cgrid) {
                    const double v = 2.0 * z.real(); // coeff(t) = 2 Re of positive branch
                    boxsum += v * v;
                }
                tab.e[idx] = boxsum * hcell * hcell;
            }
        }
    }

    SeminormResult res;
    res.value = combine(tab, grid, density_power, 1);
    const double coarse = combine(tab, grid, density_power, 2);
    res.refine_change = std::fabs(res.value - coarse) / std::max(res.value, 1e-300);
    res.converged = res.refine_change <= 0.02 || res.value < 1e-14;
    res.a_min = grid.a_min;
    res.ceiling_truncated = grid.ceiling_truncated;
    return res;
}

} // namespace

double periodized_coefficient(const GridField& f, const TransformContext& ctx,
                              double a, double s, Vec2 t, int iota) {
    if (f.side() != 1.0) throw std::invalid_argument("periodized_coefficient: unit torus expected");
    ctx.sys().check_params(a, s, iota);
    const SpectralField F = to_spectral(f);
    const GeneratorProfile& gen = ctx.sys().generator();
    const double w = ctx.weight()(iota, s);
    if (w == 0.0) return 0.0;
    NodeWindow win = node_window(gen, a, f.n(), 1.0);
    const double a34 = std::pow(a, 0.75);
    const double tp = iota == 1 ? t.x : t.y;
    const double tq = iota == 1 ? t.y : t.x;
    std::complex<double> acc(0.0, 0.0);
    for (int kp = win.kp_lo; kp <= win.kp_hi; ++kp) {
        const double rf = w * a34 * gen.psi1(a * kp);
        if (rf == 0.0) continue;
        int kq_lo, kq_hi;
        column_range(gen, a, s, kp, 1.0, f.n(), kq_lo, kq_hi);
        for (int kq = kq_lo; kq <= kq_hi; ++kq) {
            const double pv = gen.phi1(win.sqrt_a * (kq + s * kp));
            if (pv == 0.0) continue;
            const std::complex<double> c = iota == 1 ? F.at_freq(kp, kq) : F.at_freq(kq, kp);
            const double ph = 2.0 * M_PI * (kp * tp + kq * tq);
            acc += rf * pv * c * std::complex<double>(std::cos(ph), std::sin(ph));
        }
    }
    return 2.0 * acc.real();
}

SeminormResult besov_continuous(const GridField& f, const TransformContext& ctx) {
    if (f.side() != 1.0) throw std::invalid_argument("besov_continuous: unit torus expected");
    return evaluate_seminorm(f, ctx, 5.0, TIntegral::full_torus, 0.0);
}

SeminormResult besov_box(const GridField& f, const TransformContext& ctx, double r) {
    if (!(r > 0.0) || r >= f.side() / 2.0)
        throw std::invalid_argument("besov_box: need 0 < r < side/2");
    // seam-leak detector: relative field mass within support_radius of the seam
    const double rad = ctx.sys().support_radius();
    const double l1 = f.l1_integral();
    if (l1 > 0.0) {
        double near_seam = 0.0;
        const double cell = (f.side() / f.n()) * (f.side() / f.n());
        for (int i = 0; i < f.n(); ++i) {
            const double x1 = f.coord_centered(i);
            const double d1 = f.side() / 2.0 - std::fabs(x1);
            for (int j = 0; j < f.n(); ++j) {
                const double x2 = f.coord_centered(j);
                const double d2 = f.side() / 2.0 - std::fabs(x2);
                if (std::min(d1, d2) < rad) near_seam += std::fabs(f.at(i, j)) * cell;
            }
        }
        if (near_seam / l1 > 1e-8)
            throw SupportLeakError("besov_box: field mass within support radius of the torus seam");
    }
    return evaluate_seminorm(f, ctx, 5.0, TIntegral::box, r);
}

BesselReport bessel_check(const GridField& f, const TransformContext& ctx) {
    if (f.side() != 1.0) throw std::invalid_argument("bessel_check: unit torus expected");
    BesselReport rep;
    const double norm_sq = f.mean_sq();
    const SeminormResult r = evaluate_seminorm(f, ctx, 3.0, TIntegral::full_torus, 0.0);
    rep.energy = r.value;
    if (norm_sq <= 0.0) {
        rep.ratio = 0.0;
        rep.defined = false;
    } else {
        rep.ratio = rep.energy / norm_sq;
    }
    return rep;
}

std::vector<double> shear_multiplier_grid(const TransformContext& ctx, int grid_n, double side,
                                          double density_power) {
    const NodeGrid grid = make_node_grid(ctx.sys(), grid_n, side, ctx.quad());
    const GeneratorProfile& gen = ctx.sys().generator();
    std::vector<double> m(static_cast<std::size_t>(grid_n) * grid_n, 0.0);
    const int half = grid_n / 2;
    for (int ic = 0; ic < 2; ++ic) {
        const int iota = ic == 0 ? 1 : -1;
        for (std::size_t ia = 0; ia < grid.a.size(); ++ia) {
            const double a = grid.a[ia];
            const double wfac = grid.a_weight[ia] * std::pow(a, -density_power);
            NodeWindow win = node_window(gen, a, grid_n, side);
            const double a34 = std::pow(a, 0.75);
            for (std::size_t is = 0; is < grid.s.size(); ++is) {
                const double s = grid.s[is];
                const double w = ctx.weight()(iota, s);
                if (w == 0.0) continue;
                const double node_w = wfac * grid.s_weight[is] * w * w;
                for (int kp = win.kp_lo; kp <= win.kp_hi; ++kp) {
                    const double kp_phys = static_cast<double>(kp) / side;
                    const double rf = a34 * gen.psi1(a * kp_phys);
                    if (rf == 0.0) continue;
                    int kq_lo, kq_hi;
                    column_range(gen, a, s, kp_phys, side, grid_n, kq_lo, kq_hi);
                    const double darg = win.sqrt_a / side;
                    double arg = win.sqrt_a * (kq_lo / side + s * kp_phys);
                    for (int kq = kq_lo; kq <= kq_hi; ++kq, arg += darg) {
                        const double pv = gen.phi1(arg);
                        if (pv == 0.0) continue;
                        const double val = node_w * rf * rf * pv * pv;
                        const int i = iota == 1 ? kp : (kq >= 0 ? kq : kq + grid_n);
                        const int j = iota == 1 ? (kq >= 0 ? kq : kq + grid_n) : kp;
                        m[static_cast<std::size_t>(i) * grid_n + j] += val;
                    }
                }
            }
        }
    }
    // mirror the positive branch onto -k
    for (int i = 0; i < grid_n; ++i) {
        const int k1 = i <= half - 1 ? i : i - grid_n;
        for (int j = 0; j < grid_n; ++j) {
            const int k2 = j <= half - 1 ? j : j - grid_n;
            if (k1 > 0 || (k1 == 0 && k2 > 0)) {
                const int mi = (-k1 + grid_n) % grid_n;
                const int mj = (-k2 + grid_n) % grid_n;
                m[static_cast<std::size_t>(mi) * grid_n + mj] += m[static_cast<std::size_t>(i) * grid_n + j];
            }
        }
    }
    return m;
}

double bessel_bound_estimate(const TransformContext& ctx, int grid_n, double side) {
    const std::vector<double> m = shear_multiplier_grid(ctx, grid_n, side, 3.0);
    double c = 0.0;
    for (double v : m) c = std::max(c, v);
    return c;
}

double round_scale(double x, double c, double gamma) {
    if (!(c > 0.0) || !(gamma > 0.0)) throw std::invalid_argument("round_scale: need c > 0, gamma > 0");
    const double base = std::log2(gamma);
    const double xc = std::max(-base, x);
    const double q = std::floor((xc + base) / c + 1e-9);
    return c * q - base;
}

double round_shear(double x, double j, double c, double delta) {
    if (!(c > 0.0) || !(delta > 0.0)) throw std::invalid_argument("round_shear: need c > 0, delta > 0");
    const double bound = std::pow(2.0, j / 2.0) * delta;
    if (std::fabs(x) > bound + 1e-12) throw std::invalid_argument("round_shear: |x| exceeds 2^{j/2} Delta");
    const double q_min = std::ceil((-bound + delta) / c - 1e-9);
    const double q_max = std::floor((bound + delta) / c + 1e-9);
    double q = std::floor((x + delta) / c + 1e-9);
    q = std::min(q, q_max);
    if (q < q_min) throw std::invalid_argument("round_shear: no grid element below x");
    return -delta + c * q;
}

std::vector<double> scale_indices(double c, double gamma, double j_ceiling) {
    std::vector<double> out;
    const double base = -std::log2(gamma);
    for (int q = 0;; ++q) {
        const double j = base + c * q;
        if (j > j_ceiling + 1e-12) break;
        out.push_back(j);
    }
    return out;
}

std::vector<double> shear_indices(double j, double c, double delta) {
    std::vector<double> out;
    const double bound = std::pow(2.0, j / 2.0) * delta;
    const long z_lo = static_cast<long>(std::ceil((-bound + delta) / c - 1e-9));
    const long z_hi = static_cast<long>(std::floor((bound + delta) / c + 1e-9));
    for (long z = z_lo; z <= z_hi; ++z) out.push_back(-delta + c * z);
    return out;
}

std::size_t CoefficientSet::total_entries() const {
    std::size_t total = 0;
    for (const auto& b : blocks) total += b.values.size();
    return total;
}

namespace {

struct LatticeDims {
    double d1, d2;
    int z1, z2;
};

LatticeDims lattice_dims(int iota, double j, double c) {
    const double fine = c * std::pow(2.0, -j);
    const double mid = c * std::pow(2.0, -j / 2.0);
    LatticeDims d;
    d.d1 = iota == 1 ? fine : mid;
    d.d2 = iota == 1 ? mid : fine;
    d.z1 = static_cast<int>(std::floor(1.0 / d.d1 + 1e-9)) + 1;
    d.z2 = static_cast<int>(std::floor(1.0 / d.d2 + 1e-9)) + 1;
    return d;
}

double grid_j_ceiling(const ShearletSystem& sys, int grid_n) {
    const GeneratorProfile& gen = sys.generator();
    const double xi_max = grid_n / 2 - 1;
    const double a_min = gen.psi_lo > 0.0 ? gen.psi_lo / xi_max : sys.gamma() * std::pow(2.0, -16);
    return -std::log2(a_min);
}

// Dirichlet kernel D_Z(x) = sum_{z=0}^{Z-1} e^{2 pi i x z}
std::complex<double> dirichlet(double x, int z_count) {
    const double frac = x - std::round(x);
    if (std::fabs(frac) < 1e-12) return {static_cast<double>(z_count), 0.0};
    const double num = std::sin(M_PI * x * z_count);
    const double den = std::sin(M_PI * x);
    const double ph = M_PI * x * (z_count - 1);
    const double mag = num / den;
    return {mag * std::cos(ph), mag * std::sin(ph)};
}

} // namespace

CoefficientSet discrete_transform(const GridField& f, const TransformContext& ctx, double c,
                                  std::size_t max_entries) {
    if (f.side() != 1.0) throw std::invalid_argument("discrete_transform: unit torus expected");
    if (!(c > 0.0)) throw std::invalid_argument("discrete_transform: step c must be positive");
    f.validate();
    const SpectralField F = to_spectral(f);
    const GeneratorProfile& gen = ctx.sys().generator();
    CoefficientSet set;
    set.c = c;
    set.gamma = ctx.sys().gamma();
    set.delta = ctx.sys().delta();
    set.j_ceiling = grid_j_ceiling(ctx.sys(), f.n());
    set.ceiling_truncated = true;
    const std::vector<double> js = scale_indices(c, set.gamma, set.j_ceiling);
    if (js.empty()) throw std::invalid_argument("discrete_transform: empty scale index set");

    std::size_t entries = 0;
    for (int iota : {1, -1}) {
        for (double j : js) {
            const double a = std::pow(2.0, -j);
            const std::vector<double> ks = shear_indices(j, c, set.delta);
            const LatticeDims ld = lattice_dims(iota, j, c);
            for (double k : ks) {
                const double s = std::pow(2.0, -j / 2.0) * k;
                entries += static_cast<std::size_t>(ld.z1) * ld.z2;
                if (entries > max_entries)
                    throw std::invalid_argument("discrete_transform: entry count exceeds cap; use besov_discrete_value");
                CoefficientBlock blk;
                blk.iota = iota;
                blk.j = j;
                blk.k = k;
                blk.d1 = ld.d1;
                blk.d2 = ld.d2;
                blk.z1 = ld.z1;
                blk.z2 = ld.z2;
                blk.values.assign(static_cast<std::size_t>(ld.z1) * ld.z2, 0.0);

                NodeWindow win = node_window(gen, a, f.n(), 1.0);
                const double w = ctx.weight()(iota, s);
                const double a34 = std::pow(a, 0.75);
                if (w != 0.0) {
                    for (int kp = win.kp_lo; kp <= win.kp_hi; ++kp) {
                        const double rf = w * a34 * gen.psi1(a * kp);
                        if (rf == 0.0) continue;
                        int kq_lo, kq_hi;
                        column_range(gen, a, s, kp, 1.0, f.n(), kq_lo, kq_hi);
                        for (int kq = kq_lo; kq <= kq_hi; ++kq) {
                            const double pv = gen.phi1(win.sqrt_a * (kq + s * kp));
                            if (pv == 0.0) continue;
                            const std::complex<double> g =
                                rf * pv * (iota == 1 ? F.at_freq(kp, kq) : F.at_freq(kq, kp));
                            // m-lattice, axes in (x1, x2) order
                            const int kp_ax = iota == 1 ? kp : kq;
                            const int kq_ax = iota == 1 ? kq : kp;
                            for (int z1 = 0; z1 < ld.z1; ++z1) {
                                const double ph1 = 2.0 * M_PI * kp_ax * ld.d1 * z1;
                                const std::complex<double> e1(std::cos(ph1), std::sin(ph1));
                                for (int z2 = 0; z2 < ld.z2; ++z2) {
                                    const double ph2 = 2.0 * M_PI * kq_ax * ld.d2 * z2;
                                    blk.values[static_cast<std::size_t>(z1) * ld.z2 + z2] +=
                                        2.0 * (g * e1 * std::complex<double>(std::cos(ph2), std::sin(ph2))).real();
                                }
                            }
                        }
                    }
                }
                set.blocks.push_back(std::move(blk));
            }
        }
    }
    return set;
}

double besov_discrete(const CoefficientSet& set) {
    // ln2 carries the dyadic log-spacing cell measure of the scale sum
    double total = 0.0;
    for (const auto& b : set.blocks) {
        double blk = 0.0;
        for (double v : b.values) blk += v * v;
        total += std::pow(2.0, 2.0 * b.j) * blk;
    }
    return std::log(2.0) * std::pow(set.c, 4) * total;
}

SeminormResult besov_discrete_value(const GridField& f, const TransformContext& ctx, double c) {
    if (f.side() != 1.0) throw std::invalid_argument("besov_discrete_value: unit torus expected");
    if (!(c > 0.0)) throw std::invalid_argument("besov_discrete_value: step c must be positive");
    f.validate();
    const SpectralField F = to_spectral(f);
    const GeneratorProfile& gen = ctx.sys().generator();
    const double gamma = ctx.sys().gamma();
    const double delta = ctx.sys().delta();
    const double j_ceiling = grid_j_ceiling(ctx.sys(), f.n());
    const std::vector<double> js = scale_indices(c, gamma, j_ceiling);

    double total = 0.0;
    std::vector<std::complex<double>> y;       // W1 x Z2 lattice-column transforms
    std::vector<int> row_kp;
    for (int iota : {1, -1}) {
        for (double j : js) {
            const double a = std::pow(2.0, -j);
            const LatticeDims ld = lattice_dims(iota, j, c);
            // lattice axis aligned with the cone's p-axis
            const double dp = iota == 1 ? ld.d1 : ld.d2;
            const double dq = iota == 1 ? ld.d2 : ld.d1;
            const int zp = iota == 1 ? ld.z1 : ld.z2;
            const int zq = iota == 1 ? ld.z2 : ld.z1;
            NodeWindow win = node_window(gen, a, f.n(), 1.0);
            if (win.kp_lo > win.kp_hi) continue;
            const double a34 = std::pow(a, 0.75);
            const std::vector<double> ks = shear_indices(j, c, delta);
            const double scale_w = std::log(2.0) * std::pow(c, 4) * std::pow(2.0, 2.0 * j);
            for (double k : ks) {
                const double s = std::pow(2.0, -j / 2.0) * k;
                const double w = ctx.weight()(iota, s);
                if (w == 0.0) continue;
                row_kp.clear();
                y.clear();
                for (int kp = win.kp_lo; kp <= win.kp_hi; ++kp) {
                    const double rf = w * a34 * gen.psi1(a * kp);
                    if (rf == 0.0) continue;
                    int kq_lo, kq_hi;
                    column_range(gen, a, s, kp, 1.0, f.n(), kq_lo, kq_hi);
                    if (kq_lo > kq_hi) continue;
                    row_kp.push_back(kp);
                    const std::size_t base = y.size();
                    y.resize(base + zq, {0.0, 0.0});
                    for (int kq = kq_lo; kq <= kq_hi; ++kq) {
                        const double pv = gen.phi1(win.sqrt_a * (kq + s * kp));
                        if (pv == 0.0) continue;
                        const std::complex<double> g =
                            rf * pv * (iota == 1 ? F.at_freq(kp, kq) : F.at_freq(kq, kp));
                        if (g.real() == 0.0 && g.imag() == 0.0) continue;
                        const double step = 2.0 * M_PI * kq * dq;
                        std::complex<double> e(1.0, 0.0);
                        const std::complex<double> rot(std::cos(step), std::sin(step));
                        for (int z = 0; z < zq; ++z) {
                            y[base + z] += g * e;
                            e *= rot;
                        }
                    }
                }
                const int nrows = static_cast<int>(row_kp.size());
                if (nrows == 0) continue;
                // sum over the p-axis lattice via Dirichlet kernels:
                // X real => sum X^2 = 2 sum |X+|^2 + 2 Re sum (X+)^2
                double acc = 0.0;
                std::complex<double> acc_sq(0.0, 0.0);
                for (int r = 0; r < nrows; ++r) {
                    const std::complex<double>* yr = y.data() + static_cast<std::size_t>(r) * zq;
                    for (int r2 = r; r2 < nrows; ++r2) {
                        const std::complex<double>* ys = y.data() + static_cast<std::size_t>(r2) * zq;
                        std::complex<double> h(0.0, 0.0), gsum(0.0, 0.0);
                        for (int z = 0; z < zq; ++z) {
                            h += yr[z] * std::conj(ys[z]);
                            gsum += yr[z] * ys[z];
                        }
                        const double mult = r == r2 ? 1.0 : 2.0;
                        const std::complex<double> dm = dirichlet(dp * (row_kp[r] - row_kp[r2]), zp);
                        const std::complex<double> dpl = dirichlet(dp * (row_kp[r] + row_kp[r2]), zp);
                        // (r,r2) and (r2,r) pair to 2 Re(D H)
                        acc += mult * (dm * h).real();
                        if (r == r2)
                            acc_sq += dpl * gsum;
                        else
                            acc_sq += 2.0 * dpl * gsum;
                    }
                }
                const double msum = 2.0 * acc + 2.0 * acc_sq.real();
                total += scale_w * msum;
            }
        }
    }
    SeminormResult res;
    res.value = total;
    res.converged = true;
    res.refine_change = 0.0;
    res.a_min = std::pow(2.0, -j_ceiling);
    res.ceiling_truncated = true;
    return res;
}

void write_coefficients_csv(const CoefficientSet& set, const std::string& path) {
    CsvWriter csv(path, {"iota", "j", "k", "m1", "m2", "value"});
    for (const auto& b : set.blocks) {
        for (int z1 = 0; z1 < b.z1; ++z1)
            for (int z2 = 0; z2 < b.z2; ++z2)
                csv.row_values({static_cast<double>(b.iota), b.j, b.k, b.d1 * z1, b.d2 * z2,
                                b.values[static_cast<std::size_t>(z1) * b.z2 + z2]});
    }
}

void write_seminorm_report(const std::vector<SeminormReportRow>& rows, const std::string& path) {
    CsvWriter csv(path, {"name", "value", "tolerance", "converged"});
    for (const auto& r : rows)
        csv.row({r.name, format_double(r.value), format_double(r.tolerance), r.converged ? "1" : "0"});
}

} // namespace sgl
