#include "sgl/phase.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sgl/generator.hpp"
#include "sgl/util.hpp"

namespace sgl {

TransitionProfile TransitionProfile::sine() {
    TransitionProfile p;
    p.xi = [](double t) { return 0.5 * std::sin(M_PI * t); };
    p.dxi = [](double t) { return 0.5 * M_PI * std::cos(M_PI * t); };
    p.sup_deriv = 0.5 * M_PI;
    p.name = "sine";
    return p;
}

TransitionProfile TransitionProfile::smoothstep() {
    TransitionProfile p;
    p.xi = [](double t) { return smoothstep4(t + 0.5) - 0.5; };
    p.dxi = [](double t) {
        const double u = t + 0.5;
        if (u <= 0.0 || u >= 1.0) return 0.0;
        const double u4 = u * u * u * u;
        return u4 * (630.0 + u * (-2520.0 + u * (3780.0 + u * (-2520.0 + u * 630.0))));
    };
    p.sup_deriv = 630.0 / 256.0; // at t = 0
    p.name = "smoothstep";
    return p;
}

TransitionProfile TransitionProfile::clipped_tanh(double lambda) {
    TransitionProfile p;
    const double norm = 2.0 * std::tanh(lambda / 2.0);
    p.xi = [lambda, norm](double t) { return std::tanh(lambda * t) / norm; };
    p.dxi = [lambda, norm](double t) {
        const double c = std::cosh(lambda * t);
        return lambda / (norm * c * c);
    };
    p.sup_deriv = lambda / norm;
    p.name = "clipped_tanh";
    return p;
}

void TransitionProfile::validate() const {
    if (std::fabs(xi(-0.5) + 0.5) > 1e-9 || std::fabs(xi(0.5) - 0.5) > 1e-9)
        throw std::invalid_argument("TransitionProfile: endpoint values must be -1/2 and 1/2");
}

double TransitionProfile::energy_dirichlet() const {
    return integrate([&](double t) { return dxi(t) * dxi(t); }, -0.5, 0.5, 64);
}

double TransitionProfile::energy_well() const {
    return integrate(
        [&](double t) {
            const double u = 0.5 - xi(t);
            return u * u * (1.0 - u) * (1.0 - u);
        },
        -0.5, 0.5, 64);
}

DirectionalWidth DirectionalWidth::constant(double width) {
    if (!(width > 0.0)) throw std::invalid_argument("DirectionalWidth: width must be positive");
    DirectionalWidth d;
    d.w = [width](Vec2) { return width; };
    d.w_min = d.w_max = width;
    return d;
}

DirectionalWidth DirectionalWidth::from_function(std::function<double(Vec2)> fn) {
    DirectionalWidth d;
    d.w = std::move(fn);
    d.w_min = 1e300;
    d.w_max = 0.0;
    for (int i = 0; i < 720; ++i) {
        const double a = 2.0 * M_PI * i / 720;
        const double v = d.w({std::cos(a), std::sin(a)});
        if (!(v > 0.0)) throw std::invalid_argument("DirectionalWidth: must be strictly positive");
        d.w_min = std::min(d.w_min, v);
        d.w_max = std::max(d.w_max, v);
    }
    return d;
}

std::function<double(Vec2)> heaviside(Vec2 n) {
    const double len = std::hypot(n.x, n.y);
    if (std::fabs(len - 1.0) > 1e-9) throw std::invalid_argument("heaviside: unit normal expected");
    if (n.x != 0.0 && std::fabs(n.y / n.x) <= 1.0) {
        const double theta = n.y / n.x;
        const double sgn = n.x > 0 ? 1.0 : -1.0;
        return [theta, sgn](Vec2 x) { return sgn * (x.x + theta * x.y) < 0.0 ? 1.0 : 0.0; };
    }
    const double theta = n.x / n.y;
    const double sgn = n.y > 0 ? 1.0 : -1.0;
    return [theta, sgn](Vec2 x) { return sgn * (x.y + theta * x.x) < 0.0 ? 1.0 : 0.0; };
}

std::function<double(Vec2)> smooth_heaviside(double eps, const TransitionProfile& profile,
                                             double w, Vec2 n) {
    if (!(eps > 0.0) || !(w > 0.0)) throw std::invalid_argument("smooth_heaviside: eps, w must be positive");
    profile.validate();
    const double len = std::hypot(n.x, n.y);
    if (std::fabs(len - 1.0) > 1e-9) throw std::invalid_argument("smooth_heaviside: unit normal expected");
    const bool first_cone = n.x != 0.0 && std::fabs(n.y / n.x) <= 1.0;
    const double theta = first_cone ? n.y / n.x : n.x / n.y;
    const double sgn = first_cone ? (n.x > 0 ? 1.0 : -1.0) : (n.y > 0 ? 1.0 : -1.0);
    const double band = w / (first_cone ? std::fabs(n.x) : std::fabs(n.y)) * eps;
    auto xi = profile.xi;
    return [first_cone, theta, sgn, band, xi](Vec2 x) {
        const double u = sgn * (first_cone ? x.x + theta * x.y : x.y + theta * x.x);
        if (u < -band / 2.0) return 1.0;
        if (u > band / 2.0) return 0.0;
        return 0.5 - xi(u / band);
    };
}

namespace {

double cross(Vec2 a, Vec2 b) {
    return a.x * b.y - a.y * b.x;
}

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const auto orient = [](Vec2 p, Vec2 q, Vec2 r) {
        const double v = cross({q.x - p.x, q.y - p.y}, {r.x - p.x, r.y - p.y});
        return v > 1e-14 ? 1 : (v < -1e-14 ? -1 : 0);
    };
    const int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
    return o1 != o2 && o3 != o4;
}

double point_segment_distance(Vec2 x, Vec2 a, Vec2 b) {
    const Vec2 d{b.x - a.x, b.y - a.y};
    const double len2 = d.x * d.x + d.y * d.y;
    double t = len2 > 0.0 ? ((x.x - a.x) * d.x + (x.y - a.y) * d.y) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(x.x - (a.x + t * d.x), x.y - (a.y + t * d.y));
}

double segment_segment_distance(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    if (segments_intersect(a, b, c, d)) return 0.0;
    return std::min(std::min(point_segment_distance(a, c, d), point_segment_distance(b, c, d)),
                    std::min(point_segment_distance(c, a, b), point_segment_distance(d, a, b)));
}

} // namespace

Polygon::Polygon(std::vector<Vec2> vertices) : v_(std::move(vertices)) {
    const int n = static_cast<int>(v_.size());
    if (n < 3) throw std::invalid_argument("Polygon: need at least 3 vertices");
    for (const Vec2& p : v_)
        if (!(p.x > 0.0 && p.x < 1.0 && p.y > 0.0 && p.y < 1.0))
            throw std::invalid_argument("Polygon: vertices must lie in (0,1)^2");
    double area2 = 0.0;
    for (int i = 0; i < n; ++i) area2 += cross(v_[i], v_[(i + 1) % n]);
    if (std::fabs(area2) < 1e-12) throw std::invalid_argument("Polygon: degenerate (zero area)");
    if (area2 < 0.0) std::reverse(v_.begin(), v_.end());
    for (int i = 0; i < n; ++i)
        if (edge_length(i) < 1e-9) throw std::invalid_argument("Polygon: zero-length edge");
    // non-self-intersection of non-adjacent edges
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (j == i || j == (i + 1) % n || (j + 1) % n == i) continue;
            if (segments_intersect(v_[i], v_[(i + 1) % n], v_[j], v_[(j + 1) % n]))
                throw std::invalid_argument("Polygon: self-intersecting boundary");
        }
}

Polygon Polygon::regular(int sides, Vec2 centre, double radius, double rotate) {
    std::vector<Vec2> v;
    for (int i = 0; i < sides; ++i) {
        const double a = rotate + 2.0 * M_PI * i / sides;
        v.push_back({centre.x + radius * std::cos(a), centre.y + radius * std::sin(a)});
    }
    return Polygon(std::move(v));
}

Vec2 Polygon::edge_vector(int i) const {
    const Vec2 a = vertex(i), b = vertex(i + 1);
    return {b.x - a.x, b.y - a.y};
}

double Polygon::edge_length(int i) const {
    const Vec2 e = edge_vector(i);
    return std::hypot(e.x, e.y);
}

Vec2 Polygon::outer_normal(int i) const {
    const Vec2 e = edge_vector(i);
    const double len = std::hypot(e.x, e.y);
    return {e.y / len, -e.x / len}; // vertices are counter-clockwise
}

double Polygon::length() const {
    double l = 0.0;
    for (int i = 0; i < size(); ++i) l += edge_length(i);
    return l;
}

bool Polygon::contains(Vec2 x) const {
    bool inside = false;
    const int n = size();
    for (int i = 0; i < n; ++i) {
        const Vec2 a = v_[i], b = v_[(i + 1) % n];
        if ((a.y > x.y) != (b.y > x.y)) {
            const double t = (x.y - a.y) / (b.y - a.y);
            if (x.x < a.x + t * (b.x - a.x)) inside = !inside;
        }
    }
    return inside;
}

double Polygon::distance_to_boundary(Vec2 x) const {
    double d = 1e300;
    for (int i = 0; i < size(); ++i)
        d = std::min(d, point_segment_distance(x, vertex(i), vertex(i + 1)));
    return d;
}

double Polygon::min_distance_to_unit_square_boundary() const {
    double d = 1e300;
    for (const Vec2& p : v_)
        d = std::min({d, p.x, 1.0 - p.x, p.y, 1.0 - p.y});
    return d;
}

Polygon read_polygon_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open polygon file: " + path);
    std::vector<Vec2> v;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.find_first_of("0123456789-.") != 0) continue; // header or comment
        std::istringstream ss(line);
        double x, y;
        char comma;
        if (ss >> x >> comma >> y) v.push_back({x, y});
    }
    return Polygon(std::move(v));
}

void write_polygon_csv(const Polygon& p, const std::string& path) {
    CsvWriter csv(path, {"x1", "x2"});
    for (const Vec2& v : p.vertices()) csv.row_values({v.x, v.y});
}

std::size_t Covering::total_count() const {
    std::size_t total = vertex_centers.size();
    for (const auto& e : edges) total += e.centers.size();
    return total;
}

double covering_r0(const Polygon& p) {
    const int n = p.size();
    double r1 = 1e300;
    for (int i = 0; i < n; ++i)
        for (int j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;
            r1 = std::min(r1, segment_segment_distance(p.vertex(i), p.vertex(i + 1), p.vertex(j),
                                                       p.vertex(j + 1)));
        }
    double r2 = 1e300;
    for (int i = 0; i < n; ++i) r2 = std::min(r2, p.edge_length(i));
    if (n == 3) r1 = r2;
    return std::min(r1, r2) / 8.0;
}

Covering covering(const Polygon& p, double r) {
    const int n = p.size();
    Covering cov;
    cov.r = r;

    // smallest angle between adjacent edges (interior or exterior)
    double alpha = M_PI;
    for (int i = 0; i < n; ++i) {
        const Vec2 e_in = p.edge_vector(i - 1);
        const Vec2 e_out = p.edge_vector(i);
        const double li = std::hypot(e_in.x, e_in.y), lo = std::hypot(e_out.x, e_out.y);
        double cosang = (-(e_in.x * e_out.x + e_in.y * e_out.y)) / (li * lo);
        cosang = std::clamp(cosang, -1.0, 1.0);
        const double theta = std::acos(cosang); // geometric angle at the vertex
        alpha = std::min({alpha, theta, M_PI - theta});
    }
    if (!(alpha > 0.0)) throw std::invalid_argument("covering: degenerate vertex angle");
    cov.c0 = std::min(std::sin(alpha), 1.0) / 2.0;

    double r1 = 1e300;
    for (int i = 0; i < n; ++i)
        for (int j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue; // adjacent around the wrap
            r1 = std::min(r1, segment_segment_distance(p.vertex(i), p.vertex(i + 1),
                                                       p.vertex(j), p.vertex(j + 1)));
        }
    double r2 = 1e300;
    for (int i = 0; i < n; ++i) r2 = std::min(r2, p.edge_length(i));
    cov.r1 = (n == 3) ? r2 : r1; // a triangle has no non-neighbouring pairs
    cov.r2 = r2;
    cov.r0 = std::min(cov.r1, cov.r2) / 8.0;
    if (!(r > 0.0) || r >= cov.r0)
        throw std::invalid_argument("covering: need 0 < r < r0(P)");

    std::size_t total = 0;
    for (int i = 0; i < n; ++i) {
        CoveringEdge ce;
        const Vec2 d = p.edge_vector(i);
        ce.t_coord = std::fabs(d.x) >= std::fabs(d.y) ? 0 : 1;
        const double dt = ce.t_coord == 0 ? d.x : d.y;
        ce.kappa = std::fabs(dt);
        ce.count = static_cast<int>(std::ceil((ce.kappa - 2.0 * r) / (r * cov.c0)));
        ce.s_half = (ce.kappa - 2.0 * r) / (2.0 * ce.count);
        const Vec2 a = p.vertex(i);
        for (int k = 1; k <= ce.count; ++k) {
            const double w = r + 2.0 * ce.s_half * k - ce.s_half;
            ce.centers.push_back({a.x + w * d.x / ce.kappa, a.y + w * d.y / ce.kappa});
        }
        total += ce.centers.size();
        cov.edges.push_back(std::move(ce));
    }
    for (int i = 0; i < n; ++i) cov.vertex_centers.push_back(p.vertex(i));
    cov.upper_count_bound_ok = static_cast<double>(total) <= p.length() / r;
    return cov;
}

void write_covering_csv(const Covering& c, const std::string& path) {
    CsvWriter csv(path, {"edge_index", "k", "z1", "z2", "s"});
    for (std::size_t i = 0; i < c.edges.size(); ++i) {
        const auto& e = c.edges[i];
        for (std::size_t k = 0; k < e.centers.size(); ++k)
            csv.row_values({static_cast<double>(i), static_cast<double>(k + 1), e.centers[k].x,
                            e.centers[k].y, e.s_half});
    }
}

namespace {

// weighted projection onto the boundary: argmin over y of W((x-y)/|x-y|) |x-y|.
// golden-section per edge, seeded from a coarse scan; ties to the lowest edge.
struct Projection {
    Vec2 point;
    int edge = -1;
    double edge_param = 0.0; // arc position along the edge, in [0, len_i]
    double weighted = 0.0;
};

double weighted_objective(Vec2 x, Vec2 y, const DirectionalWidth& width) {
    const double dx = x.x - y.x, dy = x.y - y.y;
    const double d = std::hypot(dx, dy);
    if (d < 1e-15) return 0.0;
    return d / width({dx / d, dy / d}); // transition reach scales with W, so compare |x-y|/W
}

Projection project_weighted(Vec2 x, const Polygon& p, const DirectionalWidth& width) {
    Projection best;
    best.weighted = 1e300;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int i = 0; i < p.size(); ++i) {
        const Vec2 a = p.vertex(i), b = p.vertex(i + 1);
        const double len = p.edge_length(i);
        // coarse scan
        double t_best = 0.0, f_best = 1e300;
        const int coarse = 8;
        for (int k = 0; k <= coarse; ++k) {
            const double t = static_cast<double>(k) / coarse;
            const double f = weighted_objective(x, {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)}, width);
            if (f < f_best) {
                f_best = f;
                t_best = t;
            }
        }
        double lo = std::max(0.0, t_best - 1.0 / coarse), hi = std::min(1.0, t_best + 1.0 / coarse);
        double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
        double fc = weighted_objective(x, {a.x + c * (b.x - a.x), a.y + c * (b.y - a.y)}, width);
        double fd = weighted_objective(x, {a.x + d * (b.x - a.x), a.y + d * (b.y - a.y)}, width);
        for (int it = 0; it < 40; ++it) {
            if (fc < fd) {
                hi = d;
                d = c;
                fd = fc;
                c = hi - gr * (hi - lo);
                fc = weighted_objective(x, {a.x + c * (b.x - a.x), a.y + c * (b.y - a.y)}, width);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + gr * (hi - lo);
                fd = weighted_objective(x, {a.x + d * (b.x - a.x), a.y + d * (b.y - a.y)}, width);
            }
        }
        const double t = fc < fd ? c : d;
        const double f = std::min(fc, fd);
        if (f < best.weighted - 1e-15) {
            best.weighted = f;
            best.edge = i;
            best.edge_param = t * len;
            best.point = {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
        }
    }
    return best;
}

// normal map smoothed over a boundary arc of length 2 * arc at each vertex
Vec2 smoothed_normal(const Polygon& p, const Projection& pr, double arc) {
    const int i = pr.edge;
    const double len = p.edge_length(i);
    const Vec2 n_here = p.outer_normal(i);
    double t_blend = -1.0; // in [0,1]: blend with previous (0 end) or next (1 end)
    int other = -1;
    if (pr.edge_param < arc) {
        other = (i - 1 + p.size()) % p.size();
        t_blend = 0.5 + 0.5 * pr.edge_param / arc; // 0.5 at the vertex, 1 at arc distance
    } else if (len - pr.edge_param < arc) {
        other = (i + 1) % p.size();
        t_blend = 0.5 + 0.5 * (len - pr.edge_param) / arc;
    }
    if (other < 0) return n_here;
    const Vec2 n_other = p.outer_normal(other);
    // shorter-arc interpolation of angles, C^1 ramp
    const double a_here = std::atan2(n_here.y, n_here.x);
    double a_other = std::atan2(n_other.y, n_other.x);
    while (a_other - a_here > M_PI) a_other -= 2.0 * M_PI;
    while (a_other - a_here < -M_PI) a_other += 2.0 * M_PI;
    const double tau = smoothstep4(t_blend);
    const double ang = a_other + (a_here - a_other) * tau;
    return {std::cos(ang), std::sin(ang)};
}

} // namespace

GridField polygon_phase_field(const Polygon& p, double eps, const TransitionProfile& profile,
                              const DirectionalWidth& width, int grid_n) {
    profile.validate();
    if (!(eps > 0.0)) throw std::invalid_argument("polygon_phase_field: eps must be positive");
    if (eps * width.w_max >= p.min_distance_to_unit_square_boundary())
        throw std::invalid_argument("polygon_phase_field: transition band touches the domain boundary");
    const double arc = eps * std::max(1.0, width.w_max);
    GridField f(grid_n, 1.0);
    for (int i = 0; i < grid_n; ++i) {
        const double x1 = f.coord(i);
        for (int j = 0; j < grid_n; ++j) {
            const Vec2 x{x1, f.coord(j)};
            const bool inside = p.contains(x);
            const double coarse = p.distance_to_boundary(x);
            if (coarse > 1.05 * eps * width.w_max + 2.0 * arc) {
                f.at(i, j) = inside ? 1.0 : 0.0;
                continue;
            }
            const Projection pr = project_weighted(x, p, width);
            const Vec2 nv = smoothed_normal(p, pr, arc);
            const double wn = width(nv);
            const double dist = std::hypot(x.x - pr.point.x, x.y - pr.point.y);
            if (dist >= 0.5 * eps * wn) {
                f.at(i, j) = inside ? 1.0 : 0.0; // constant extension across [w eps/2, w eps]
                continue;
            }
            const double t = (inside ? -1.0 : 1.0) * dist / (eps * wn);
            f.at(i, j) = 0.5 - profile.xi(t);
        }
    }
    return f;
}

std::pair<GridField, GridField> counterexample_pair(int index, int grid_n, int jump_set) {
    if (index < 1) throw std::invalid_argument("counterexample_pair: index >= 1");
    const double sigma = 0.5 * std::pow(2.0, -index); // mollification width
    const Vec2 cu{0.22, 0.22};

    auto u_fn = [&](double x1, double x2) {
        double signed_dist; // positive inside the jump set
        if (jump_set == 0) {
            signed_dist = 0.12 - std::hypot(x1 - cu.x, x2 - cu.y);
        } else {
            const double a = 0.12, b = 0.34; // square [0.12, 0.34]^2
            const double dx = std::min(x1 - a, b - x1);
            const double dy = std::min(x2 - a, b - x2);
            signed_dist = std::min(dx, dy);
        }
        return smoothstep4(signed_dist / sigma + 0.5);
    };
    GridField u = GridField::sample(grid_n, 1.0, u_fn);

    // wave packet with |g|_{H1} matched to |u|_{H1}^2
    const double target = h1_seminorm_sq(u);
    const double amp0 = 32.0 * std::pow(2.0, -index / 2.0);
    const Vec2 cg{0.75, 0.75};
    const double rho = 0.2;
    const Bump1D window{0.0, 0.0, 0.5, 1.0, 1.0};
    auto make_g = [&](double amp, double freq) {
        return GridField::sample(grid_n, 1.0, [&](double x1, double x2) {
            const double rr = std::hypot(x1 - cg.x, x2 - cg.y) / rho;
            if (rr >= 1.0) return 0.0;
            return amp * window(rr) * std::cos(2.0 * M_PI * freq * (x1 - cg.x));
        });
    };
    double freq = target / (2.0 * M_PI * amp0 * 0.16);
    const double freq_cap = 0.42 * grid_n / 2.0;
    freq = std::min(std::max(freq, 1.0), freq_cap);
    GridField g = make_g(amp0, freq);
    const double measured = std::sqrt(h1_seminorm_sq(g));
    double amp = amp0;
    if (measured > 0.0) {
        amp = amp0 * target / measured; // |g|_{H1} scales linearly in the amplitude
        g = make_g(amp, freq);
    }
    return {std::move(u), std::move(g)};
}

} // namespace sgl
