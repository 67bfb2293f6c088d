#ifndef SGL_PHASE_HPP
#define SGL_PHASE_HPP

#include <functional>
#include <utility>
#include <vector>

#include "sgl/anisotropy.hpp"
#include "sgl/grid.hpp"

namespace sgl {

// C^1 transition profile on [-1/2, 1/2] with Xi(-1/2) = -1/2, Xi(1/2) = 1/2.
struct TransitionProfile {
    std::function<double(double)> xi;
    std::function<double(double)> dxi;
    double sup_deriv = 0.0;
    std::string name;

    // Xi(t) = sin(pi t)/2
    static TransitionProfile sine();
    // C^4 polynomial step profile
    static TransitionProfile smoothstep();
    // clipped optimal profile tanh(lambda t)/(2 tanh(lambda/2))
    static TransitionProfile clipped_tanh(double lambda);

    void validate() const;
    double energy_dirichlet() const; // integral Xi'(t)^2 dt over [-1/2,1/2]
    double energy_well() const;      // integral W(1/2 - Xi(t)) dt, W(u) = u^2(1-u)^2
};

// Strictly positive C^1 width on the circle; recorded range [min, max].
struct DirectionalWidth {
    std::function<double(Vec2)> w;
    double w_min = 0.0;
    double w_max = 0.0;

    static DirectionalWidth constant(double width);
    static DirectionalWidth from_function(std::function<double(Vec2)> fn);
    double operator()(Vec2 n) const { return w(n); }
};

// Sharp Heaviside with normal n (outer normal of the 1-phase half-plane).
std::function<double(Vec2)> heaviside(Vec2 n);

// Smoothed Heaviside H^n_{eps,Xi,w}: sheared three-zone profile of width
// w eps / |n_p| along the dominant coordinate.
std::function<double(Vec2)> smooth_heaviside(double eps, const TransitionProfile& profile,
                                             double w, Vec2 n);

// Closed polygon in (0,1)^2; vertices stored counter-clockwise.
class Polygon {
public:
    explicit Polygon(std::vector<Vec2> vertices);

    static Polygon regular(int sides, Vec2 centre, double radius, double rotate = 0.0);

    int size() const { return static_cast<int>(v_.size()); }
    Vec2 vertex(int i) const { return v_[(i % size() + size()) % size()]; }
    Vec2 edge_vector(int i) const;
    double edge_length(int i) const;
    Vec2 outer_normal(int i) const; // of edge (v_i, v_{i+1})
    double length() const;          // boundary length
    bool contains(Vec2 x) const;
    double distance_to_boundary(Vec2 x) const;
    double min_distance_to_unit_square_boundary() const;

    const std::vector<Vec2>& vertices() const { return v_; }

private:
    std::vector<Vec2> v_;
};

Polygon read_polygon_csv(const std::string& path);
void write_polygon_csv(const Polygon& p, const std::string& path);

// Covering of the boundary by semi-open cubes: per edge L_i cubes of
// half-width s_i plus one cube of radius r per vertex.
struct CoveringEdge {
    int t_coord = 0;  // coordinate used for the parametrisation
    double kappa = 0.0;
    int count = 0;      // L_i
    double s_half = 0.0; // s_i
    std::vector<Vec2> centers;
};

struct Covering {
    double r = 0.0;
    double r0 = 0.0, r1 = 0.0, r2 = 0.0;
    double c0 = 0.0;
    std::vector<CoveringEdge> edges;
    std::vector<Vec2> vertex_centers; // cubes C(x_i, r)
    bool upper_count_bound_ok = false; // reported, not asserted
    std::size_t total_count() const;
};

Covering covering(const Polygon& p, double r);
// admissible radius ceiling r0(P) = min(r1, r2)/8
double covering_r0(const Polygon& p);
void write_covering_csv(const Covering& c, const std::string& path);

// Phase field with smooth transition along the polygon boundary, sampled on
// the unit torus. Uses the weighted projection onto the boundary and a
// vertex-smoothed normal map.
GridField polygon_phase_field(const Polygon& p, double eps, const TransitionProfile& profile,
                              const DirectionalWidth& width, int grid_n);

// Counterexample pair: u_n a compactly mollified indicator in (0,1/2)^2,
// g_n a windowed wave packet in (1/2,1)^2 with |g_n|_{H1} tracking |u_n|_{H1}^2.
// jump_set 0 = disk, 1 = square.
std::pair<GridField, GridField> counterexample_pair(int index, int grid_n, int jump_set = 0);

} // namespace sgl

#endif
