#ifndef SGL_ANISOTROPY_HPP
#define SGL_ANISOTROPY_HPP

#include <functional>
#include <string>
#include <vector>

namespace sgl {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

class Rng;

// Piecewise-linear directional weight omega(iota, s), one breakpoint table per
// cone, supported in [-delta, delta]. Evaluates to 0 outside the support.
class DirectionalWeight {
public:
    DirectionalWeight() = default;
    // values on uniform breakpoints over [-delta, delta], one vector per cone
    DirectionalWeight(double delta, double delta_star,
                      std::vector<double> values_pos_cone,
                      std::vector<double> values_neg_cone);

    // lambda on |s| <= plateau, linear taper to 0 at |s| = delta
    static DirectionalWeight constant(double lambda, double delta, double delta_star,
                                      double plateau = -1.0);

    double operator()(int iota, double s) const;
    double delta() const { return delta_; }
    double delta_star() const { return delta_star_; }
    double lipschitz_constant() const { return lipschitz_; }
    double min_on_core() const; // min over [-delta_star, delta_star], both cones
    int breakpoint_count() const { return static_cast<int>(values_[0].size()); }
    double breakpoint(int idx) const;
    const std::vector<double>& values(int iota) const { return values_[iota > 0 ? 0 : 1]; }
    std::vector<double>& values(int iota) { return values_[iota > 0 ? 0 : 1]; }

    DirectionalWeight scaled(double factor) const;
    void validate() const; // support/positivity invariants

private:
    double delta_ = 0.0;
    double delta_star_ = 0.0;
    double lipschitz_ = 0.0;
    std::vector<double> values_[2]; // [0] = iota +1, [1] = iota -1

    void recompute_lipschitz();
};

// A norm on R^2 used as anisotropy of the limiting perimeter functional.
class AnisotropyNorm {
public:
    AnisotropyNorm() = default;
    AnisotropyNorm(std::function<double(Vec2)> fn, std::string origin);

    double operator()(Vec2 v) const { return fn_(v); }
    double operator()(double x, double y) const { return fn_({x, y}); }
    const std::string& origin() const { return origin_; }

    static AnisotropyNorm euclidean();

    // randomized homogeneity / positivity / triangle-inequality check
    bool self_test(Rng& rng, int samples = 200, double tol = 1e-9) const;

private:
    std::function<double(Vec2)> fn_;
    std::string origin_;
};

} // namespace sgl

#endif
