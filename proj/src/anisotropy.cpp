#include "sgl/anisotropy.hpp"

#include <cmath>
#include <stdexcept>

#include "sgl/util.hpp"

namespace sgl {

DirectionalWeight::DirectionalWeight(double delta, double delta_star,
                                     std::vector<double> values_pos_cone,
                                     std::vector<double> values_neg_cone)
    : delta_(delta), delta_star_(delta_star) {
    if (delta <= 0.0 || delta_star <= 0.0 || delta_star > delta)
        throw std::invalid_argument("DirectionalWeight: need 0 < delta_star <= delta");
    if (values_pos_cone.size() < 2 || values_pos_cone.size() != values_neg_cone.size())
        throw std::invalid_argument("DirectionalWeight: need matching breakpoint tables with >= 2 entries");
    values_[0] = std::move(values_pos_cone);
    values_[1] = std::move(values_neg_cone);
    for (const auto& tab : values_)
        for (double v : tab)
            if (!(v >= 0.0)) throw std::invalid_argument("DirectionalWeight: negative value");
    recompute_lipschitz();
    validate();
}

DirectionalWeight DirectionalWeight::constant(double lambda, double delta, double delta_star,
                                              double plateau) {
    if (plateau < 0.0) plateau = 0.95 * delta;
    const int count = 65;
    std::vector<double> vals(count);
    for (int i = 0; i < count; ++i) {
        const double s = -delta + 2.0 * delta * i / (count - 1);
        const double a = std::fabs(s);
        double v;
        if (a <= plateau)
            v = lambda;
        else
            v = lambda * (delta - a) / (delta - plateau);
        vals[i] = std::max(v, 0.0);
    }
    return DirectionalWeight(delta, delta_star, vals, vals);
}

double DirectionalWeight::breakpoint(int idx) const {
    const int count = breakpoint_count();
    return -delta_ + 2.0 * delta_ * idx / (count - 1);
}

double DirectionalWeight::operator()(int iota, double s) const {
    if (std::fabs(s) > delta_) return 0.0;
    const auto& tab = values_[iota > 0 ? 0 : 1];
    const int count = static_cast<int>(tab.size());
    const double pos = (s + delta_) / (2.0 * delta_) * (count - 1);
    int idx = static_cast<int>(pos);
    if (idx >= count - 1) idx = count - 2;
    const double frac = pos - idx;
    return tab[idx] * (1.0 - frac) + tab[idx + 1] * frac;
}

double DirectionalWeight::min_on_core() const {
    double m = 1e300;
    const int samples = 512;
    for (int iota : {1, -1})
        for (int i = 0; i <= samples; ++i) {
            const double s = -delta_star_ + 2.0 * delta_star_ * i / samples;
            m = std::min(m, (*this)(iota, s));
        }
    return m;
}

DirectionalWeight DirectionalWeight::scaled(double factor) const {
    DirectionalWeight w = *this;
    for (auto& tab : w.values_)
        for (auto& v : tab) v *= factor;
    w.recompute_lipschitz();
    return w;
}

void DirectionalWeight::recompute_lipschitz() {
    lipschitz_ = 0.0;
    const int count = breakpoint_count();
    const double h = 2.0 * delta_ / (count - 1);
    for (const auto& tab : values_)
        for (int i = 0; i + 1 < count; ++i)
            lipschitz_ = std::max(lipschitz_, std::fabs(tab[i + 1] - tab[i]) / h);
}

void DirectionalWeight::validate() const {
    if (!(min_on_core() > 0.0))
        throw std::invalid_argument("DirectionalWeight: must be strictly positive on [-delta_star, delta_star]");
}

AnisotropyNorm::AnisotropyNorm(std::function<double(Vec2)> fn, std::string origin)
    : fn_(std::move(fn)), origin_(std::move(origin)) {}

AnisotropyNorm AnisotropyNorm::euclidean() {
    return AnisotropyNorm([](Vec2 v) { return std::hypot(v.x, v.y); }, "euclidean");
}

bool AnisotropyNorm::self_test(Rng& rng, int samples, double tol) const {
    for (int i = 0; i < samples; ++i) {
        const double ang = rng.uniform(0.0, 2.0 * M_PI);
        const Vec2 u{std::cos(ang), std::sin(ang)};
        const double nu = (*this)(u);
        if (!(nu > 0.0) || !std::isfinite(nu)) return false;
        const double lam = std::exp(rng.uniform(-3.0, 3.0));
        const double homog = (*this)({lam * u.x, lam * u.y});
        if (std::fabs(homog - lam * nu) > tol * std::max(1.0, lam * nu)) return false;
        const double ang2 = rng.uniform(0.0, 2.0 * M_PI);
        const double r2 = std::exp(rng.uniform(-2.0, 2.0));
        const Vec2 v{r2 * std::cos(ang2), r2 * std::sin(ang2)};
        const double lhs = (*this)({u.x + v.x, u.y + v.y});
        if (lhs > nu + (*this)(v) + tol) return false;
    }
    return true;
}

} // namespace sgl
