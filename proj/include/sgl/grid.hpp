#ifndef SGL_GRID_HPP
#define SGL_GRID_HPP

#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace sgl {

// Real samples on a periodic square torus. Sample (i,j) sits at
// (side*i/n, side*j/n), row-major. side defaults to 1; the enlarged torus
// used to emulate the plane for box functionals sets side = 4.
//
// When `centered` construction is used, the sampling lambda receives
// coordinates wrapped to [-side/2, side/2).
class GridField {
public:
    GridField() = default;
    GridField(int n, double side, double fill = 0.0);

    static GridField sample(int n, double side, const std::function<double(double, double)>& fn,
                            bool centered = false);

    int n() const { return n_; }
    double side() const { return side_; }
    double& at(int i, int j) { return v_[static_cast<std::size_t>(i) * n_ + j]; }
    double at(int i, int j) const { return v_[static_cast<std::size_t>(i) * n_ + j]; }
    const std::vector<double>& values() const { return v_; }
    std::vector<double>& values() { return v_; }

    double coord(int i) const; // grid coordinate in [0, side)
    double coord_centered(int i) const; // wrapped to [-side/2, side/2)

    GridField& operator+=(const GridField& o);
    GridField& operator*=(double a);

    // mean of v^2 etc.
    double mean() const;
    double mean_sq() const;
    double l1_integral() const;  // cell-weighted sum, approximates the L1 norm
    double l2_norm_sq() const;   // cell-weighted, approximates ||f||_{L2}^2

    void validate() const; // n >= 8 power of two, all finite

private:
    int n_ = 0;
    double side_ = 1.0;
    std::vector<double> v_;
};

// Discrete Fourier coefficients, integer frequencies k in [-n/2, n/2)^2.
// Convention: coeff(k) = (1/n^2) sum f(x) e^{-2 pi i <k, x>/side}, which for
// side = 1 approximates the integral transform of the spec. Physical
// frequency of index k is k/side.
class SpectralField {
public:
    SpectralField() = default;
    SpectralField(int n, double side);

    int n() const { return n_; }
    double side() const { return side_; }
    std::complex<double>& at_idx(int i, int j) { return c_[static_cast<std::size_t>(i) * n_ + j]; }
    std::complex<double> at_idx(int i, int j) const { return c_[static_cast<std::size_t>(i) * n_ + j]; }
    // access by signed frequency k1,k2 in [-n/2, n/2)
    std::complex<double>& at_freq(int k1, int k2);
    std::complex<double> at_freq(int k1, int k2) const;
    const std::vector<std::complex<double>>& coeffs() const { return c_; }
    std::vector<std::complex<double>>& coeffs() { return c_; }

    int freq_of_index(int i) const { return i <= n_ / 2 - 1 ? i : i - n_; }
    int index_of_freq(int k) const { return k >= 0 ? k : k + n_; }

    double energy() const; // sum |c_k|^2

private:
    int n_ = 0;
    double side_ = 1.0;
    std::vector<std::complex<double>> c_;
};

SpectralField to_spectral(const GridField& f);
GridField from_spectral(const SpectralField& F);

// (1/n^2) sum f*g; equals the integral over the unit torus.
double inner_product(const GridField& f, const GridField& g);

// |f|_{H1}^2 = (2 pi)^2 sum |k|^2 |coeff|^2 = integral of |grad f|^2 over the torus.
double h1_seminorm_sq(const GridField& f);
double h1_seminorm_sq(const SpectralField& F);

// Gradient by spectral differentiation (Nyquist row of the derivative set to zero).
std::pair<GridField, GridField> spectral_gradient(const GridField& f);

// integral of |grad f|^2 restricted to the centered box [-r, r]^2
double h1_seminorm_sq_box(const GridField& f, double r);

// Finite-difference fallback for non-smooth fields (centered differences).
double h1_seminorm_sq_fd(const GridField& f);

// Binary field format ASGF1: 5-byte magic, u32 LE n, n^2 float64 LE row-major.
void write_asgf1(const GridField& f, const std::string& path);
GridField read_asgf1(const std::string& path);

// CSV export as (x1,x2,value) triples.
void write_field_csv(const GridField& f, const std::string& path);

} // namespace sgl

#endif
