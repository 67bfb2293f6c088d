#ifndef SGL_UTIL_HPP
#define SGL_UTIL_HPP

#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

namespace sgl {

// Deterministic RNG (xoshiro256++ seeded via splitmix64). std:: distributions
// are implementation-defined, so uniform/normal are generated by hand to keep
// experiment outputs reproducible for a given seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();
    // uniform in [0,1)
    double uniform();
    double uniform(double lo, double hi);
    // standard normal (Box-Muller)
    double normal();
    // integer in [0, n)
    std::uint64_t below(std::uint64_t n);

private:
    std::uint64_t s_[4];
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Runs fn(i) for i in [0, count). With workers <= 1 runs inline. Each index
// writes only its own slot in caller-owned storage, so results are
// independent of the schedule.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

// Nodes/weights for composite Gauss-Legendre quadrature with `panels` panels
// of `order` points on [lo, hi].
struct Quadrature1D {
    std::vector<double> x;
    std::vector<double> w;
};
Quadrature1D gauss_legendre(double lo, double hi, int panels, int order);

// integral of f over [lo,hi], composite GL
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 int panels = 64, int order = 12);

// Trapezoid on n+1 uniform nodes.
double integrate_trapezoid(const std::function<double(double)>& f, double lo, double hi, int n);

// Ordinary least squares fit y = a + b*x. Returns {intercept, slope, residual rms}.
struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double residual = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Log-log slope of y vs x (points with nonpositive coordinates are skipped).
LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

// Solves the dense system A x = b in place (Gaussian elimination with partial
// pivoting); A is row-major n x n. Throws on singular pivot.
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b, int n);

// CSV with fixed "%.12g" formatting so identical runs produce identical bytes.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    ~CsvWriter();
    void row(const std::vector<std::string>& cells);
    void row_values(const std::vector<double>& vals);
    static std::string num(double v);

private:
    std::FILE* f_;
};

std::string format_double(double v);

} // namespace sgl

#endif
