#include "sgl/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

#include "sgl/util.hpp"

namespace sgl {

static bool power_of_two(int n) {
    return n > 0 && (n & (n - 1)) == 0;
}

GridField::GridField(int n, double side, double fill)
    : n_(n), side_(side), v_(static_cast<std::size_t>(n) * n, fill) {
    if (!power_of_two(n) || n < 8) throw std::invalid_argument("GridField: n must be a power of two >= 8");
    if (side <= 0.0) throw std::invalid_argument("GridField: side must be positive");
}

GridField GridField::sample(int n, double side, const std::function<double(double, double)>& fn,
                            bool centered) {
    GridField f(n, side);
    for (int i = 0; i < n; ++i) {
        const double x1 = centered ? f.coord_centered(i) : f.coord(i);
        for (int j = 0; j < n; ++j) {
            const double x2 = centered ? f.coord_centered(j) : f.coord(j);
            f.at(i, j) = fn(x1, x2);
        }
    }
    return f;
}

double GridField::coord(int i) const {
    return side_ * i / n_;
}

double GridField::coord_centered(int i) const {
    double x = side_ * i / n_;
    if (x >= side_ / 2) x -= side_;
    return x;
}

GridField& GridField::operator+=(const GridField& o) {
    if (o.n_ != n_ || o.side_ != side_) throw std::invalid_argument("GridField: size mismatch");
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
}

GridField& GridField::operator*=(double a) {
    for (auto& x : v_) x *= a;
    return *this;
}

double GridField::mean() const {
    double s = 0.0;
    for (double x : v_) s += x;
    return s / v_.size();
}

double GridField::mean_sq() const {
    double s = 0.0;
    for (double x : v_) s += x * x;
    return s / v_.size();
}

double GridField::l1_integral() const {
    double s = 0.0;
    for (double x : v_) s += std::fabs(x);
    return s * (side_ * side_) / v_.size();
}

double GridField::l2_norm_sq() const {
    return mean_sq() * side_ * side_;
}

void GridField::validate() const {
    if (!power_of_two(n_) || n_ < 8) throw std::invalid_argument("GridField: invalid n");
    for (double x : v_)
        if (!std::isfinite(x)) throw std::invalid_argument("GridField: non-finite value");
}

SpectralField::SpectralField(int n, double side)
    : n_(n), side_(side), c_(static_cast<std::size_t>(n) * n) {
    if (!power_of_two(n) || n < 8) throw std::invalid_argument("SpectralField: n must be a power of two >= 8");
}

std::complex<double>& SpectralField::at_freq(int k1, int k2) {
    return at_idx(index_of_freq(k1), index_of_freq(k2));
}

std::complex<double> SpectralField::at_freq(int k1, int k2) const {
    return at_idx(index_of_freq(k1), index_of_freq(k2));
}

double SpectralField::energy() const {
    double s = 0.0;
    for (const auto& z : c_) s += std::norm(z);
    return s;
}

// FFTW plan cache. Plans are created with FFTW_ESTIMATE so the transform is
// deterministic run to run; execution uses the new-array interface with
// caller buffers.
namespace {

struct PlanPair {
    fftw_plan fwd;
    fftw_plan bwd;
};

std::mutex g_plan_mutex;
std::map<int, PlanPair>& plan_map() {
    static std::map<int, PlanPair> m;
    return m;
}

PlanPair get_plans(int n) {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto& m = plan_map();
    auto it = m.find(n);
    if (it != m.end()) return it->second;
    fftw_complex* buf = fftw_alloc_complex(static_cast<std::size_t>(n) * n);
    PlanPair p;
    p.fwd = fftw_plan_dft_2d(n, n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    p.bwd = fftw_plan_dft_2d(n, n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_free(buf);
    m.emplace(n, p);
    return p;
}

struct FftwBuffer {
    fftw_complex* p;
    explicit FftwBuffer(std::size_t count) : p(fftw_alloc_complex(count)) {
        if (!p) throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(p); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
};

} // namespace

SpectralField to_spectral(const GridField& f) {
    const int n = f.n();
    const std::size_t total = static_cast<std::size_t>(n) * n;
    FftwBuffer buf(total);
    for (std::size_t i = 0; i < total; ++i) {
        buf.p[i][0] = f.values()[i];
        buf.p[i][1] = 0.0;
    }
    fftw_execute_dft(get_plans(n).fwd, buf.p, buf.p);
    SpectralField F(n, f.side());
    const double scale = 1.0 / static_cast<double>(total);
    for (std::size_t i = 0; i < total; ++i)
        F.coeffs()[i] = std::complex<double>(buf.p[i][0] * scale, buf.p[i][1] * scale);
    return F;
}

GridField from_spectral(const SpectralField& F) {
    const int n = F.n();
    const std::size_t total = static_cast<std::size_t>(n) * n;
    FftwBuffer buf(total);
    for (std::size_t i = 0; i < total; ++i) {
        buf.p[i][0] = F.coeffs()[i].real();
        buf.p[i][1] = F.coeffs()[i].imag();
    }
    fftw_execute_dft(get_plans(n).bwd, buf.p, buf.p);
    GridField f(n, F.side());
    for (std::size_t i = 0; i < total; ++i) f.values()[i] = buf.p[i][0];
    return f;
}

double inner_product(const GridField& f, const GridField& g) {
    if (f.n() != g.n() || f.side() != g.side()) throw std::invalid_argument("inner_product: size mismatch");
    double s = 0.0;
    const auto& a = f.values();
    const auto& b = g.values();
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s / a.size();
}

double h1_seminorm_sq(const SpectralField& F) {
    const int n = F.n();
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        const double k1 = F.freq_of_index(i);
        for (int j = 0; j < n; ++j) {
            const double k2 = F.freq_of_index(j);
            s += (k1 * k1 + k2 * k2) * std::norm(F.at_idx(i, j));
        }
    }
    return 4.0 * M_PI * M_PI * s;
}

double h1_seminorm_sq(const GridField& f) {
    return h1_seminorm_sq(to_spectral(f));
}

std::pair<GridField, GridField> spectral_gradient(const GridField& f) {
    SpectralField F = to_spectral(f);
    const int n = F.n();
    SpectralField D1(n, F.side()), D2(n, F.side());
    const double two_pi_over_l = 2.0 * M_PI / F.side();
    for (int i = 0; i < n; ++i) {
        int k1 = F.freq_of_index(i);
        if (k1 == -n / 2) k1 = 0; // unmatched Nyquist mode carries no derivative
        for (int j = 0; j < n; ++j) {
            int k2 = F.freq_of_index(j);
            if (k2 == -n / 2) k2 = 0;
            const std::complex<double> c = F.at_idx(i, j);
            const std::complex<double> im(0.0, two_pi_over_l);
            D1.at_idx(i, j) = im * static_cast<double>(k1) * c;
            D2.at_idx(i, j) = im * static_cast<double>(k2) * c;
        }
    }
    return {from_spectral(D1), from_spectral(D2)};
}

double h1_seminorm_sq_box(const GridField& f, double r) {
    auto [g1, g2] = spectral_gradient(f);
    const int n = f.n();
    const double cell = (f.side() / n) * (f.side() / n);
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x1 = f.coord_centered(i);
        if (x1 < -r || x1 >= r) continue;
        for (int j = 0; j < n; ++j) {
            const double x2 = f.coord_centered(j);
            if (x2 < -r || x2 >= r) continue;
            s += g1.at(i, j) * g1.at(i, j) + g2.at(i, j) * g2.at(i, j);
        }
    }
    return s * cell;
}

double h1_seminorm_sq_fd(const GridField& f) {
    const int n = f.n();
    const double h = f.side() / n;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        const int ip = (i + 1) % n, im = (i + n - 1) % n;
        for (int j = 0; j < n; ++j) {
            const int jp = (j + 1) % n, jm = (j + n - 1) % n;
            const double d1 = (f.at(ip, j) - f.at(im, j)) / (2 * h);
            const double d2 = (f.at(i, jp) - f.at(i, jm)) / (2 * h);
            s += d1 * d1 + d2 * d2;
        }
    }
    return s * h * h;
}

void write_asgf1(const GridField& f, const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw std::runtime_error("cannot open for writing: " + path);
    std::fwrite("ASGF1", 1, 5, fp);
    const std::uint32_t n = static_cast<std::uint32_t>(f.n());
    unsigned char nb[4] = {static_cast<unsigned char>(n & 0xff), static_cast<unsigned char>((n >> 8) & 0xff),
                           static_cast<unsigned char>((n >> 16) & 0xff), static_cast<unsigned char>((n >> 24) & 0xff)};
    std::fwrite(nb, 1, 4, fp);
    std::fwrite(f.values().data(), sizeof(double), f.values().size(), fp);
    std::fclose(fp);
}

GridField read_asgf1(const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "rb");
    if (!fp) throw std::runtime_error("cannot open: " + path);
    char magic[5];
    if (std::fread(magic, 1, 5, fp) != 5 || std::memcmp(magic, "ASGF1", 5) != 0) {
        std::fclose(fp);
        throw std::runtime_error("not an ASGF1 file: " + path);
    }
    unsigned char nb[4];
    if (std::fread(nb, 1, 4, fp) != 4) {
        std::fclose(fp);
        throw std::runtime_error("truncated ASGF1 header: " + path);
    }
    const std::uint32_t n = nb[0] | (nb[1] << 8) | (nb[2] << 16) | (static_cast<std::uint32_t>(nb[3]) << 24);
    if (!power_of_two(static_cast<int>(n)) || n < 8 || n > (1u << 16)) {
        std::fclose(fp);
        throw std::runtime_error("ASGF1: invalid grid size");
    }
    GridField f(static_cast<int>(n), 1.0);
    const std::size_t total = static_cast<std::size_t>(n) * n;
    if (std::fread(f.values().data(), sizeof(double), total, fp) != total) {
        std::fclose(fp);
        throw std::runtime_error("truncated ASGF1 payload: " + path);
    }
    std::fclose(fp);
    f.validate();
    return f;
}

void write_field_csv(const GridField& f, const std::string& path) {
    CsvWriter csv(path, {"x1", "x2", "value"});
    for (int i = 0; i < f.n(); ++i)
        for (int j = 0; j < f.n(); ++j)
            csv.row_values({f.coord(i), f.coord(j), f.at(i, j)});
}

} // namespace sgl
