#include "hawkes/fft.hpp"

#include <fftw3.h>

#include <complex>
#include <cstring>
#include <mutex>
#include <stdexcept>

namespace hawkes {

namespace {
// FFTW planning is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}
}  // namespace

std::vector<double> convolve_trapezoid(std::span<const double> f,
                                       std::span<const double> g, double step) {
    if (f.size() != g.size() || f.empty())
        throw std::invalid_argument("convolve_trapezoid: need equal non-empty inputs");
    const std::size_t n = f.size();
    const std::size_t L = next_pow2(2 * n);
    const std::size_t spec = L / 2 + 1;

    double* a = fftw_alloc_real(L);
    double* b = fftw_alloc_real(L);
    auto* fa = reinterpret_cast<fftw_complex*>(fftw_alloc_complex(spec));
    auto* fb = reinterpret_cast<fftw_complex*>(fftw_alloc_complex(spec));

    std::memset(a, 0, L * sizeof(double));
    std::memset(b, 0, L * sizeof(double));
    std::memcpy(a, f.data(), n * sizeof(double));
    std::memcpy(b, g.data(), n * sizeof(double));

    fftw_plan pf, pg, pi;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        pf = fftw_plan_dft_r2c_1d(static_cast<int>(L), a, fa, FFTW_ESTIMATE);
        pg = fftw_plan_dft_r2c_1d(static_cast<int>(L), b, fb, FFTW_ESTIMATE);
        pi = fftw_plan_dft_c2r_1d(static_cast<int>(L), fa, a, FFTW_ESTIMATE);
    }
    fftw_execute(pf);
    fftw_execute(pg);
    for (std::size_t k = 0; k < spec; ++k) {
        const std::complex<double> x(fa[k][0], fa[k][1]);
        const std::complex<double> y(fb[k][0], fb[k][1]);
        const std::complex<double> z = x * y;
        fa[k][0] = z.real();
        fa[k][1] = z.imag();
    }
    fftw_execute(pi);

    std::vector<double> out(n);
    const double scale = step / static_cast<double>(L);
    out[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        // rectangle sum minus half end terms = trapezoid rule
        out[i] = scale * a[i] - 0.5 * step * (f[0] * g[i] + f[i] * g[0]);
    }

    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(pf);
        fftw_destroy_plan(pg);
        fftw_destroy_plan(pi);
    }
    fftw_free(a);
    fftw_free(b);
    fftw_free(fa);
    fftw_free(fb);
    return out;
}

}  // namespace hawkes
