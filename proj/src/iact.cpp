#include <cmath>
#include <complex>
#include <mutex>
#include <numeric>

#include <fftw3.h>

#include "glelab/errors.hpp"
#include "glelab/stats.hpp"

namespace glelab {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

struct FftwBuffer {
    explicit FftwBuffer(std::size_t bytes) : ptr(fftw_malloc(bytes)) {
        if (!ptr) throw NumericalError("autocovariance: allocation failed");
    }
    ~FftwBuffer() { fftw_free(ptr); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    void* ptr;
};

}  // namespace

std::vector<double> autocovariance(const std::vector<double>& series) {
    const std::size_t n = series.size();
    if (n < 2) throw ValidationError("autocovariance: series too short");
    const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
    std::size_t size = 1;
    while (size < 2 * n) size <<= 1;
    const std::size_t bins = size / 2 + 1;

    FftwBuffer real_buf(sizeof(double) * size);
    FftwBuffer cplx_buf(sizeof(fftw_complex) * bins);
    auto* real = static_cast<double*>(real_buf.ptr);
    auto* cplx = static_cast<fftw_complex*>(cplx_buf.ptr);
    fftw_plan forward;
    fftw_plan backward;
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        forward = fftw_plan_dft_r2c_1d(static_cast<int>(size), real, cplx, FFTW_ESTIMATE);
        backward = fftw_plan_dft_c2r_1d(static_cast<int>(size), cplx, real, FFTW_ESTIMATE);
    }
    for (std::size_t i = 0; i < n; ++i) real[i] = series[i] - mean;
    for (std::size_t i = n; i < size; ++i) real[i] = 0.0;
    fftw_execute(forward);
    for (std::size_t k = 0; k < bins; ++k) {
        cplx[k][0] = cplx[k][0] * cplx[k][0] + cplx[k][1] * cplx[k][1];
        cplx[k][1] = 0.0;
    }
    fftw_execute(backward);
    std::vector<double> acov(n);
    const double scale = 1.0 / (static_cast<double>(size) * static_cast<double>(n));
    for (std::size_t k = 0; k < n; ++k) acov[k] = real[k] * scale;
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        fftw_destroy_plan(forward);
        fftw_destroy_plan(backward);
    }
    return acov;
}

IactResult iact(const std::vector<double>& series, double dt) {
    if (series.size() < 100) throw ValidationError("iact: series needs at least 100 points");
    if (!(dt > 0.0)) throw ValidationError("iact: dt must be positive");
    const std::vector<double> c = autocovariance(series);
    const double c0 = c[0];
    double spread = 0.0;
    for (double v : series) spread = std::max(spread, std::abs(v - series[0]));
    if (!(c0 > 0.0) || spread == 0.0) throw DomainError("iact: undefined for a constant series");

    // Geyer's initial positive sequence: sum Γ_m = Ĉ(2m) + Ĉ(2m+1) while positive.
    double sum = 0.0;
    for (std::size_t m = 0; 2 * m + 1 < c.size(); ++m) {
        const double pair = c[2 * m] + c[2 * m + 1];
        if (!(pair > 0.0)) break;
        sum += pair;
    }
    IactResult out;
    out.tau_unnormalized = dt * (sum - 0.5 * c0);
    out.tau_normalized = 2.0 * sum / c0 - 1.0;
    return out;
}

}  // namespace glelab
