#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace orowan::detail {

namespace {

struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
};

// Plan creation is not thread-safe; execution via the new-array interface is.
std::mutex plan_mutex;
std::map<int, PlanPair>& plan_cache() {
    static std::map<int, PlanPair> cache;
    return cache;
}

PlanPair plans_for(int n) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto& cache = plan_cache();
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<std::complex<double>> scratch(n);
    auto* ptr = reinterpret_cast<fftw_complex*>(scratch.data());
    PlanPair p;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    p.forward = fftw_plan_dft_1d(n, ptr, ptr, FFTW_FORWARD, flags);
    p.inverse = fftw_plan_dft_1d(n, ptr, ptr, FFTW_BACKWARD, flags);
    if (!p.forward || !p.inverse) throw std::runtime_error("fftw plan creation failed");
    cache.emplace(n, p);
    return p;
}

}  // namespace

void fft_forward(std::vector<std::complex<double>>& buf) {
    const int n = static_cast<int>(buf.size());
    auto p = plans_for(n);
    auto* ptr = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_execute_dft(p.forward, ptr, ptr);
}

void fft_inverse(std::vector<std::complex<double>>& buf) {
    const int n = static_cast<int>(buf.size());
    auto p = plans_for(n);
    auto* ptr = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_execute_dft(p.inverse, ptr, ptr);
}

int next_pow2(int n) {
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace orowan::detail
