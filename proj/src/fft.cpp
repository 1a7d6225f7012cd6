#include "kickfid/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace kickfid::fft {
namespace {

// FFTW plan creation is not thread-safe; execution with new-array is.
std::mutex plan_mutex;

fftw_plan plan_for(int n, int sign) {
    static std::map<std::pair<int, int>, fftw_plan> cache;
    std::lock_guard lock(plan_mutex);
    auto key = std::make_pair(n, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<std::complex<double>> scratch(n);
    auto* ptr = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_1d(n, ptr, ptr, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache.emplace(key, plan);
    return plan;
}

void execute(std::span<std::complex<double>> data, int sign) {
    if (data.empty()) return;
    fftw_plan plan = plan_for(static_cast<int>(data.size()), sign);
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, ptr, ptr);
}

} // namespace

void forward(std::span<std::complex<double>> data) { execute(data, FFTW_FORWARD); }
void backward(std::span<std::complex<double>> data) { execute(data, FFTW_BACKWARD); }

std::vector<std::complex<double>> forward_copy(std::span<const std::complex<double>> data) {
    std::vector<std::complex<double>> out(data.begin(), data.end());
    forward(out);
    return out;
}

std::vector<std::complex<double>> backward_copy(std::span<const std::complex<double>> data) {
    std::vector<std::complex<double>> out(data.begin(), data.end());
    backward(out);
    return out;
}

} // namespace kickfid::fft
