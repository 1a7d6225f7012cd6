#pragma once

#include <complex>
#include <span>
#include <vector>

namespace kickfid::fft {

// In-place complex DFTs backed by FFTW (plans cached per length, FFTW_ESTIMATE
// so results are reproducible run to run). Unnormalized: backward(forward(x))
// returns n*x.
void forward(std::span<std::complex<double>> data);
void backward(std::span<std::complex<double>> data);

std::vector<std::complex<double>> forward_copy(std::span<const std::complex<double>> data);
std::vector<std::complex<double>> backward_copy(std::span<const std::complex<double>> data);

} // namespace kickfid::fft
