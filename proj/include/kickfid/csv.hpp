#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "kickfid/classical.hpp"
#include "kickfid/observables.hpp"
#include "kickfid/spectral.hpp"

namespace kickfid::csv {

// Shortest round-trip decimal form (std::to_chars); locale-independent.
std::string format_double(double v);

// All writers emit "# manifest: <manifest_ref>" as the first line when
// manifest_ref is non-empty; use a path relative to the CSV so reruns into
// different directories stay byte-identical.
void write_series(const std::filesystem::path& path, const TimeSeries& series,
                  const std::string& manifest_ref);
void write_spectrum(const std::filesystem::path& path, const Spectrum& spec,
                    const std::string& manifest_ref);
void write_wavefunction(const std::filesystem::path& path, const WaveFunction& psi,
                        const std::string& manifest_ref);
void write_wigner(const std::filesystem::path& path, const WignerGrid& wg,
                  const std::string& manifest_ref);
void write_portrait(const std::filesystem::path& path, const std::vector<Orbit>& orbits,
                    const std::string& manifest_ref);

// Reads a "kick,value" CSV, skipping '#' comment lines and the header.
TimeSeries read_series(const std::filesystem::path& path);

} // namespace kickfid::csv
