#include "kickfid/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "kickfid/errors.hpp"

namespace kickfid::csv {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary); // '\n' endings on every platform
    if (!out) throw ConfigError("cannot open for writing: " + path.string());
    return out;
}

void write_header(std::ofstream& out, const std::string& manifest_ref,
                  const std::string& columns) {
    if (!manifest_ref.empty()) out << "# manifest: " << manifest_ref << "\n";
    out << columns << "\n";
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw NumericError("format_double failed");
    return {buf, ptr};
}

void write_series(const std::filesystem::path& path, const TimeSeries& series,
                  const std::string& manifest_ref) {
    std::ofstream out = open_out(path);
    write_header(out, manifest_ref, "kick,value");
    for (int i = 0; i < series.size(); ++i)
        out << (series.start_kick + i) << "," << format_double(series.values[i]) << "\n";
}

void write_spectrum(const std::filesystem::path& path, const Spectrum& spec,
                    const std::string& manifest_ref) {
    std::ofstream out = open_out(path);
    write_header(out, manifest_ref, "nu,magnitude");
    for (size_t i = 0; i < spec.frequencies.size(); ++i)
        out << format_double(spec.frequencies[i]) << ","
            << format_double(spec.magnitudes[i]) << "\n";
}

void write_wavefunction(const std::filesystem::path& path, const WaveFunction& psi,
                        const std::string& manifest_ref) {
    std::ofstream out = open_out(path);
    write_header(out, manifest_ref, "x,re,im");
    for (int j = 0; j < psi.grid.n; ++j)
        out << format_double(psi.grid.x(j)) << "," << format_double(psi.amps[j].real())
            << "," << format_double(psi.amps[j].imag()) << "\n";
}

void write_wigner(const std::filesystem::path& path, const WignerGrid& wg,
                  const std::string& manifest_ref) {
    std::ofstream out = open_out(path);
    write_header(out, manifest_ref, "x,p,w");
    const int n = wg.n();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < static_cast<int>(wg.p.size()); ++j)
            out << format_double(wg.x[i]) << "," << format_double(wg.p[j]) << ","
                << format_double(wg.value(i, j)) << "\n";
}

void write_portrait(const std::filesystem::path& path, const std::vector<Orbit>& orbits,
                    const std::string& manifest_ref) {
    std::ofstream out = open_out(path);
    write_header(out, manifest_ref, "orbit_id,step,x,p");
    for (size_t id = 0; id < orbits.size(); ++id) {
        const Orbit& orbit = orbits[id];
        for (size_t s = 0; s < orbit.points.size(); ++s)
            out << id << "," << s << "," << format_double(orbit.points[s].x) << ","
                << format_double(orbit.points[s].p) << "\n";
    }
}

TimeSeries read_series(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open for reading: " + path.string());
    TimeSeries series;
    std::string line;
    bool first_row = true;
    bool have_start = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (first_row && line.rfind("kick", 0) == 0) {
            first_row = false;
            continue;
        }
        first_row = false;
        std::istringstream ss(line);
        std::string kick_str, value_str;
        if (!std::getline(ss, kick_str, ',') || !std::getline(ss, value_str))
            throw ConfigError("malformed series row in " + path.string() + ": " + line);
        if (!have_start) {
            series.start_kick = std::stoi(kick_str);
            have_start = true;
        }
        series.values.push_back(std::stod(value_str));
    }
    if (series.values.empty())
        throw ConfigError("no data rows in series file " + path.string());
    return series;
}

} // namespace kickfid::csv
