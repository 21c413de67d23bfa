#include "ddkit/io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ddkit {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_sequence_csv(std::ostream& os, const PulseSequence& seq) {
    os << "# total_time=" << format_g17(seq.total_time()) << " parity="
       << pauli_char(seq.parity()) << " label=" << seq.label() << "\n";
    os << "index,time,axis\n";
    int i = 0;
    for (const Pulse& p : seq.pulses())
        os << i++ << "," << format_g17(p.time) << "," << pauli_char(p.axis) << "\n";
}

namespace {

bool starts_with(const std::string& s, const char* prefix) {
    return s.rfind(prefix, 0) == 0;
}

std::string header_field(const std::string& line, const std::string& key) {
    auto pos = line.find(key + "=");
    if (pos == std::string::npos)
        throw std::invalid_argument("sequence CSV: missing '" + key + "' in header comment");
    pos += key.size() + 1;
    auto end = line.find(' ', pos);
    return line.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
}

}  // namespace

PulseSequence read_sequence_csv(std::istream& is) {
    std::string line;
    double total_time = 0.0;
    std::string label = "unnamed";
    bool have_total = false;
    std::vector<Pulse> pulses;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (starts_with(line, "#")) {
            if (line.find("total_time=") != std::string::npos) {
                total_time = std::stod(header_field(line, "total_time"));
                label = header_field(line, "label");
                have_total = true;
            }
            continue;
        }
        if (starts_with(line, "index")) continue;
        std::istringstream row(line);
        std::string idx, time, axis;
        if (!std::getline(row, idx, ',') || !std::getline(row, time, ',') ||
            !std::getline(row, axis))
            throw std::invalid_argument("sequence CSV: malformed row '" + line + "'");
        if (axis.empty()) throw std::invalid_argument("sequence CSV: empty axis field");
        pulses.push_back({std::stod(time), pauli_from_char(axis[0])});
    }
    if (!have_total)
        throw std::invalid_argument("sequence CSV: missing '# total_time=...' comment line");
    return PulseSequence(total_time, std::move(pulses), label);
}

void write_modes_csv(std::ostream& os, const std::vector<BosonMode>& modes) {
    os << "omega,kappa\n";
    for (const BosonMode& m : modes)
        os << format_g17(m.omega) << "," << format_g17(m.kappa) << "\n";
}

std::vector<BosonMode> read_modes_csv(std::istream& is) {
    std::vector<BosonMode> modes;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || starts_with(line, "#") || starts_with(line, "omega")) continue;
        std::istringstream row(line);
        std::string omega, kappa;
        if (!std::getline(row, omega, ',') || !std::getline(row, kappa))
            throw std::invalid_argument("modes CSV: malformed row '" + line + "'");
        modes.push_back({std::stod(omega), std::stod(kappa)});
    }
    validate_modes(modes);
    return modes;
}

void write_trace_csv(std::ostream& os, const CoherenceTrace& trace) {
    os << "time,L\n";
    for (std::size_t i = 0; i < trace.times.size(); ++i)
        os << format_g17(trace.times[i]) << "," << format_g17(trace.coherence[i]) << "\n";
}

NoiseSpectrum read_spectrum_csv(std::istream& is) {
    std::vector<double> omega, values;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || starts_with(line, "#") || starts_with(line, "omega")) continue;
        std::istringstream row(line);
        std::string w, s;
        if (!std::getline(row, w, ',') || !std::getline(row, s))
            throw std::invalid_argument("spectrum CSV: malformed row '" + line + "'");
        omega.push_back(std::stod(w));
        values.push_back(std::stod(s));
    }
    return NoiseSpectrum::tabulated(std::move(omega), std::move(values));
}

std::uint64_t fnv1a_hash(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace ddkit
