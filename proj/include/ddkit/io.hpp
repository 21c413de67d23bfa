#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ddkit/classical_noise.hpp"
#include "ddkit/sequence.hpp"
#include "ddkit/spin_boson.hpp"

namespace ddkit {

// shortest exact decimal with 17 significant digits, the fixed width all
// CSV emitters use so reruns are byte-comparable
std::string format_g17(double v);

// sequences: comment line `# total_time=.. parity=.. label=..`, then
// `index,time,axis`
void write_sequence_csv(std::ostream& os, const PulseSequence& seq);
PulseSequence read_sequence_csv(std::istream& is);

// boson mode lists: `omega,kappa`
void write_modes_csv(std::ostream& os, const std::vector<BosonMode>& modes);
std::vector<BosonMode> read_modes_csv(std::istream& is);

// coherence traces: `time,L`
void write_trace_csv(std::ostream& os, const CoherenceTrace& trace);

// tabulated spectra: `omega,S`
NoiseSpectrum read_spectrum_csv(std::istream& is);

// FNV-1a over raw bytes; stable provenance hash for config files
std::uint64_t fnv1a_hash(const std::string& bytes);

}  // namespace ddkit
