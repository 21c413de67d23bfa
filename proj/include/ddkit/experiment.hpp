#pragma once

#include <functional>
#include <iosfwd>
#include <string>

#include "ddkit/sequence.hpp"

namespace ddkit {

// Worker count for sweep evaluation, from the DDKIT_THREADS environment
// variable (default 1). Results never depend on it: points are written
// into index order regardless of schedule.
int configured_thread_count();
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

// Build the sequence described by a config fragment for a given total
// time. family: free|udd|cpmg|cdd|cdd4|cudd|qdd; n / m as in the CLI.
PulseSequence sequence_from_spec(const std::string& family, int n, int m, double total_time,
                                 Pauli axis);

enum class RunStatus : int { Pass = 0, NumericFailure = 1, ConfigError = 2 };

// Execute a JSON experiment config: run the sweep, write the engine CSV
// and the fit report JSON, return the exit status (Pass only when every
// configured gate holds). Partial outputs are removed on failure.
RunStatus run_experiment(const std::string& config_path, std::ostream& diag);

}  // namespace ddkit
