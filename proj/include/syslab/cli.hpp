#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace syslab {

// Effective settings of one CLI invocation.  Values come from built-in
// defaults, then an optional flat key = value settings file, then flags, in
// that order; the digest of the effective state is stamped into every JSON
// report so a result can be tied back to its configuration.
struct Config {
  double systole_rel = 1e-7;   // relative tolerance identifying the systole set
  double lp_margin = 1e-6;     // residual / fit tolerance for cone queries
  double grad_tol = 1e-7;      // descent stopping tolerance
  double fd_step = 1e-5;       // central-difference step
  double box_length_lo = 0.1;  // search box, cuff-length coordinates
  double box_length_hi = 6.0;
  double box_twist_lo = -6.0;  // search box, twist coordinates
  double box_twist_hi = 6.0;
  double bers_bound = 3.1;     // systole values above this flag a catalog gap
  std::uint64_t seed = 7;
  std::string catalog;         // catalog file path; empty selects the builtin

  // Throws ConfigError unless every tolerance is positive and within its
  // operating range and the box is well ordered with positive lengths.
  void validate() const;

  // FNV-1a 64-bit hash of the sorted key = value serialization, as 16 hex
  // digits.  Identical settings digest identically across platforms.
  std::string digest() const;
};

// Entry point behind the `syslab` binary: parses argv, runs one subcommand,
// writes one JSON document to `out` and a human-readable log to `err`.
// Returns 0 on success, 2 when any emitted certificate is indeterminate,
// 1 on usage or domain errors.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace syslab
