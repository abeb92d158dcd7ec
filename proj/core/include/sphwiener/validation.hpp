#pragma once

// Quick self-check of the library's core identities at a chosen bandlimit,
// used by `sphwiener validate`.

#include <string>
#include <vector>

namespace sphwiener {

struct InvariantCheck {
  std::string name;
  double value;
  double tolerance;
  bool passed;
};

/// Runs SHT roundtrip, bank admissibility, wavelet reconstruction,
/// matrix vs closed-form filtering, GWKS identity, zero-noise all-pass and
/// real-field noise checks. Throws kInvalidBandlimit for L < 2.
std::vector<InvariantCheck> run_invariant_suite(int bandlimit, double lambda = 2.0, int j_min = 0);

}  // namespace sphwiener
