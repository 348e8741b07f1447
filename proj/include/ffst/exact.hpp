#pragma once

#include <cstdint>
#include <vector>

#include "ffst/coset.hpp"
#include "ffst/cube.hpp"
#include "ffst/oracle.hpp"

namespace ffst {

// Dense ground-truth operations are capped at a 16M-entry table.
inline constexpr int kMaxExactDim = 24;

struct RankedEntry {
  std::uint64_t alpha = 0;
  double coeff = 0.0;
  double energy = 0.0;
};

// Full spectrum sorted by energy descending, frequency ascending on ties.
struct RankedSpectrum {
  int n = 0;
  std::vector<RankedEntry> entries;
};

// Full transform of a dense value table, ranked. n <= kMaxExactDim.
RankedSpectrum exact_spectrum(const SpectralTable& values);

// Dense backings are transformed; sparse backings are ranked directly.
RankedSpectrum exact_spectrum(const FunctionOracle& f);

double total_energy(const RankedSpectrum& ranked);

// Sum of the min(s, 2^n) largest energies.
double exact_top_s_energy(const RankedSpectrum& ranked, long s);

// Squared norm minus the top-s energy; clamped into [0, squared norm].
double exact_distance_to_sparsity(const SpectralTable& values, long s);
double exact_distance_to_sparsity(const FunctionOracle& f, long s);

// Excess of the s largest bucket energies over the s largest coefficient
// energies under the given hash. Non-negative; tiny floating-point
// undershoot is clamped to zero.
double exact_hashing_error(const RankedSpectrum& ranked, const CosetHash& hash,
                           long s);

}  // namespace ffst
