#pragma once

#include <cstdint>
#include <vector>

#include "ffst/cube.hpp"
#include "ffst/oracle.hpp"

namespace ffst {

// Bucket label: the d-bit syndrome of a frequency under the hash matrix.
using BucketId = std::uint32_t;

inline constexpr int kMaxBucketBits = 26;

// Random-subspace hash of the Fourier spectrum. W is a full-rank d x n bit
// matrix; frequencies alpha and beta share a bucket exactly when their
// difference lies in ker W, so the 2^d syndromes enumerate the cosets of a
// uniform codimension-d subspace. The row space of W is the lattice the
// estimator samples its shifts from, and the two roles are tied together by
// the identity chi_alpha(shift(c)) = (-1)^{c . bucket_of(alpha)}.
class CosetHash {
 public:
  explicit CosetHash(Gf2Matrix w);
  static CosetHash sample(int d, int n, Rng& rng);

  int n() const { return w_.n; }
  int d() const { return w_.d(); }
  std::size_t bucket_count() const { return std::size_t{1} << d(); }
  const Gf2Matrix& basis() const { return w_; }

  BucketId bucket_of(std::uint64_t alpha_bits) const {
    BucketId t = 0;
    for (int i = 0; i < w_.d(); ++i) {
      t |= static_cast<BucketId>(parity64(w_.rows[i] & alpha_bits)) << i;
    }
    return t;
  }
  BucketId bucket_of(CubePoint alpha) const;

  // XOR of the rows selected by pattern c; shift_vector(0) == 0.
  std::uint64_t shift_vector(BucketId c) const;

  // All 2^d shifts, indexed by pattern.
  std::vector<std::uint64_t> shift_table() const;

  // bucket_of for every frequency below 2^n (n <= kMaxBucketBits).
  std::vector<BucketId> bucket_table() const;

 private:
  Gf2Matrix w_;
};

// Exact per-bucket spectral energy: entry t sums coeff^2 over frequencies
// with syndrome t. Result has one slot per bucket (absent mass reads 0).
std::vector<double> exact_bucket_energies(const SparseSpectrum& spectrum,
                                          const CosetHash& hash);

// Same, from a dense coefficient table (index alpha holds the coefficient).
std::vector<double> exact_bucket_energies(const SpectralTable& coeffs,
                                          const CosetHash& hash);

// Projection of f onto bucket t, evaluated at z0: the mean over all 2^d
// shift patterns c of f(z0 ^ shift(c)) * (-1)^{c.t}. Agrees with the
// spectral form sum_{alpha in bucket t} coeff(alpha) * chi_alpha(z0).
// Requires n <= 20; does not charge any ledger (ground-truth machinery).
double exact_projection_eval(const FunctionOracle& f, const CosetHash& hash,
                             BucketId t, CubePoint z0);

}  // namespace ffst
