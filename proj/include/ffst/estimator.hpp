#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ffst/coset.hpp"
#include "ffst/cube.hpp"
#include "ffst/oracle.hpp"

namespace ffst {

// Knobs for the top-s energy estimator and the sparsity tester. The
// asymptotic recipe leaves its constants open; c_gamma and c_ell pin them
// and the overrides replace any derived value outright.
struct EstimatorParams {
  long s = 1;             // target sparsity, >= 1
  double eps = 0.25;      // additive accuracy, in (0, 1]
  double delta = 1.0 / 3;  // failure probability, in (0, 1)
  double c_gamma = 4.0;   // sample-count multiplier
  double c_ell = 2.0;     // repetition multiplier
  double known_norm = 1.0;  // ||f||_2^2, assumed 1 unless measured

  std::optional<int> d_override;
  std::optional<long> gamma_override;
  std::optional<int> ell_override;   // must be odd
  std::optional<int> r_override;     // must be odd
};

// Concrete resolved parameters:
//   d     bucket codimension, min(n, ceil(log2(max(2, 2 s / eps^4))))
//   gamma pairs sampled per repetition, ceil(c_gamma * s / eps^4)
//   ell   repetitions whose per-bucket median fights sampling error,
//         smallest odd >= max(1, c_ell * ceil(log2(1/eps)))
//   r     outer runs (fresh hash each) whose median fights hashing error,
//         smallest odd >= max(1, ceil(2 ln(1/delta)))
struct DerivedParams {
  int d = 0;
  long gamma = 1;
  int ell = 1;
  int r = 1;
};

DerivedParams derive_params(const EstimatorParams& params, int n);

// Result of one energy-estimation run (one hash, ell repetitions).
struct EnergyReport {
  double xi = 0.0;                        // sum of the top-s bucket medians
  std::vector<double> bucket_medians;     // indexed by syndrome, size 2^d
  std::vector<BucketId> chosen_buckets;   // median desc, syndrome asc
  CosetHash hash;
  DerivedParams params;
  std::uint64_t queries_used = 0;         // exactly 2 * gamma * ell
  std::uint64_t seed = 0;
};

struct TestVerdict {
  bool accept = false;
  double xi = 0.0;
  double threshold = 0.0;
};

// Per-bucket energy estimates for a fixed hash: ell repetitions of gamma
// sampled pairs (x, x ^ shift(c)) with x and c uniform, combined per
// repetition into one estimate per bucket and reduced by the per-bucket
// median. The sample stream is a pure function of `seed`; the `naive` flag
// switches from the butterfly combine, O(gamma + d 2^d) per repetition, to
// the literal per-sample update of every bucket, O(gamma 2^d), without
// changing the stream. All queries go through evaluate_batch.
std::vector<double> estimate_bucket_medians(const FunctionOracle& f,
                                            QueryLedger& ledger,
                                            const CosetHash& hash, long gamma,
                                            int ell, std::uint64_t seed,
                                            bool naive = false);

// One full energy-estimation run: draw a hash (shared by the ell
// repetitions), estimate every bucket, and return the sum of the s largest
// medians (all 2^d of them if s exceeds the bucket count). Ties between
// equal medians break toward the smaller syndrome. Bit-identical output for
// identical (seed, params, oracle); charges exactly 2 * gamma * ell queries.
EnergyReport estimate_top_s_energy(const FunctionOracle& f, QueryLedger& ledger,
                                   const EstimatorParams& params,
                                   std::uint64_t seed);

// Same contract and same sample stream, accumulated the slow way. Medians
// match the fast path to association-level round-off.
EnergyReport estimate_top_s_energy_naive(const FunctionOracle& f,
                                         QueryLedger& ledger,
                                         const EstimatorParams& params,
                                         std::uint64_t seed);

// Median-amplified top-s energy: r independent runs with fresh hashes.
struct DistanceReport {
  double distance = 0.0;   // clamp(known_norm - xi_final, 0, known_norm)
  double xi_final = 0.0;   // median of the per-run xi values
  DerivedParams params;
  std::uint64_t queries_used = 0;  // exactly 2 * gamma * ell * r
  std::uint64_t seed = 0;
  std::vector<double> run_xis;
};

DistanceReport estimate_distance_report(const FunctionOracle& f,
                                        QueryLedger& ledger,
                                        const EstimatorParams& params,
                                        std::uint64_t seed);

// Distance from f to the closest s-sparse function, additively accurate to
// eps with probability 1 - delta. Functions with s >= 2^n short-circuit to
// zero without querying.
double estimate_distance(const FunctionOracle& f, QueryLedger& ledger,
                         const EstimatorParams& params, std::uint64_t seed);

// Sparsity test: run the amplified energy estimate at accuracy eps/2 and
// accept exactly when xi > (1 - eps/2) * known_norm.
TestVerdict ffst_test(const FunctionOracle& f, QueryLedger& ledger,
                      const EstimatorParams& params, std::uint64_t seed);
TestVerdict ffst_test(const FunctionOracle& f, QueryLedger& ledger, long s,
                      double eps, double known_norm, double delta,
                      std::uint64_t seed);

}  // namespace ffst
