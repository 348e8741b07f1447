#include "ffst/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ffst {

namespace {

constexpr long kChunkPairs = 1 << 15;

void validate(const EstimatorParams& p) {
  if (p.s < 1) throw std::invalid_argument("EstimatorParams: s >= 1");
  if (!(p.eps > 0.0 && p.eps <= 1.0)) {
    throw std::invalid_argument("EstimatorParams: eps in (0, 1]");
  }
  if (!(p.delta > 0.0 && p.delta < 1.0)) {
    throw std::invalid_argument("EstimatorParams: delta in (0, 1)");
  }
  if (p.c_gamma <= 0.0 || p.c_ell < 0.0) {
    throw std::invalid_argument("EstimatorParams: multipliers must be positive");
  }
  if (p.ell_override && (*p.ell_override < 1 || *p.ell_override % 2 == 0)) {
    throw std::invalid_argument("EstimatorParams: ell override must be odd and >= 1");
  }
  if (p.r_override && (*p.r_override < 1 || *p.r_override % 2 == 0)) {
    throw std::invalid_argument("EstimatorParams: r override must be odd and >= 1");
  }
  if (p.gamma_override && *p.gamma_override < 1) {
    throw std::invalid_argument("EstimatorParams: gamma override must be >= 1");
  }
}

int smallest_odd_at_least(double x) {
  long v = std::max(1L, static_cast<long>(std::ceil(x)));
  if (v % 2 == 0) ++v;
  return static_cast<int>(v);
}

// True when s >= 2^n, i.e. every function on the cube is s-sparse.
bool sparsity_vacuous(long s, int n) {
  return n < 63 && s >= (1L << n);
}

double median_of(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;  // size is odd
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  return v[mid];
}

}  // namespace

DerivedParams derive_params(const EstimatorParams& params, int n) {
  validate(params);
  if (n < 1 || n > kMaxAlgebraicDim) {
    throw std::invalid_argument("derive_params: n out of range");
  }
  DerivedParams out;

  const double e4 = std::pow(params.eps, 4.0);
  if (params.d_override) {
    out.d = *params.d_override;
    if (out.d < 0 || out.d > n) {
      throw std::invalid_argument("derive_params: d override out of [0, n]");
    }
  } else {
    const double target = std::max(2.0, 2.0 * static_cast<double>(params.s) / e4);
    out.d = std::min(n, static_cast<int>(std::ceil(std::log2(target))));
  }

  if (params.gamma_override) {
    out.gamma = *params.gamma_override;
  } else {
    const double g = std::ceil(params.c_gamma * static_cast<double>(params.s) / e4);
    if (!(g >= 1.0) || g > 1e15) {
      throw std::invalid_argument("derive_params: gamma out of range");
    }
    out.gamma = static_cast<long>(g);
  }

  out.ell = params.ell_override
                ? *params.ell_override
                : smallest_odd_at_least(params.c_ell *
                                        std::ceil(std::log2(1.0 / params.eps)));
  out.r = params.r_override
              ? *params.r_override
              : smallest_odd_at_least(2.0 * std::log(1.0 / params.delta));
  return out;
}

std::vector<double> estimate_bucket_medians(const FunctionOracle& f,
                                            QueryLedger& ledger,
                                            const CosetHash& hash, long gamma,
                                            int ell, std::uint64_t seed,
                                            bool naive) {
  if (f.n() != hash.n()) {
    throw std::invalid_argument("estimate_bucket_medians: dimension mismatch");
  }
  if (gamma < 1 || ell < 1) {
    throw std::invalid_argument("estimate_bucket_medians: gamma, ell >= 1");
  }
  const int n = f.n();
  const int d = hash.d();
  const std::size_t buckets = hash.bucket_count();
  const auto shifts = hash.shift_table();

  const long chunk = std::min(gamma, kChunkPairs);
  std::vector<std::uint64_t> pts(static_cast<std::size_t>(2 * chunk));
  std::vector<double> vals(static_cast<std::size_t>(2 * chunk));
  std::vector<BucketId> cs(static_cast<std::size_t>(chunk));

  // estimates[j][t]: repetition j's estimate for bucket t.
  std::vector<std::vector<double>> estimates(
      static_cast<std::size_t>(ell), std::vector<double>(buckets, 0.0));

  for (int j = 0; j < ell; ++j) {
    Rng rng(substream_seed(seed, static_cast<std::uint64_t>(j)));
    std::vector<double>& acc = estimates[static_cast<std::size_t>(j)];

    for (long done = 0; done < gamma;) {
      const long m = std::min(chunk, gamma - done);
      for (long i = 0; i < m; ++i) {
        const std::uint64_t x = rng.bits(n);
        const BucketId c = static_cast<BucketId>(rng.bits(d));
        cs[static_cast<std::size_t>(i)] = c;
        pts[static_cast<std::size_t>(2 * i)] = x;
        pts[static_cast<std::size_t>(2 * i + 1)] = x ^ shifts[c];
      }
      evaluate_batch(f, ledger,
                     std::span<const std::uint64_t>(pts.data(),
                                                    static_cast<std::size_t>(2 * m)),
                     std::span<double>(vals.data(), static_cast<std::size_t>(2 * m)));
      if (!naive) {
        for (long i = 0; i < m; ++i) {
          acc[cs[static_cast<std::size_t>(i)]] +=
              vals[static_cast<std::size_t>(2 * i)] *
              vals[static_cast<std::size_t>(2 * i + 1)];
        }
      } else {
        const double inv_gamma = 1.0 / static_cast<double>(gamma);
        for (long i = 0; i < m; ++i) {
          const double prod = vals[static_cast<std::size_t>(2 * i)] *
                              vals[static_cast<std::size_t>(2 * i + 1)] *
                              inv_gamma;
          const BucketId c = cs[static_cast<std::size_t>(i)];
          for (std::size_t t = 0; t < buckets; ++t) {
            acc[t] += parity64(c & t) ? -prod : prod;
          }
        }
      }
      done += m;
    }

    if (!naive) {
      // Pattern sums -> bucket estimates via the signed butterfly.
      acc = signed_combine(std::move(acc));
      const double inv_gamma = 1.0 / static_cast<double>(gamma);
      for (double& v : acc) v *= inv_gamma;
    }
  }

  std::vector<double> medians(buckets, 0.0);
  std::vector<double> column(static_cast<std::size_t>(ell));
  for (std::size_t t = 0; t < buckets; ++t) {
    for (int j = 0; j < ell; ++j) {
      column[static_cast<std::size_t>(j)] = estimates[static_cast<std::size_t>(j)][t];
    }
    medians[t] = median_of(column);
  }
  return medians;
}

namespace {

EnergyReport run_energy_estimate(const FunctionOracle& f, QueryLedger& ledger,
                                 const EstimatorParams& params,
                                 std::uint64_t seed, bool naive) {
  const int n = f.n();
  const DerivedParams derived = derive_params(params, n);

  Rng hash_rng(substream_seed(seed, 0));
  CosetHash hash = CosetHash::sample(derived.d, n, hash_rng);
  std::vector<double> medians =
      estimate_bucket_medians(f, ledger, hash, derived.gamma, derived.ell,
                              substream_seed(seed, 1), naive);

  const std::size_t buckets = medians.size();
  std::vector<BucketId> order(buckets);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](BucketId a, BucketId b) {
    if (medians[a] != medians[b]) return medians[a] > medians[b];
    return a < b;
  });

  const std::size_t take =
      std::min<std::size_t>(static_cast<std::size_t>(params.s), buckets);
  EnergyReport report{0.0,
                      std::move(medians),
                      std::vector<BucketId>(order.begin(),
                                            order.begin() + static_cast<long>(take)),
                      std::move(hash),
                      derived,
                      2 * static_cast<std::uint64_t>(derived.gamma) *
                          static_cast<std::uint64_t>(derived.ell),
                      seed};
  for (BucketId t : report.chosen_buckets) report.xi += report.bucket_medians[t];
  return report;
}

}  // namespace

EnergyReport estimate_top_s_energy(const FunctionOracle& f, QueryLedger& ledger,
                                   const EstimatorParams& params,
                                   std::uint64_t seed) {
  return run_energy_estimate(f, ledger, params, seed, /*naive=*/false);
}

EnergyReport estimate_top_s_energy_naive(const FunctionOracle& f,
                                         QueryLedger& ledger,
                                         const EstimatorParams& params,
                                         std::uint64_t seed) {
  return run_energy_estimate(f, ledger, params, seed, /*naive=*/true);
}

DistanceReport estimate_distance_report(const FunctionOracle& f,
                                        QueryLedger& ledger,
                                        const EstimatorParams& params,
                                        std::uint64_t seed) {
  validate(params);
  DistanceReport out;
  out.seed = seed;
  if (sparsity_vacuous(params.s, f.n())) {
    out.distance = 0.0;
    out.xi_final = params.known_norm;
    return out;
  }
  out.params = derive_params(params, f.n());
  out.run_xis.reserve(static_cast<std::size_t>(out.params.r));
  for (int i = 0; i < out.params.r; ++i) {
    const EnergyReport rep = estimate_top_s_energy(
        f, ledger, params, substream_seed(seed, 2 + static_cast<std::uint64_t>(i)));
    out.run_xis.push_back(rep.xi);
    out.queries_used += rep.queries_used;
  }
  out.xi_final = median_of(out.run_xis);
  out.distance = std::clamp(params.known_norm - out.xi_final, 0.0, params.known_norm);
  return out;
}

double estimate_distance(const FunctionOracle& f, QueryLedger& ledger,
                         const EstimatorParams& params, std::uint64_t seed) {
  return estimate_distance_report(f, ledger, params, seed).distance;
}

TestVerdict ffst_test(const FunctionOracle& f, QueryLedger& ledger,
                      const EstimatorParams& params, std::uint64_t seed) {
  validate(params);
  const double threshold = (1.0 - params.eps / 2.0) * params.known_norm;
  if (sparsity_vacuous(params.s, f.n())) {
    return TestVerdict{true, params.known_norm, threshold};
  }
  EstimatorParams inner = params;
  inner.eps = params.eps / 2.0;
  const DistanceReport rep = estimate_distance_report(f, ledger, inner, seed);
  return TestVerdict{rep.xi_final > threshold, rep.xi_final, threshold};
}

TestVerdict ffst_test(const FunctionOracle& f, QueryLedger& ledger, long s,
                      double eps, double known_norm, double delta,
                      std::uint64_t seed) {
  EstimatorParams params;
  params.s = s;
  params.eps = eps;
  params.delta = delta;
  params.known_norm = known_norm;
  return ffst_test(f, ledger, params, seed);
}

}  // namespace ffst
