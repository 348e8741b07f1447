#include "ffst/instances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "ffst/exact.hpp"

namespace ffst {

namespace {

// s distinct frequencies, uniform without replacement, in draw order.
std::vector<std::uint64_t> draw_support(int n, long s, Rng& rng) {
  if (n < 1 || n > kMaxAlgebraicDim) {
    throw std::invalid_argument("draw_support: n out of range");
  }
  if (s < 1 || (n < 63 && s > (1L << n))) {
    throw std::invalid_argument("draw_support: need 1 <= s <= 2^n");
  }
  std::vector<std::uint64_t> out;
  out.reserve(static_cast<std::size_t>(s));
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(static_cast<std::size_t>(s));
  while (static_cast<long>(out.size()) < s) {
    const std::uint64_t a = rng.bits(n);
    if (seen.insert(a).second) out.push_back(a);
  }
  return out;
}

double recorded_distance(const FunctionOracle& oracle, long s) {
  if (oracle.n() > kMaxExactDim) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return exact_distance_to_sparsity(oracle.is_dense() ? oracle : oracle.densified(), s);
}

}  // namespace

double default_coeff_law(Rng& rng) {
  const double magnitude = 0.5 + rng.real01();
  return rng.bits(1) ? -magnitude : magnitude;
}

PlantedInstance gen_sparse(int n, long s, std::uint64_t seed,
                           const CoeffLaw& law) {
  Rng rng(seed);
  SparseSpectrum spec;
  spec.n = n;
  for (std::uint64_t alpha : draw_support(n, s, rng)) {
    spec.coeffs.push_back(SparseEntry{alpha, law(rng)});
  }
  spec = normalize_to_unit(std::move(spec));
  FunctionOracle oracle = FunctionOracle::sparse(spec);
  const double dist = (n <= kMaxExactDim) ? recorded_distance(oracle, s) : 0.0;
  return PlantedInstance{"sparse", std::move(oracle), std::move(spec),
                         dist, n, s, 0.0, seed};
}

PlantedInstance gen_noisy_sparse(int n, long s, double rho, std::uint64_t seed) {
  if (n > kMaxExactDim) {
    throw std::invalid_argument("gen_noisy_sparse: n too large for dense output");
  }
  if (rho < 0.0 || rho >= 1.0) {
    throw std::invalid_argument("gen_noisy_sparse: rho in [0, 1)");
  }
  const long total = 1L << n;
  if (s >= total && rho > 0.0) {
    throw std::invalid_argument("gen_noisy_sparse: no frequencies left for noise");
  }
  Rng rng(seed);
  const auto support = draw_support(n, s, rng);

  std::vector<double> magnitudes(support.size());
  double signal_sq = 0.0;
  for (auto& m : magnitudes) {
    m = 0.5 + rng.real01();
    signal_sq += m * m;
  }
  const double signal_scale = std::sqrt((1.0 - rho) / signal_sq);
  const double noise_count = static_cast<double>(total - s);
  const double noise_mag = (rho > 0.0) ? std::sqrt(rho / noise_count) : 0.0;

  // Planted coefficients must dominate every noise coefficient, otherwise
  // the top-s set is not the planted set and the recorded distance is off.
  double min_planted = std::numeric_limits<double>::infinity();
  for (double m : magnitudes) min_planted = std::min(min_planted, m * signal_scale);
  if (rho > 0.0 && min_planted <= noise_mag) {
    throw std::invalid_argument(
        "gen_noisy_sparse: planted coefficients cannot dominate the noise floor");
  }

  SpectralTable coeffs = make_table(n);
  SparseSpectrum truth;
  truth.n = n;
  for (std::size_t i = 0; i < support.size(); ++i) {
    const double c = (rng.bits(1) ? -1.0 : 1.0) * magnitudes[i] * signal_scale;
    coeffs.values[support[i]] = c;
    truth.coeffs.push_back(SparseEntry{support[i], c});
  }
  if (noise_mag > 0.0) {
    for (long a = 0; a < total; ++a) {
      if (coeffs.values[a] == 0.0) {
        const double c = rng.bits(1) ? -noise_mag : noise_mag;
        coeffs.values[static_cast<std::size_t>(a)] = c;
        truth.coeffs.push_back(SparseEntry{static_cast<std::uint64_t>(a), c});
      }
    }
  }

  FunctionOracle oracle = FunctionOracle::dense(wht_inverse(coeffs));
  const double dist = recorded_distance(oracle, s);
  return PlantedInstance{"noisy-sparse", std::move(oracle), std::move(truth),
                         dist, n, s, rho, seed};
}

PlantedInstance gen_flat(int n, std::uint64_t seed) {
  if (n > kMaxDenseDim) {
    throw std::invalid_argument("gen_flat: n too large for dense output");
  }
  Rng rng(seed);
  const long total = 1L << n;
  const double mag = std::sqrt(1.0 / static_cast<double>(total));
  SpectralTable coeffs = make_table(n);
  SparseSpectrum truth;
  truth.n = n;
  truth.coeffs.reserve(static_cast<std::size_t>(total));
  for (long a = 0; a < total; ++a) {
    const double c = rng.bits(1) ? -mag : mag;
    coeffs.values[static_cast<std::size_t>(a)] = c;
    truth.coeffs.push_back(SparseEntry{static_cast<std::uint64_t>(a), c});
  }
  FunctionOracle oracle = FunctionOracle::dense(wht_inverse(coeffs));
  return PlantedInstance{"flat", std::move(oracle), std::move(truth),
                         std::numeric_limits<double>::quiet_NaN(), n, 0, 0.0,
                         seed};
}

PlantedInstance gen_dense_gaussian(int n, std::uint64_t seed) {
  if (n > kMaxDenseDim) {
    throw std::invalid_argument("gen_dense_gaussian: n too large");
  }
  Rng rng(seed);
  SpectralTable values = make_table(n);
  for (auto& v : values.values) v = rng.normal();
  FunctionOracle oracle = FunctionOracle::dense(normalize_to_unit(std::move(values)));
  return PlantedInstance{"dense-gaussian", std::move(oracle), SparseSpectrum{n, {}},
                         std::numeric_limits<double>::quiet_NaN(), n, 0, 0.0,
                         seed};
}

GaussianSpectrumInstance gen_dyes(int n, long s, std::uint64_t seed) {
  Rng rng(seed);
  auto support = draw_support(n, s, rng);
  std::sort(support.begin(), support.end());
  const double scale = 1.0 / std::sqrt(static_cast<double>(s));
  SparseSpectrum spec;
  spec.n = n;
  spec.coeffs.reserve(support.size());
  for (std::uint64_t alpha : support) {
    spec.coeffs.push_back(SparseEntry{alpha, rng.normal() * scale});
  }
  return GaussianSpectrumInstance{GaussianKind::Yes,
                                  FunctionOracle::sparse(std::move(spec)),
                                  std::move(support), n, s, seed};
}

GaussianSpectrumInstance gen_dno(int n, std::uint64_t seed) {
  if (n > kMaxExactDim) {
    throw std::invalid_argument("gen_dno: n too large for dense materialization");
  }
  Rng rng(seed);
  SpectralTable coeffs = make_table(n);
  const double scale = std::pow(2.0, -0.5 * n);
  for (auto& c : coeffs.values) c = rng.normal() * scale;
  return GaussianSpectrumInstance{GaussianKind::No,
                                  FunctionOracle::dense(wht_inverse(coeffs)),
                                  {}, n, 1L << n, seed};
}

double covariance_entry(GaussianKind kind,
                        std::span<const std::uint64_t> support,
                        std::uint64_t x, std::uint64_t y) {
  if (kind == GaussianKind::No) {
    return x == y ? 1.0 : 0.0;
  }
  if (support.empty()) {
    throw std::invalid_argument("covariance_entry: empty support");
  }
  const std::uint64_t w = x ^ y;
  double sum = 0.0;
  for (std::uint64_t z : support) sum += parity64(z & w) ? -1.0 : 1.0;
  return sum / static_cast<double>(support.size());
}

double frobenius_deviation(std::span<const std::uint64_t> support,
                           std::span<const std::uint64_t> query_points) {
  if (query_points.empty()) {
    throw std::invalid_argument("frobenius_deviation: q >= 1");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < query_points.size(); ++i) {
    for (std::size_t j = 0; j < query_points.size(); ++j) {
      const double target = (i == j) ? 1.0 : 0.0;
      const double entry = covariance_entry(GaussianKind::Yes, support,
                                            query_points[i], query_points[j]);
      const double diff = target - entry;
      sum += diff * diff;
    }
  }
  return sum;
}

DecisionRule norm_threshold_rule(double threshold) {
  return [threshold](std::span<const double> values) {
    double sum = 0.0;
    for (double v : values) sum += v * v;
    return sum / static_cast<double>(values.size()) <= threshold;
  };
}

DecisionRule exact_sparsity_rule(int n, long s, double tol) {
  return [n, s, tol](std::span<const double> values) {
    if (values.size() != (std::size_t{1} << n)) {
      throw std::invalid_argument("exact_sparsity_rule: needs the full value table");
    }
    SpectralTable table{n, std::vector<double>(values.begin(), values.end())};
    const SpectralTable coeffs = wht_forward(table);
    long nonzero = 0;
    for (double c : coeffs.values) {
      if (std::abs(c) > tol) ++nonzero;
    }
    return nonzero <= s;
  };
}

DistinguishOutcome distinguishing_experiment(int n, long s, long q, long trials,
                                             const DecisionRule& rule,
                                             std::uint64_t seed) {
  if (q < 1) throw std::invalid_argument("distinguishing_experiment: q >= 1");
  if (trials < 1) throw std::invalid_argument("distinguishing_experiment: trials >= 1");
  Rng rng(seed);

  DistinguishOutcome out;
  if (n < 63 && q == (1L << n)) {
    out.query_points.resize(static_cast<std::size_t>(q));
    for (long i = 0; i < q; ++i) {
      out.query_points[static_cast<std::size_t>(i)] = static_cast<std::uint64_t>(i);
    }
  } else {
    if (n < 63 && q > (1L << n)) {
      throw std::invalid_argument("distinguishing_experiment: q exceeds 2^n");
    }
    out.query_points = draw_support(n, q, rng);
  }

  std::vector<double> values(out.query_points.size());
  out.yes_accept.resize(static_cast<std::size_t>(trials));
  out.no_accept.resize(static_cast<std::size_t>(trials));
  long yes_hits = 0;
  long no_hits = 0;
  for (long i = 0; i < trials; ++i) {
    const auto yes = gen_dyes(n, s, rng.substream(2 * static_cast<std::uint64_t>(i)));
    yes.oracle.value_many(out.query_points, values);
    const bool ay = rule(values);
    out.yes_accept[static_cast<std::size_t>(i)] = ay;
    yes_hits += ay;

    const auto no = gen_dno(n, rng.substream(2 * static_cast<std::uint64_t>(i) + 1));
    no.oracle.value_many(out.query_points, values);
    const bool an = rule(values);
    out.no_accept[static_cast<std::size_t>(i)] = an;
    no_hits += an;
  }
  out.advantage = std::abs(static_cast<double>(yes_hits) -
                           static_cast<double>(no_hits)) /
                  static_cast<double>(trials);
  return out;
}

}  // namespace ffst
