#include <algorithm>
#include <cmath>

#include <doctest.h>

#include "ffst/exact.hpp"
#include "ffst/instances.hpp"

using namespace ffst;

namespace {

SpectralTable random_table(int n, std::uint64_t seed) {
  Rng rng(seed);
  SpectralTable t = make_table(n);
  for (auto& v : t.values) v = 2.0 * rng.real01() - 1.0;
  return t;
}

}  // namespace

TEST_CASE("exact_spectrum: characters, zero, and the direct-definition oracle") {
  const int n = 4;
  const std::uint64_t beta = 0b1010;
  SpectralTable coeffs = make_table(n);
  coeffs.values[beta] = 1.0;
  const RankedSpectrum chi_ranked = exact_spectrum(wht_inverse(coeffs));
  CHECK(chi_ranked.entries.front().alpha == beta);
  CHECK(chi_ranked.entries.front().coeff == doctest::Approx(1.0));
  CHECK(chi_ranked.entries.front().energy == doctest::Approx(1.0));
  CHECK(total_energy(chi_ranked) == doctest::Approx(1.0).epsilon(1e-12));

  const RankedSpectrum zero = exact_spectrum(make_table(3));
  CHECK(total_energy(zero) == 0.0);

  const SpectralTable t = random_table(4, 21);
  const RankedSpectrum ranked = exact_spectrum(t);
  // Direct-definition coefficients, looked up by frequency.
  for (const auto& e : ranked.entries) {
    double direct = 0.0;
    for (std::uint64_t x = 0; x < t.values.size(); ++x) {
      direct += parity64(e.alpha & x) ? -t.values[x] : t.values[x];
    }
    direct /= static_cast<double>(t.values.size());
    CHECK(e.coeff == doctest::Approx(direct).epsilon(1e-12));
  }
  CHECK(std::is_sorted(ranked.entries.begin(), ranked.entries.end(),
                       [](const RankedEntry& a, const RankedEntry& b) {
                         return a.energy > b.energy ||
                                (a.energy == b.energy && a.alpha < b.alpha);
                       }));

  CHECK_THROWS_AS(exact_spectrum(SpectralTable{25, {}}), std::invalid_argument);
}

TEST_CASE("exact_top_s_energy") {
  const RankedSpectrum two{6, {{12, 0.8, 0.64}, {3, 0.6, 0.36}}};
  CHECK(exact_top_s_energy(two, 0) == 0.0);
  CHECK(exact_top_s_energy(two, 1) == doctest::Approx(0.64));
  CHECK(exact_top_s_energy(two, 100) == doctest::Approx(1.0));
  CHECK_THROWS_AS(exact_top_s_energy(two, -1), std::invalid_argument);
}

TEST_CASE("exact_distance_to_sparsity") {
  // s-sparse functions are at distance zero.
  const auto planted = gen_sparse(10, 8, 5);
  CHECK(exact_distance_to_sparsity(planted.oracle.densified(), 8) ==
        doctest::Approx(0.0).epsilon(1e-10));

  // Flat unit spectrum: distance 1 - s * 2^-n.
  const auto flat = gen_flat(10, 6);
  CHECK(exact_distance_to_sparsity(flat.oracle, 64) ==
        doctest::Approx(0.9375).epsilon(1e-10));

  // Identical to the brute-force "zero out all but s coefficients" search.
  const SpectralTable t = random_table(8, 30);
  const RankedSpectrum ranked = exact_spectrum(t);
  const long s = 5;
  double kept = 0.0;
  for (long i = 0; i < s; ++i) kept += ranked.entries[static_cast<std::size_t>(i)].energy;
  const double residual = total_energy(ranked) - kept;
  CHECK(exact_distance_to_sparsity(t, s) == doctest::Approx(residual).epsilon(1e-12));

  // Monotone non-increasing in s.
  double prev = exact_distance_to_sparsity(t, 0);
  for (long k = 1; k <= 256; k *= 2) {
    const double cur = exact_distance_to_sparsity(t, k);
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
}

TEST_CASE("exact_hashing_error: hand-built collision") {
  // Rows orthogonal to v = 111 so that 001 and 110 share a bucket; a third
  // light coefficient sits elsewhere and becomes the whole error.
  const CosetHash hash(Gf2Matrix{3, {0b011, 0b101}});
  REQUIRE(hash.bucket_of(std::uint64_t{0b001}) == hash.bucket_of(std::uint64_t{0b110}));
  REQUIRE(hash.bucket_of(std::uint64_t{0b010}) != hash.bucket_of(std::uint64_t{0b001}));

  const double h = std::sqrt(0.5);
  RankedSpectrum spec{3,
                      {{0b001, h, 0.5}, {0b110, -h, 0.5}, {0b010, 0.1, 0.01}}};
  CHECK(exact_hashing_error(spec, hash, 2) == doctest::Approx(0.01).epsilon(1e-12));

  // With nothing outside the collision, the error vanishes.
  RankedSpectrum bare{3, {{0b001, h, 0.5}, {0b110, -h, 0.5}}};
  CHECK(exact_hashing_error(bare, hash, 2) == doctest::Approx(0.0));
}

TEST_CASE("exact_hashing_error: separated coefficients and independent recomputation") {
  Rng rng(40);
  // s coefficients in distinct buckets, nothing else: zero error.
  const CosetHash identity(Gf2Matrix{6, {1, 2, 4, 8, 16, 32}});
  const auto planted = gen_sparse(6, 4, 77);
  const RankedSpectrum planted_ranked = exact_spectrum(planted.oracle);
  CHECK(exact_hashing_error(planted_ranked, identity, 4) ==
        doctest::Approx(0.0).epsilon(1e-12));

  const SpectralTable t = random_table(10, 41);
  const RankedSpectrum ranked = exact_spectrum(t);
  const auto hash = CosetHash::sample(6, 10, rng);
  const long s = 4;

  // Independent grouping path.
  std::vector<double> bucket(hash.bucket_count(), 0.0);
  for (const auto& e : ranked.entries) bucket[hash.bucket_of(e.alpha)] += e.energy;
  std::sort(bucket.begin(), bucket.end(), std::greater<double>());
  double top_buckets = 0.0;
  for (long i = 0; i < s; ++i) top_buckets += bucket[static_cast<std::size_t>(i)];
  double top_coeffs = 0.0;
  for (long i = 0; i < s; ++i) top_coeffs += ranked.entries[static_cast<std::size_t>(i)].energy;

  CHECK(exact_hashing_error(ranked, hash, s) ==
        doctest::Approx(top_buckets - top_coeffs).epsilon(1e-12));

  // Non-negative for arbitrary functions and hashes.
  for (int trial = 0; trial < 50; ++trial) {
    const auto h2 = CosetHash::sample(1 + static_cast<int>(rng.below(8)), 10, rng);
    CHECK(exact_hashing_error(ranked, h2, 1 + static_cast<long>(rng.below(20))) >= 0.0);
  }
}

TEST_CASE("expected hashing error stays under the codimension bound") {
  // Flat spectra spread collisions as widely as possible, so the mean error
  // over random hashes is the interesting stress for the sqrt(2s/2^d) bound.
  const int n = 12, d = 6;
  const long s = 16;
  const auto flat = gen_flat(n, 50);
  const RankedSpectrum ranked = exact_spectrum(flat.oracle);
  Rng rng(51);
  double sum = 0.0;
  const int draws = 1000;
  for (int i = 0; i < draws; ++i) {
    const auto hash = CosetHash::sample(d, n, rng);
    sum += exact_hashing_error(ranked, hash, s);
  }
  const double mean = sum / draws;
  const double bound = std::sqrt(2.0 * static_cast<double>(s) / (1 << d));
  CHECK(mean <= 1.5 * bound);
}
