#include <cmath>
#include <set>

#include <doctest.h>

#include "ffst/exact.hpp"
#include "ffst/instances.hpp"

using namespace ffst;

TEST_CASE("gen_sparse: support size, unit norm, zero distance") {
  const auto single = gen_sparse(10, 1, 1);
  CHECK(single.truth.coeffs.size() == 1);
  CHECK(std::abs(single.truth.coeffs[0].value) == doctest::Approx(1.0));

  const auto full = gen_sparse(4, 16, 2);
  CHECK(full.truth.coeffs.size() == 16);

  const auto inst = gen_sparse(10, 8, 3);
  CHECK(inst.truth.coeffs.size() == 8);
  CHECK(squared_norm_exact(inst.oracle) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(inst.exact_distance == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(exact_distance_to_sparsity(inst.oracle.densified(), 8) ==
        doctest::Approx(0.0).epsilon(1e-10));

  CHECK_THROWS_AS(gen_sparse(4, 17, 1), std::invalid_argument);
  CHECK_THROWS_AS(gen_sparse(4, 0, 1), std::invalid_argument);
}

TEST_CASE("gen_noisy_sparse: recorded distance equals the noise mass") {
  const auto clean = gen_noisy_sparse(8, 4, 0.0, 4);
  CHECK(clean.exact_distance == doctest::Approx(0.0).epsilon(1e-10));

  const auto noisy = gen_noisy_sparse(12, 8, 0.3, 5);
  CHECK(squared_norm_exact(noisy.oracle) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(noisy.exact_distance == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(noisy.truth.coeffs.size() == 1 << 12);

  // Planted coefficients cannot dominate when the noise floor is too high.
  CHECK_THROWS_AS(gen_noisy_sparse(4, 8, 0.9, 6), std::invalid_argument);
  CHECK_THROWS_AS(gen_noisy_sparse(8, 4, 1.0, 6), std::invalid_argument);
}

TEST_CASE("gen_flat: perfectly flat unit spectrum") {
  const auto flat = gen_flat(10, 7);
  CHECK(squared_norm_exact(flat.oracle) == doctest::Approx(1.0).epsilon(1e-9));
  const RankedSpectrum ranked = exact_spectrum(flat.oracle);
  for (const auto& e : ranked.entries) {
    CHECK(e.energy == doctest::Approx(1.0 / 1024).epsilon(1e-9));
  }
  CHECK(exact_distance_to_sparsity(flat.oracle, 64) ==
        doctest::Approx(0.9375).epsilon(1e-9));
}

TEST_CASE("gen_dyes: exactly s-sparse with expected unit norm") {
  const auto one = gen_dyes(12, 1, 8);
  CHECK(one.support.size() == 1);

  const auto inst = gen_dyes(10, 16, 9);
  CHECK(inst.support.size() == 16);
  CHECK(exact_distance_to_sparsity(inst.oracle.densified(), 16) ==
        doctest::Approx(0.0).epsilon(1e-10));

  double mean_norm = 0.0;
  const int draws = 1000;
  for (int i = 0; i < draws; ++i) {
    mean_norm += squared_norm_exact(gen_dyes(10, 16, 1000 + i).oracle);
  }
  mean_norm /= draws;
  CHECK(std::abs(mean_norm - 1.0) <= 0.05);
}

TEST_CASE("gen_dno: dense Gaussian spectrum with matching moments") {
  double mean_norm = 0.0;
  double coeff_sq = 0.0;
  const int draws = 200;
  const int n = 10;
  for (int i = 0; i < draws; ++i) {
    const auto inst = gen_dno(n, 2000 + i);
    mean_norm += squared_norm_exact(inst.oracle);
    const SpectralTable coeffs = wht_forward(*inst.oracle.dense_table());
    for (double c : coeffs.values) coeff_sq += c * c;
  }
  mean_norm /= draws;
  CHECK(mean_norm >= 0.9);
  CHECK(mean_norm <= 1.1);

  // Coefficient variance should be 2^-n within 10%.
  const double var = coeff_sq / (static_cast<double>(draws) * (1 << n));
  CHECK(std::abs(var - std::pow(2.0, -n)) <= 0.1 * std::pow(2.0, -n));

  // Full support with probability one.
  const auto inst = gen_dno(n, 77);
  const SpectralTable coeffs = wht_forward(*inst.oracle.dense_table());
  for (double c : coeffs.values) CHECK(c != 0.0);
}

TEST_CASE("covariance_entry basics") {
  const std::vector<std::uint64_t> support{0};
  CHECK(covariance_entry(GaussianKind::Yes, support, 5, 5) == 1.0);
  CHECK(covariance_entry(GaussianKind::No, {}, 9, 9) == 1.0);
  CHECK(covariance_entry(GaussianKind::No, {}, 9, 10) == 0.0);
  // S = {0}: chi_0 terms only, so every pair correlates fully.
  CHECK(covariance_entry(GaussianKind::Yes, support, 3, 12) == 1.0);
}

TEST_CASE("empirical covariance matches the support formula") {
  const int n = 8;
  const long s = 16;
  const auto proto = gen_dyes(n, s, 31);  // fixes the support set
  const std::uint64_t x = 13, y = 200;
  const double target =
      covariance_entry(GaussianKind::Yes, proto.support, x, y);

  // Redraw only the coefficients: same support, fresh Gaussians.
  const double scale = 1.0 / std::sqrt(static_cast<double>(s));
  double sum = 0.0, sq_sum = 0.0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    Rng rng(5000 + i);
    double fx = 0.0, fy = 0.0;
    for (const std::uint64_t z : proto.support) {
      const double g = rng.normal() * scale;
      fx += parity64(z & x) ? -g : g;
      fy += parity64(z & y) ? -g : g;
    }
    const double prod = fx * fy;
    sum += prod;
    sq_sum += prod * prod;
  }
  const double mean = sum / draws;
  const double var = sq_sum / draws - mean * mean;
  const double se = std::sqrt(var / draws);
  CHECK(std::abs(mean - target) <= 4.0 * se);
}

TEST_CASE("frobenius_deviation: identity cases and the q^2/s scale") {
  // Full support: M is exactly the identity.
  std::vector<std::uint64_t> all(1 << 6);
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const std::vector<std::uint64_t> q3{1, 9, 33};
  CHECK(frobenius_deviation(all, q3) == 0.0);

  // Single query point: the diagonal is always 1.
  const auto inst = gen_dyes(10, 64, 40);
  CHECK(frobenius_deviation(inst.support, std::vector<std::uint64_t>{5}) == 0.0);

  // Mean over random supports and query sets stays within a factor 2 of
  // q^2 / s.
  const int n = 10;
  const long s = 64, q = 8;
  Rng rng(41);
  double mean = 0.0;
  const int draws = 1000;
  for (int i = 0; i < draws; ++i) {
    const auto draw = gen_dyes(n, s, rng.substream(static_cast<std::uint64_t>(i)));
    std::set<std::uint64_t> qs;
    while (static_cast<long>(qs.size()) < q) qs.insert(rng.bits(n));
    std::vector<std::uint64_t> query(qs.begin(), qs.end());
    mean += frobenius_deviation(draw.support, query);
    CHECK(frobenius_deviation(draw.support, query) >= 0.0);
  }
  mean /= draws;
  CHECK(mean <= 2.0 * static_cast<double>(q * q) / static_cast<double>(s));
}

TEST_CASE("distinguishing_experiment: full information separates, tiny budgets do not") {
  // Full query set plus the exact sparsity rule: advantage near 1.
  const auto full = distinguishing_experiment(10, 16, 1 << 10, 30,
                                              exact_sparsity_rule(10, 16), 50);
  CHECK(full.advantage >= 0.95);

  // Four queries against s = 256: the norm rule gets nearly nothing.
  const auto starved = distinguishing_experiment(
      12, 256, 4, 1000, norm_threshold_rule(1.0), 51);
  CHECK(starved.advantage <= 0.2);

  CHECK_THROWS_AS(distinguishing_experiment(10, 16, 4, 0,
                                            norm_threshold_rule(1.0), 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(distinguishing_experiment(10, 16, 0, 5,
                                            norm_threshold_rule(1.0), 1),
                  std::invalid_argument);
}

TEST_CASE("D_NO draws at n = 12 sit far from s = 2^n/8 sparsity") {
  int far = 0;
  const int draws = 20;
  for (int i = 0; i < draws; ++i) {
    const auto inst = gen_dno(12, 6000 + i);
    far += exact_distance_to_sparsity(inst.oracle, 512) >= 1.0 / 3.0;
  }
  CHECK(far == draws);
}
