#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "ffst/io.hpp"
#include "ffst/oracle.hpp"
#include "ffst/parallel.hpp"

using namespace ffst;

namespace {

SpectralTable random_table(int n, std::uint64_t seed) {
  Rng rng(seed);
  SpectralTable t = make_table(n);
  for (auto& v : t.values) v = 2.0 * rng.real01() - 1.0;
  return t;
}

std::vector<CubePoint> points_of(const std::vector<std::uint64_t>& bits, int n) {
  std::vector<CubePoint> pts;
  for (auto b : bits) pts.push_back(CubePoint{b, n});
  return pts;
}

}  // namespace

TEST_CASE("sparse spectrum validation") {
  CHECK_THROWS_AS(validate(SparseSpectrum{4, {{1, 1.0}, {1, 0.5}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate(SparseSpectrum{4, {{1, 0.0}}}), std::invalid_argument);
  CHECK_THROWS_AS(validate(SparseSpectrum{4, {{16, 1.0}}}), std::invalid_argument);
  CHECK_NOTHROW(validate(SparseSpectrum{4, {{0, 1.0}, {15, -0.25}}}));
}

TEST_CASE("evaluate_batch on sparse and dense backings") {
  QueryLedger ledger;

  const auto constant = FunctionOracle::sparse(SparseSpectrum{4, {{0, 1.0}}});
  const auto vals = evaluate_batch(constant, ledger,
                                   points_of({0, 3, 9, 15}, 4));
  for (double v : vals) CHECK(v == 1.0);
  CHECK(ledger.count() == 4);

  const std::uint64_t beta = 0b0110;
  const auto character = FunctionOracle::sparse(SparseSpectrum{4, {{beta, 1.0}}});
  for (std::uint64_t x = 0; x < 16; ++x) {
    QueryLedger l2;
    const auto v = evaluate_batch(character, l2, points_of({x}, 4));
    CHECK(v[0] == (parity64(beta & x) ? -1.0 : 1.0));
  }

  const SpectralTable table = random_table(3, 3);
  const auto dense = FunctionOracle::dense(table);
  QueryLedger l3;
  std::vector<std::uint64_t> all{0, 1, 2, 3, 4, 5, 6, 7};
  const auto dvals = evaluate_batch(dense, l3, points_of(all, 3));
  for (std::size_t x = 0; x < 8; ++x) CHECK(dvals[x] == table.values[x]);
  CHECK(l3.count() == 8);

  CHECK_THROWS_AS(evaluate_batch(dense, l3, points_of({0}, 4)),
                  std::invalid_argument);
}

TEST_CASE("squared_norm_exact: sparse Parseval and dense dual route") {
  CHECK(squared_norm_exact(FunctionOracle::sparse(SparseSpectrum{6, {{9, 1.0}}})) ==
        doctest::Approx(1.0));
  CHECK(squared_norm_exact(FunctionOracle::sparse(
            SparseSpectrum{6, {{3, 0.6}, {12, 0.8}}})) == doctest::Approx(1.0));

  // Independent routes: mean of squares vs the coefficient-energy sum.
  const SpectralTable t = random_table(4, 11);
  const auto oracle = FunctionOracle::dense(t);
  const SpectralTable coeffs = wht_forward(t);
  double spectral = 0.0;
  for (double c : coeffs.values) spectral += c * c;
  CHECK(squared_norm_exact(oracle) == doctest::Approx(spectral).epsilon(1e-12));
}

TEST_CASE("estimate_squared_norm") {
  QueryLedger ledger;
  Rng rng(5);
  const auto constant = FunctionOracle::sparse(SparseSpectrum{8, {{0, 1.0}}});
  CHECK(estimate_squared_norm(constant, ledger, 37, rng) == 1.0);
  CHECK(ledger.count() == 37);

  // Single character: f^2 is constant, so any sample size is exact.
  const auto single = FunctionOracle::sparse(SparseSpectrum{8, {{19, -1.7}}});
  CHECK(estimate_squared_norm(single, ledger, 5, rng) ==
        doctest::Approx(1.7 * 1.7).epsilon(1e-15));

  // Two-character unit-norm function: var(f^2) = 4 a^2 b^2 <= 1, so 10^4
  // samples land within 0.05 of 1 in essentially every seed.
  const auto two = FunctionOracle::sparse(
      SparseSpectrum{8, {{19, std::sqrt(0.5)}, {77, -std::sqrt(0.5)}}});
  int ok = 0;
  const int runs = 200;
  for (int i = 0; i < runs; ++i) {
    Rng r(1000 + i);
    QueryLedger l;
    const double est = estimate_squared_norm(two, l, 10000, r);
    ok += std::abs(est - 1.0) <= 0.05;
  }
  CHECK(ok >= static_cast<int>(0.99 * runs));
}

TEST_CASE("normalize_to_unit") {
  const auto scaled = normalize_to_unit(SparseSpectrum{5, {{7, 2.0}}});
  CHECK(scaled.coeffs[0].value == doctest::Approx(1.0));

  const auto unit = normalize_to_unit(SparseSpectrum{5, {{7, 1.0}}});
  CHECK(unit.coeffs[0].value == doctest::Approx(1.0).epsilon(1e-15));

  const SpectralTable t = normalize_to_unit(random_table(5, 23));
  CHECK(squared_norm_exact(FunctionOracle::dense(t)) ==
        doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(normalize_to_unit(SpectralTable{make_table(3)}),
                  std::invalid_argument);
}

TEST_CASE("representation equivalence: densified sparse matches on-demand evaluation") {
  for (std::uint64_t trial = 0; trial < 4; ++trial) {
    Rng rng(77 + trial);
    SparseSpectrum spec;
    spec.n = 12;
    const long support = 1 + static_cast<long>(rng.below(24));
    while (static_cast<long>(spec.coeffs.size()) < support) {
      const std::uint64_t a = rng.bits(12);
      bool dup = false;
      for (const auto& e : spec.coeffs) dup = dup || e.alpha == a;
      if (!dup) spec.coeffs.push_back(SparseEntry{a, 2.0 * rng.real01() - 1.0});
    }
    const auto sparse = FunctionOracle::sparse(spec);
    const auto dense = sparse.densified();
    for (std::uint64_t x = 0; x < 4096; ++x) {
      CHECK(dense.value(x) == doctest::Approx(sparse.value(x)).epsilon(1e-10));
    }
  }
}

TEST_CASE("ledger count stays exact under concurrent charges") {
  QueryLedger ledger;
  ledger.set_recording(true);
  const auto oracle = FunctionOracle::sparse(SparseSpectrum{6, {{1, 1.0}}});
  parallel_for(64, 8, [&](std::size_t i) {
    std::vector<std::uint64_t> pts(i % 5 + 1, i % 64);
    std::vector<double> out(pts.size());
    evaluate_batch(oracle, ledger, pts, out);
  });
  std::uint64_t expected = 0;
  for (std::size_t i = 0; i < 64; ++i) expected += i % 5 + 1;
  CHECK(ledger.count() == expected);
  CHECK(ledger.recorded_sorted().size() == expected);
}

TEST_CASE("ledger recording keeps the full multiset") {
  QueryLedger ledger;
  ledger.set_recording(true);
  const auto oracle = FunctionOracle::sparse(SparseSpectrum{4, {{1, 1.0}}});
  evaluate_batch(oracle, ledger, points_of({3, 3, 9}, 4));
  evaluate_batch(oracle, ledger, points_of({3}, 4));
  CHECK(ledger.count() == 4);
  const auto rec = ledger.recorded_sorted();
  CHECK(rec == std::vector<std::uint64_t>{3, 3, 3, 9});
  ledger.reset();
  CHECK(ledger.count() == 0);
  CHECK(ledger.recorded_sorted().empty());
}

TEST_CASE("function file round-trip") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "ffst_oracle_io";
  fs::create_directories(dir);

  const auto dense = FunctionOracle::dense(random_table(4, 2));
  const std::string dense_path = (dir / "dense.json").string();
  save_function(dense, dense_path);
  const auto dense_back = load_function(dense_path);
  REQUIRE(dense_back.is_dense());
  for (std::uint64_t x = 0; x < 16; ++x) {
    CHECK(dense_back.value(x) == dense.value(x));
  }

  const auto sparse = FunctionOracle::sparse(
      SparseSpectrum{20, {{5, 0.25}, {1 << 19, -2.0}}});
  const std::string sparse_path = (dir / "sparse.json").string();
  save_function(sparse, sparse_path);
  const auto sparse_back = load_function(sparse_path);
  REQUIRE(!sparse_back.is_dense());
  CHECK(sparse_back.n() == 20);
  CHECK(sparse_back.sparse_spectrum()->coeffs.size() == 2);

  std::ofstream bad((dir / "bad.json").string());
  bad << "{\"n\": 3, \"repr\": \"diagonal\"}";
  bad.close();
  CHECK_THROWS(load_function((dir / "bad.json").string()));
  CHECK_THROWS(load_function((dir / "missing.json").string()));
  fs::remove_all(dir);
}
