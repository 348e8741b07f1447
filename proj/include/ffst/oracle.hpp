#pragma once

#include <atomic>
#include <cstdint>
#include <mutex>
#include <span>
#include <variant>
#include <vector>

#include "ffst/cube.hpp"
#include "ffst/rng.hpp"

namespace ffst {

// One nonzero coefficient: frequency label and its value.
struct SparseEntry {
  std::uint64_t alpha = 0;
  double value = 0.0;
};

// Explicit list of nonzero coefficients. Frequencies must be distinct and
// below 2^n; values nonzero and finite.
struct SparseSpectrum {
  int n = 0;
  std::vector<SparseEntry> coeffs;
};

// Throws std::invalid_argument if the spectrum breaks its invariants.
void validate(const SparseSpectrum& s);

// Counts (and optionally records) every point evaluation made through
// evaluate_batch. Increments are atomic, so concurrent workers charging the
// same ledger still produce an exact final count; the recorded multiset may
// interleave in any order.
class QueryLedger {
 public:
  QueryLedger() = default;
  QueryLedger(const QueryLedger&) = delete;
  QueryLedger& operator=(const QueryLedger&) = delete;

  void charge(std::span<const std::uint64_t> points) {
    count_.fetch_add(points.size(), std::memory_order_relaxed);
    if (recording_.load(std::memory_order_relaxed)) {
      std::lock_guard<std::mutex> lock(mu_);
      points_.insert(points_.end(), points.begin(), points.end());
    }
  }

  std::uint64_t count() const { return count_.load(std::memory_order_relaxed); }

  void reset() {
    std::lock_guard<std::mutex> lock(mu_);
    count_.store(0, std::memory_order_relaxed);
    points_.clear();
  }

  // Do not toggle while charges are in flight.
  void set_recording(bool on) { recording_.store(on, std::memory_order_relaxed); }
  bool recording() const { return recording_.load(std::memory_order_relaxed); }

  // Sorted copy of the recorded points: a canonical multiset view.
  std::vector<std::uint64_t> recorded_sorted() const;

 private:
  std::atomic<std::uint64_t> count_{0};
  std::atomic<bool> recording_{false};
  mutable std::mutex mu_;
  std::vector<std::uint64_t> points_;
};

// Query access to a function f: F_2^n -> R. Immutable once built; safe to
// share across threads. Backed either by a dense value table (O(1) per
// point) or by a sparse spectrum evaluated on demand (O(support) per point).
class FunctionOracle {
 public:
  static FunctionOracle dense(SpectralTable values);
  static FunctionOracle sparse(SparseSpectrum spectrum);

  int n() const { return n_; }
  bool is_dense() const {
    return std::holds_alternative<SpectralTable>(repr_);
  }
  const SpectralTable* dense_table() const {
    return std::get_if<SpectralTable>(&repr_);
  }
  const SparseSpectrum* sparse_spectrum() const {
    return std::get_if<SparseSpectrum>(&repr_);
  }

  // Offline value access. Does not touch any ledger; estimators must go
  // through evaluate_batch instead.
  double value(std::uint64_t x_bits) const;
  double value(CubePoint x) const;

  void value_many(std::span<const std::uint64_t> pts,
                  std::span<double> out) const;

  // Same function rebuilt on a dense table (inverse transform of a sparse
  // backing). Requires n <= kMaxDenseDim.
  FunctionOracle densified() const;

 private:
  FunctionOracle(int n, std::variant<SpectralTable, SparseSpectrum> repr)
      : n_(n), repr_(std::move(repr)) {}

  int n_;
  std::variant<SpectralTable, SparseSpectrum> repr_;
};

// Query-counted batch evaluation: values in input order, ledger charged
// |points|. All points must carry the oracle's dimension.
std::vector<double> evaluate_batch(const FunctionOracle& f, QueryLedger& ledger,
                                   std::span<const CubePoint> points);

// Raw-index overload used on hot paths; out.size() must equal points.size().
void evaluate_batch(const FunctionOracle& f, QueryLedger& ledger,
                    std::span<const std::uint64_t> points,
                    std::span<double> out);

// Mean of f^2 over the cube: dense via the value table, sparse via the sum
// of squared coefficients. Ground truth; charges no ledger.
double squared_norm_exact(const FunctionOracle& f);

// Mean of f(x)^2 over m uniform points; charges m queries.
double estimate_squared_norm(const FunctionOracle& f, QueryLedger& ledger,
                             long m, Rng& rng);

// Rescale so the squared norm is 1. Throws on the zero function.
SparseSpectrum normalize_to_unit(SparseSpectrum s);
SpectralTable normalize_to_unit(SpectralTable t);

}  // namespace ffst
