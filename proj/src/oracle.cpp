#include "ffst/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace ffst {

void validate(const SparseSpectrum& s) {
  if (s.n < 1 || s.n > kMaxAlgebraicDim) {
    throw std::invalid_argument("SparseSpectrum: dimension out of range");
  }
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(s.coeffs.size());
  for (const auto& e : s.coeffs) {
    if (s.n < 64 && (e.alpha >> s.n) != 0) {
      throw std::invalid_argument("SparseSpectrum: frequency exceeds 2^n");
    }
    if (e.value == 0.0 || !std::isfinite(e.value)) {
      throw std::invalid_argument("SparseSpectrum: coefficient must be nonzero and finite");
    }
    if (!seen.insert(e.alpha).second) {
      throw std::invalid_argument("SparseSpectrum: duplicate frequency");
    }
  }
}

std::vector<std::uint64_t> QueryLedger::recorded_sorted() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<std::uint64_t> out = points_;
  std::sort(out.begin(), out.end());
  return out;
}

FunctionOracle FunctionOracle::dense(SpectralTable values) {
  if (values.n < 1 || values.n > kMaxDenseDim ||
      values.values.size() != (std::size_t{1} << values.n)) {
    throw std::invalid_argument("FunctionOracle::dense: malformed table");
  }
  for (double v : values.values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("FunctionOracle::dense: non-finite value");
    }
  }
  const int n = values.n;
  return FunctionOracle(n, std::move(values));
}

FunctionOracle FunctionOracle::sparse(SparseSpectrum spectrum) {
  validate(spectrum);
  const int n = spectrum.n;
  return FunctionOracle(n, std::move(spectrum));
}

double FunctionOracle::value(std::uint64_t x_bits) const {
  if (const auto* t = std::get_if<SpectralTable>(&repr_)) {
    return t->values[x_bits];
  }
  const auto& s = std::get<SparseSpectrum>(repr_);
  double v = 0.0;
  for (const auto& e : s.coeffs) {
    v += parity64(e.alpha & x_bits) ? -e.value : e.value;
  }
  return v;
}

double FunctionOracle::value(CubePoint x) const {
  if (x.n != n_ || (n_ < 64 && (x.bits >> n_) != 0)) {
    throw std::invalid_argument("FunctionOracle::value: dimension mismatch");
  }
  return value(x.bits);
}

void FunctionOracle::value_many(std::span<const std::uint64_t> pts,
                                std::span<double> out) const {
  if (const auto* t = std::get_if<SpectralTable>(&repr_)) {
    const double* tbl = t->values.data();
    for (std::size_t i = 0; i < pts.size(); ++i) out[i] = tbl[pts[i]];
    return;
  }
  for (std::size_t i = 0; i < pts.size(); ++i) out[i] = value(pts[i]);
}

FunctionOracle FunctionOracle::densified() const {
  if (const auto* t = std::get_if<SpectralTable>(&repr_)) {
    return FunctionOracle::dense(*t);
  }
  if (n_ > kMaxDenseDim) {
    throw std::invalid_argument("FunctionOracle::densified: n too large");
  }
  const auto& s = std::get<SparseSpectrum>(repr_);
  SpectralTable coeffs = make_table(n_);
  for (const auto& e : s.coeffs) coeffs.values[e.alpha] = e.value;
  return FunctionOracle::dense(wht_inverse(coeffs));
}

std::vector<double> evaluate_batch(const FunctionOracle& f, QueryLedger& ledger,
                                   std::span<const CubePoint> points) {
  std::vector<std::uint64_t> raw(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].n != f.n() || (f.n() < 64 && (points[i].bits >> f.n()) != 0)) {
      throw std::invalid_argument("evaluate_batch: dimension mismatch");
    }
    raw[i] = points[i].bits;
  }
  std::vector<double> out(points.size());
  evaluate_batch(f, ledger, raw, out);
  return out;
}

void evaluate_batch(const FunctionOracle& f, QueryLedger& ledger,
                    std::span<const std::uint64_t> points,
                    std::span<double> out) {
  if (out.size() != points.size()) {
    throw std::invalid_argument("evaluate_batch: output size mismatch");
  }
  f.value_many(points, out);
  ledger.charge(points);
}

double squared_norm_exact(const FunctionOracle& f) {
  if (const auto* t = f.dense_table()) {
    double sum = 0.0;
    for (double v : t->values) sum += v * v;
    return sum / static_cast<double>(t->values.size());
  }
  const auto& s = *f.sparse_spectrum();
  double sum = 0.0;
  for (const auto& e : s.coeffs) sum += e.value * e.value;
  return sum;
}

double estimate_squared_norm(const FunctionOracle& f, QueryLedger& ledger,
                             long m, Rng& rng) {
  if (m < 1) throw std::invalid_argument("estimate_squared_norm: m >= 1");
  std::vector<std::uint64_t> pts(static_cast<std::size_t>(m));
  for (auto& p : pts) p = rng.bits(f.n());
  std::vector<double> vals(pts.size());
  evaluate_batch(f, ledger, pts, vals);
  double sum = 0.0;
  for (double v : vals) sum += v * v;
  return sum / static_cast<double>(m);
}

namespace {

double norm_or_throw(double sq) {
  if (sq <= 0.0 || !std::isfinite(sq)) {
    throw std::invalid_argument("normalize_to_unit: zero or invalid norm");
  }
  return std::sqrt(sq);
}

}  // namespace

SparseSpectrum normalize_to_unit(SparseSpectrum s) {
  validate(s);
  double sq = 0.0;
  for (const auto& e : s.coeffs) sq += e.value * e.value;
  const double scale = 1.0 / norm_or_throw(sq);
  for (auto& e : s.coeffs) e.value *= scale;
  return s;
}

SpectralTable normalize_to_unit(SpectralTable t) {
  double sq = 0.0;
  for (double v : t.values) sq += v * v;
  sq /= static_cast<double>(t.values.size());
  const double scale = 1.0 / norm_or_throw(sq);
  for (auto& v : t.values) v *= scale;
  return t;
}

}  // namespace ffst
