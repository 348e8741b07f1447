#include "ffst/exact.hpp"

#include <algorithm>
#include <stdexcept>

namespace ffst {

namespace {

void rank_entries(std::vector<RankedEntry>& entries) {
  std::sort(entries.begin(), entries.end(),
            [](const RankedEntry& a, const RankedEntry& b) {
              if (a.energy != b.energy) return a.energy > b.energy;
              return a.alpha < b.alpha;
            });
}

}  // namespace

RankedSpectrum exact_spectrum(const SpectralTable& values) {
  if (values.n > kMaxExactDim) {
    throw std::invalid_argument("exact_spectrum: n too large");
  }
  const SpectralTable coeffs = wht_forward(values);
  RankedSpectrum out;
  out.n = values.n;
  out.entries.resize(coeffs.values.size());
  for (std::size_t a = 0; a < coeffs.values.size(); ++a) {
    const double c = coeffs.values[a];
    out.entries[a] = RankedEntry{a, c, c * c};
  }
  rank_entries(out.entries);
  return out;
}

RankedSpectrum exact_spectrum(const FunctionOracle& f) {
  if (const auto* t = f.dense_table()) {
    return exact_spectrum(*t);
  }
  const auto& s = *f.sparse_spectrum();
  RankedSpectrum out;
  out.n = s.n;
  out.entries.reserve(s.coeffs.size());
  for (const auto& e : s.coeffs) {
    out.entries.push_back(RankedEntry{e.alpha, e.value, e.value * e.value});
  }
  rank_entries(out.entries);
  return out;
}

double total_energy(const RankedSpectrum& ranked) {
  double sum = 0.0;
  for (const auto& e : ranked.entries) sum += e.energy;
  return sum;
}

double exact_top_s_energy(const RankedSpectrum& ranked, long s) {
  if (s < 0) throw std::invalid_argument("exact_top_s_energy: s >= 0");
  const std::size_t take =
      std::min<std::size_t>(static_cast<std::size_t>(s), ranked.entries.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < take; ++i) sum += ranked.entries[i].energy;
  return sum;
}

double exact_distance_to_sparsity(const SpectralTable& values, long s) {
  const RankedSpectrum ranked = exact_spectrum(values);
  const double norm_sq = total_energy(ranked);
  const double dist = norm_sq - exact_top_s_energy(ranked, s);
  return std::clamp(dist, 0.0, norm_sq);
}

double exact_distance_to_sparsity(const FunctionOracle& f, long s) {
  const RankedSpectrum ranked = exact_spectrum(f);
  const double norm_sq = squared_norm_exact(f);
  const double dist = norm_sq - exact_top_s_energy(ranked, s);
  return std::clamp(dist, 0.0, norm_sq);
}

double exact_hashing_error(const RankedSpectrum& ranked, const CosetHash& hash,
                           long s) {
  if (ranked.n != hash.n()) {
    throw std::invalid_argument("exact_hashing_error: dimension mismatch");
  }
  if (s < 0) throw std::invalid_argument("exact_hashing_error: s >= 0");
  std::vector<double> bucket(hash.bucket_count(), 0.0);
  for (const auto& e : ranked.entries) {
    bucket[hash.bucket_of(e.alpha)] += e.energy;
  }
  std::sort(bucket.begin(), bucket.end(), std::greater<double>());
  const std::size_t take =
      std::min<std::size_t>(static_cast<std::size_t>(s), bucket.size());
  double top_buckets = 0.0;
  for (std::size_t i = 0; i < take; ++i) top_buckets += bucket[i];
  const double err = top_buckets - exact_top_s_energy(ranked, s);
  return std::max(err, 0.0);
}

}  // namespace ffst
