#include "ffst/coset.hpp"

#include <bit>
#include <stdexcept>

namespace ffst {

CosetHash::CosetHash(Gf2Matrix w) : w_(std::move(w)) {
  if (w_.n < 1 || w_.n > kMaxAlgebraicDim || w_.d() > w_.n) {
    throw std::invalid_argument("CosetHash: malformed basis matrix");
  }
  for (const std::uint64_t row : w_.rows) {
    if (w_.n < 64 && (row >> w_.n) != 0) {
      throw std::invalid_argument("CosetHash: row exceeds 2^n");
    }
  }
  if (gf2_rank(w_) != w_.d()) {
    throw std::invalid_argument("CosetHash: basis rows must be full rank");
  }
}

CosetHash CosetHash::sample(int d, int n, Rng& rng) {
  return CosetHash(sample_full_rank_matrix(d, n, rng));
}

BucketId CosetHash::bucket_of(CubePoint alpha) const {
  if (alpha.n != n()) {
    throw std::invalid_argument("CosetHash::bucket_of: dimension mismatch");
  }
  return bucket_of(alpha.bits);
}

std::uint64_t CosetHash::shift_vector(BucketId c) const {
  if (d() < 32 && (c >> d()) != 0) {
    throw std::invalid_argument("CosetHash::shift_vector: pattern exceeds 2^d");
  }
  std::uint64_t z = 0;
  std::uint32_t rest = c;
  while (rest) {
    const int i = std::countr_zero(rest);
    z ^= w_.rows[i];
    rest &= rest - 1;
  }
  return z;
}

std::vector<std::uint64_t> CosetHash::shift_table() const {
  if (d() > kMaxBucketBits) {
    throw std::invalid_argument("CosetHash::shift_table: d too large");
  }
  std::vector<std::uint64_t> table(bucket_count(), 0);
  // shift(c) = shift(c with lowest bit cleared) ^ row(lowest bit)
  for (std::size_t c = 1; c < table.size(); ++c) {
    table[c] = table[c & (c - 1)] ^ w_.rows[std::countr_zero(c)];
  }
  return table;
}

std::vector<BucketId> CosetHash::bucket_table() const {
  if (n() > kMaxBucketBits) {
    throw std::invalid_argument("CosetHash::bucket_table: n too large");
  }
  // Column syndromes first: bucket_of(alpha) is linear in alpha.
  std::vector<BucketId> col(static_cast<std::size_t>(n()), 0);
  for (int b = 0; b < n(); ++b) {
    col[b] = bucket_of(std::uint64_t{1} << b);
  }
  std::vector<BucketId> table(std::size_t{1} << n(), 0);
  for (std::size_t a = 1; a < table.size(); ++a) {
    table[a] = table[a & (a - 1)] ^ col[std::countr_zero(a)];
  }
  return table;
}

std::vector<double> exact_bucket_energies(const SparseSpectrum& spectrum,
                                          const CosetHash& hash) {
  if (spectrum.n != hash.n()) {
    throw std::invalid_argument("exact_bucket_energies: dimension mismatch");
  }
  if (hash.d() > kMaxBucketBits) {
    throw std::invalid_argument("exact_bucket_energies: d too large");
  }
  std::vector<double> energy(hash.bucket_count(), 0.0);
  for (const auto& e : spectrum.coeffs) {
    energy[hash.bucket_of(e.alpha)] += e.value * e.value;
  }
  return energy;
}

std::vector<double> exact_bucket_energies(const SpectralTable& coeffs,
                                          const CosetHash& hash) {
  if (coeffs.n != hash.n()) {
    throw std::invalid_argument("exact_bucket_energies: dimension mismatch");
  }
  const auto buckets = hash.bucket_table();
  std::vector<double> energy(hash.bucket_count(), 0.0);
  for (std::size_t a = 0; a < coeffs.values.size(); ++a) {
    const double c = coeffs.values[a];
    energy[buckets[a]] += c * c;
  }
  return energy;
}

double exact_projection_eval(const FunctionOracle& f, const CosetHash& hash,
                             BucketId t, CubePoint z0) {
  if (f.n() != hash.n() || z0.n != hash.n()) {
    throw std::invalid_argument("exact_projection_eval: dimension mismatch");
  }
  if (hash.n() > 20) {
    throw std::invalid_argument("exact_projection_eval: n too large for exact evaluation");
  }
  const auto shifts = hash.shift_table();
  double sum = 0.0;
  for (std::size_t c = 0; c < shifts.size(); ++c) {
    const double v = f.value(z0.bits ^ shifts[c]);
    sum += parity64(c & t) ? -v : v;
  }
  return sum / static_cast<double>(shifts.size());
}

}  // namespace ffst
