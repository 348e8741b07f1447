#include "ffst/cube.hpp"

#include <stdexcept>
#include <string>

namespace ffst {

namespace {

void require_dim(int n, int max_dim, const char* what) {
  if (n < 1 || n > max_dim) {
    throw std::invalid_argument(std::string(what) + ": dimension n=" +
                                std::to_string(n) + " out of range [1, " +
                                std::to_string(max_dim) + "]");
  }
}

void require_pow2_table(const SpectralTable& t, const char* what) {
  require_dim(t.n, kMaxDenseDim, what);
  if (t.values.size() != (std::size_t{1} << t.n)) {
    throw std::invalid_argument(std::string(what) +
                                ": table length != 2^n");
  }
}

}  // namespace

SpectralTable make_table(int n) {
  require_dim(n, kMaxDenseDim, "make_table");
  return SpectralTable{n, std::vector<double>(std::size_t{1} << n, 0.0)};
}

int parity_dot(CubePoint a, CubePoint b) {
  if (a.n != b.n) {
    throw std::invalid_argument("parity_dot: dimension mismatch");
  }
  return parity64(a.bits & b.bits);
}

int chi(CubePoint alpha, CubePoint x) {
  return parity_dot(alpha, x) ? -1 : 1;
}

void wht_butterfly(std::span<double> data) {
  const std::size_t m = data.size();
  if (m == 0 || (m & (m - 1)) != 0) {
    throw std::invalid_argument("wht_butterfly: length must be a power of two");
  }
  for (std::size_t h = 1; h < m; h <<= 1) {
    for (std::size_t block = 0; block < m; block += 2 * h) {
      for (std::size_t i = block; i < block + h; ++i) {
        const double a = data[i];
        const double b = data[i + h];
        data[i] = a + b;
        data[i + h] = a - b;
      }
    }
  }
}

SpectralTable wht_forward(const SpectralTable& f) {
  require_pow2_table(f, "wht_forward");
  SpectralTable out = f;
  wht_butterfly(out.values);
  const double scale = 1.0 / static_cast<double>(std::size_t{1} << f.n);
  for (double& v : out.values) v *= scale;
  return out;
}

SpectralTable wht_inverse(const SpectralTable& coeffs) {
  require_pow2_table(coeffs, "wht_inverse");
  SpectralTable out = coeffs;
  wht_butterfly(out.values);
  return out;
}

std::vector<double> signed_combine(std::vector<double> sums) {
  wht_butterfly(sums);
  return sums;
}

int gf2_rank(const Gf2Matrix& m) {
  std::vector<std::uint64_t> rows = m.rows;
  int rank = 0;
  for (int col = 0; col < m.n && rank < static_cast<int>(rows.size()); ++col) {
    const std::uint64_t bit = std::uint64_t{1} << col;
    int pivot = -1;
    for (int r = rank; r < static_cast<int>(rows.size()); ++r) {
      if (rows[r] & bit) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(rows[rank], rows[pivot]);
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
      if (r != rank && (rows[r] & bit)) rows[r] ^= rows[rank];
    }
    ++rank;
  }
  return rank;
}

Gf2Matrix sample_full_rank_matrix(int d, int n, Rng& rng) {
  require_dim(n, kMaxAlgebraicDim, "sample_full_rank_matrix");
  if (d < 0 || d > n) {
    throw std::invalid_argument("sample_full_rank_matrix: need 0 <= d <= n");
  }
  Gf2Matrix m{n, std::vector<std::uint64_t>(static_cast<std::size_t>(d), 0)};
  if (d == 0) return m;
  for (;;) {
    for (auto& row : m.rows) row = rng.bits(n);
    if (gf2_rank(m) == d) return m;
  }
}

}  // namespace ffst
