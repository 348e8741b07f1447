#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "ffst/rng.hpp"

namespace ffst {

// Dimension limits. Dense 2^n tables are capped well below the purely
// bitwise operations, which only need the bits to fit in a word.
inline constexpr int kMaxAlgebraicDim = 62;
inline constexpr int kMaxDenseDim = 30;

// Point of F_2^n; doubles as a frequency label. Coordinate i is bit i.
struct CubePoint {
  std::uint64_t bits = 0;
  int n = 0;
};

// d x n bit matrix over GF(2); row i is the mask rows[i].
struct Gf2Matrix {
  int n = 0;
  std::vector<std::uint64_t> rows;

  int d() const { return static_cast<int>(rows.size()); }
};

// Dense table of 2^n reals: values[x] = f(x), or values[alpha] = coefficient
// of the character at alpha after a forward transform.
struct SpectralTable {
  int n = 0;
  std::vector<double> values;
};

SpectralTable make_table(int n);

// popcount(a & b) mod 2. Throws on dimension mismatch.
int parity_dot(CubePoint a, CubePoint b);

// The character at alpha evaluated at x: +1 if parity_dot is 0, else -1.
int chi(CubePoint alpha, CubePoint x);

// Unchecked single-word parity; hot-path building block.
inline int parity64(std::uint64_t w) { return std::popcount(w) & 1; }
inline double sign_of_parity(std::uint64_t w) {
  return parity64(w) ? -1.0 : 1.0;
}

// In-place unscaled Walsh-Hadamard butterfly; data.size() must be a power
// of two. O(m log m) additions in a fixed order.
void wht_butterfly(std::span<double> data);

// Forward transform under the expectation convention: output[alpha] is the
// average of f(x) * chi_alpha(x) over the cube (butterfly scaled by 2^-n).
SpectralTable wht_forward(const SpectralTable& f);

// Inverse transform (unscaled butterfly): wht_inverse(wht_forward(t)) == t
// up to floating round-off.
SpectralTable wht_inverse(const SpectralTable& coeffs);

// t -> sum_c (-1)^{c.t} sums[c]; the same unscaled butterfly applied to a
// 2^d array of per-pattern sums.
std::vector<double> signed_combine(std::vector<double> sums);

// GF(2) row-reduction rank.
int gf2_rank(const Gf2Matrix& m);

// Uniform over rank-d d x n matrices: whole-matrix rejection (draw all rows
// uniformly, retry until the rank is d). Throws if d > n or n exceeds the
// algebraic limit.
Gf2Matrix sample_full_rank_matrix(int d, int n, Rng& rng);

}  // namespace ffst
