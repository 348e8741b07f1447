#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ffst/oracle.hpp"

namespace ffst {

// Test fixture with a recorded ground truth. `exact_distance` is the
// distance to s-sparsity recomputed through the exact spectrum whenever the
// dimension permits a dense table, else NaN.
struct PlantedInstance {
  std::string kind;
  FunctionOracle oracle;
  SparseSpectrum truth;
  double exact_distance = 0.0;
  int n = 0;
  long s = 0;
  double rho = 0.0;
  std::uint64_t seed = 0;
};

using CoeffLaw = std::function<double(Rng&)>;

// Default coefficient law: magnitude uniform in [0.5, 1.5], random sign.
double default_coeff_law(Rng& rng);

// Unit-norm function with exactly s distinct uniform frequencies; sparse
// backing, so evaluation costs O(s) per point at any dimension.
PlantedInstance gen_sparse(int n, long s, std::uint64_t seed,
                           const CoeffLaw& law = default_coeff_law);

// Unit-norm signal-plus-noise spectrum: s planted frequencies holding total
// energy 1 - rho, each strictly heavier than any noise coefficient, and the
// remaining mass rho spread evenly (random signs) over all other
// frequencies. Dense backing; the recorded distance comes from the exact
// spectrum and lands on rho. Throws when the planted coefficients cannot
// dominate the noise floor.
PlantedInstance gen_noisy_sparse(int n, long s, double rho, std::uint64_t seed);

// Unit-norm function whose spectrum is perfectly flat: every frequency gets
// energy 2^-n with a random sign. Distance to s-sparsity is 1 - s * 2^-n by
// construction.
PlantedInstance gen_flat(int n, std::uint64_t seed);

// Dense table of iid standard normals, rescaled to unit norm.
PlantedInstance gen_dense_gaussian(int n, std::uint64_t seed);

enum class GaussianKind { Yes, No };

// Matched pair of distributions with Gaussian spectra: Yes draws a uniform
// size-s support with coefficients g/sqrt(s); No puts coefficient
// g * 2^{-n/2} on every frequency. Both have expected squared norm 1 and
// identical covariance on the diagonal.
struct GaussianSpectrumInstance {
  GaussianKind kind = GaussianKind::Yes;
  FunctionOracle oracle;
  std::vector<std::uint64_t> support;  // sorted; empty means full support
  int n = 0;
  long s = 0;
  std::uint64_t seed = 0;
};

GaussianSpectrumInstance gen_dyes(int n, long s, std::uint64_t seed);
GaussianSpectrumInstance gen_dno(int n, std::uint64_t seed);

// Covariance of the instance values at two points, over coefficient
// redraws. Yes: mean over the support of chi_z(x) chi_z(y); No: 1 when
// x == y, else 0.
double covariance_entry(GaussianKind kind,
                        std::span<const std::uint64_t> support,
                        std::uint64_t x, std::uint64_t y);

// Squared Frobenius norm of I - M, where M is the Yes-side covariance
// matrix of the values at `query_points` for support S.
double frobenius_deviation(std::span<const std::uint64_t> support,
                           std::span<const std::uint64_t> query_points);

// Accept/reject rule applied to the values of a drawn function at the
// query set, in query order.
using DecisionRule = std::function<bool(std::span<const double>)>;

DecisionRule norm_threshold_rule(double threshold);
// Requires the full query set (q == 2^n) in ascending point order; accepts
// exactly when the reconstructed spectrum has at most s entries above tol.
DecisionRule exact_sparsity_rule(int n, long s, double tol = 1e-9);

struct DistinguishOutcome {
  std::vector<std::uint64_t> query_points;
  std::vector<char> yes_accept;
  std::vector<char> no_accept;
  double advantage = 0.0;  // |Pr[accept | Yes] - Pr[accept | No]|
};

// Fixed random query set of q distinct points (all points, ascending, when
// q == 2^n), then `trials` fresh draws from each side scored by the rule.
DistinguishOutcome distinguishing_experiment(int n, long s, long q, long trials,
                                             const DecisionRule& rule,
                                             std::uint64_t seed);

}  // namespace ffst
