#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "dncone/matrix.hpp"
#include "dncone/spectral.hpp"

namespace dncone {

// is_dn <=> min_eigenvalue >= -psd_tol && min_entry >= -entry_tol.
struct DnVerdict {
  bool is_dn = false;
  double min_eigenvalue = 0.0;
  double min_entry = 0.0;
  double psd_tol = 0.0;
  double entry_tol = 0.0;
};

inline constexpr double kDefaultPsdTol = 1e-10;
inline constexpr double kDefaultEntryTol = 1e-10;

DnVerdict check_dn(const SymMatrix& a, double psd_tol = kDefaultPsdTol,
                   double entry_tol = kDefaultEntryTol, const EigOptions& eig = {});

enum class SamplerStrategy { gram_nonneg, wishart_reject, dykstra_project };

std::string_view to_string(SamplerStrategy s) noexcept;
std::optional<SamplerStrategy> parse_strategy(std::string_view name) noexcept;

struct DnSamplerConfig {
  int n = 2;
  SamplerStrategy strategy = SamplerStrategy::gram_nonneg;
  std::uint64_t seed = 0;
  // Samples are normalized so that their largest eigenvalue equals scale.
  double scale = 1.0;
};

// Largest order accepted by the rejection sampler; acceptance decays
// exponentially with n.
inline constexpr int kWishartMaxOrder = 8;

// Deterministic per (cfg, draw_index). Every output passes
// check_dn(a, 1e-10, 0).
SymMatrix sample_dn(const DnSamplerConfig& cfg, std::uint64_t draw_index = 0);

// Euclidean projection onto the PSD cone (negative eigenvalues zeroed).
SymMatrix project_psd(const SymMatrix& a);

// Dykstra alternating projections onto {PSD} and {entrywise >= 0}. Input that
// is already entrywise nonnegative and PSD to tol * max(1, ||a||_max) is
// returned unchanged. Otherwise stops when
// successive iterates differ by less than tol * max(1, ||a||_max) in max norm.
// The result is entrywise nonnegative and certified PSD to 1e-8 relative.
// Throws ProjectionStall when max_iters is exhausted.
SymMatrix project_dn(const SymMatrix& a, double tol = 1e-10, int max_iters = 100000);

}  // namespace dncone
