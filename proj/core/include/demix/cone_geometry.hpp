#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "demix/dense.hpp"
#include "demix/random_models.hpp"
#include "demix/rng.hpp"

namespace demix::cones {

/// Closed convex cone {v : A v ≤ 0} in ℝᵈ. A has zero rows for the full space.
struct PolyhedralCone {
  std::size_t dim = 0;
  DenseMatrix constraints;  ///< m × dim
  std::string label;

  [[nodiscard]] std::size_t halfspaces() const noexcept { return constraints.rows(); }
  /// max_j A_j·v ≤ tol·‖A_j‖·max(1, ‖v‖₂)
  [[nodiscard]] bool contains(const DenseVector& v, double tol = 1e-9) const;
  /// The image U·K, i.e. {w : A Uᵀ w ≤ 0}.
  [[nodiscard]] PolyhedralCone rotated(const DenseMatrix& u) const;
  /// Throws DomainError on shape mismatch or non-finite rows.
  void validate() const;

  static PolyhedralCone full_space(std::size_t d);
};

/// Spherical intrinsic volumes v₋₁ … v_{d−1} of a cone in ℝᵈ.
class IntrinsicVolumeProfile {
 public:
  IntrinsicVolumeProfile() = default;
  /// `values` holds v₋₁ … v_{d−1}, so d = values.size() − 1.
  explicit IntrinsicVolumeProfile(std::vector<double> values);

  [[nodiscard]] std::size_t dim() const noexcept { return values_.empty() ? 0 : values_.size() - 1; }
  /// vᵢ for i ∈ [−1, d−1]; zero outside that range.
  [[nodiscard]] double at(long i) const noexcept;
  [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }

  [[nodiscard]] double total() const noexcept;
  /// Σ over even i and over odd i (i counted from −1).
  [[nodiscard]] double even_sum() const noexcept;
  [[nodiscard]] double odd_sum() const noexcept;
  /// If the profile is a point mass at index n − 1 (a linear subspace of
  /// dimension n), returns n; otherwise −1.
  [[nodiscard]] long subspace_dimension(double tol = 1e-12) const noexcept;

  friend bool operator==(const IntrinsicVolumeProfile&, const IntrinsicVolumeProfile&) = default;

 private:
  std::vector<double> values_;
};

/// Descent cone of ‖·‖₁ at a point with the given support and signs.
/// One halfspace per sign vector on the complement, 2^{d−k} rows in all.
/// An empty support gives the cone {0}. Rejects d − k > 20.
[[nodiscard]] PolyhedralCone l1_descent_cone(const models::SparsityPattern& pattern);
/// {v : −v ≤ 0}
[[nodiscard]] PolyhedralCone orthant_cone(std::size_t d);
/// Descent cone of ‖·‖∞ at a sign vector m₀: {δ : m₀ᵢ δᵢ ≤ 0}.
[[nodiscard]] PolyhedralCone linf_descent_cone(const DenseVector& m0);

/// Euclidean projection onto K via the Moreau decomposition
/// Π_K(ω) = ω − Aᵀλ, λ = argmin_{λ ≥ 0} ‖Aᵀλ − ω‖.
[[nodiscard]] DenseVector project_cone(const PolyhedralCone& k, const DenseVector& omega);

/// Dimension of the face of K whose relative interior contains p.
[[nodiscard]] std::size_t face_dimension(const PolyhedralCone& k, const DenseVector& p,
                                         double tol = 1e-8);

/// Empirical distribution of face_dimension(Π_K(ω)) − 1 over standard
/// Gaussian ω. Sample j uses rng.child(j), so results do not depend on `threads`.
[[nodiscard]] IntrinsicVolumeProfile mc_intrinsic_volumes(const PolyhedralCone& k,
                                                          std::size_t samples,
                                                          const RngState& rng,
                                                          std::size_t threads = 1);

/// vᵢ = 2^{−d}·C(d, i+1).
[[nodiscard]] IntrinsicVolumeProfile exact_orthant_volumes(std::size_t d);
/// Point mass at index n − 1.
[[nodiscard]] IntrinsicVolumeProfile exact_subspace_volumes(std::size_t d, std::size_t n);

/// Probability that K ∩ QK̃ ≠ {0} for Haar Q, from the kinematic formula.
/// When both profiles are point masses (two subspaces) the formula does not
/// apply and the general-position rule is used instead.
[[nodiscard]] double kinematic_probability(const IntrinsicVolumeProfile& vk,
                                           const IntrinsicVolumeProfile& vk_tilde);
/// 1 if n1 + n2 > d, else 0.
[[nodiscard]] double subspace_intersection_probability(std::size_t d, std::size_t n1,
                                                       std::size_t n2);

/// Whether K ∩ Q K̃ contains a nonzero vector. Decided by 2d box-constrained
/// linear programs max ±vᵢ over {A_K v ≤ 0, A_K̃ Qᵀ v ≤ 0, ‖v‖∞ ≤ 1}.
[[nodiscard]] bool intersects_nontrivially(const PolyhedralCone& k, const PolyhedralCone& k_tilde,
                                           const DenseMatrix& q);

struct GaussianWidth {
  double width = 0.0;       ///< mean of ‖Π_K(ω)‖₂
  double std_error = 0.0;   ///< standard error of that mean
  double mean_square = 0.0; ///< mean of ‖Π_K(ω)‖₂², the statistical dimension
};

/// Monte Carlo estimate of E sup_{x ∈ K, ‖x‖ = 1} ⟨ω, x⟩ = E‖Π_K(ω)‖.
[[nodiscard]] GaussianWidth estimate_gaussian_width(const PolyhedralCone& k, std::size_t samples,
                                                    const RngState& rng,
                                                    std::size_t threads = 1);

}  // namespace demix::cones
