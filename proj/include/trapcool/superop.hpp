#pragma once

// Liouvillians acting on column-vectorized density matrices:
// vec(A ρ B) = (Bᵀ ⊗ A) vec(ρ).

#include <Eigen/Sparse>

#include "trapcool/hilbert.hpp"

namespace trapcool {

using SparseCMatrix = Eigen::SparseMatrix<cplx, Eigen::ColMajor>;

/// Factor dimensions of the space a Superoperator acts on (meter_dim = 1 for
/// the reduced vibrational model).
struct SpaceLayout {
  int vib_dim = 1;
  int meter_dim = 1;
  int dim() const { return vib_dim * meter_dim; }
};

class Superoperator {
 public:
  Superoperator() = default;
  Superoperator(SpaceLayout layout, SparseCMatrix matrix);

  static Superoperator zero(SpaceLayout layout);

  int dim() const { return layout_.dim(); }
  const SpaceLayout& layout() const { return layout_; }
  const SparseCMatrix& matrix() const { return m_; }

  DenseOperator apply(const DenseOperator& rho) const;

  /// ‖vec(I)ᵀ L‖∞ / ‖L‖∞: zero for trace-preserving generators.
  double trace_defect() const;

  /// max |L(ρ†) - L(ρ)†| over `samples` random Hermitian ρ, relative to ‖L‖.
  double hermiticity_defect(int samples, unsigned seed) const;

  /// Maximum absolute column sum, an upper bound on the spectral radius.
  double norm1() const;
  double max_abs() const;

  Superoperator& operator+=(const Superoperator& o);
  Superoperator& operator*=(cplx s);
  friend Superoperator operator+(Superoperator a, const Superoperator& b) { return a += b; }
  friend Superoperator operator*(cplx s, Superoperator a) { return a *= s; }
  /// Composition (a ∘ b).
  friend Superoperator operator*(const Superoperator& a, const Superoperator& b);

 private:
  SpaceLayout layout_;
  SparseCMatrix m_;
};

/// ρ ↦ A ρ
Superoperator spre(const DenseOperator& a, SpaceLayout layout);
/// ρ ↦ ρ B
Superoperator spost(const DenseOperator& b, SpaceLayout layout);
/// ρ ↦ A ρ B
Superoperator sandwich(const DenseOperator& a, const DenseOperator& b, SpaceLayout layout);
/// ρ ↦ -i[H, ρ]
Superoperator hamiltonian_super(const DenseOperator& h, SpaceLayout layout);
/// ρ ↦ [A, ρ]
Superoperator commutator_super(const DenseOperator& a, SpaceLayout layout);
/// ρ ↦ LρL† - ½{L†L, ρ}
Superoperator lindblad_dissipator(const DenseOperator& l, SpaceLayout layout);

/// Column-major vectorization helpers.
Eigen::VectorXcd vectorize(const DenseOperator& rho);
DenseOperator unvectorize(const Eigen::VectorXcd& v, int dim);

}  // namespace trapcool
