#pragma once

// Truncated Fock-space operator algebra. Tensor products are always ordered
// vibration first, meter second.

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace trapcool {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

/// Square complex matrix on a (possibly bipartite) truncated Hilbert space.
class DenseOperator {
 public:
  DenseOperator() = default;
  explicit DenseOperator(CMatrix m);

  static DenseOperator identity(int dim);
  static DenseOperator zero(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }
  cplx operator()(int r, int c) const { return m_(r, c); }

  DenseOperator adjoint() const { return DenseOperator(m_.adjoint()); }
  cplx trace() const { return m_.trace(); }

  /// max|A - A†| <= tol * max|A| (an all-zero matrix counts as Hermitian).
  bool is_hermitian(double tol = 1e-12) const;
  double max_abs() const;

  DenseOperator& operator+=(const DenseOperator& o);
  DenseOperator& operator-=(const DenseOperator& o);
  DenseOperator& operator*=(cplx s);

  friend DenseOperator operator+(DenseOperator a, const DenseOperator& b) { return a += b; }
  friend DenseOperator operator-(DenseOperator a, const DenseOperator& b) { return a -= b; }
  friend DenseOperator operator*(const DenseOperator& a, const DenseOperator& b);
  friend DenseOperator operator*(cplx s, DenseOperator a) { return a *= s; }
  friend DenseOperator operator*(DenseOperator a, cplx s) { return a *= s; }

 private:
  CMatrix m_;
};

DenseOperator commutator(const DenseOperator& a, const DenseOperator& b);

struct FockBasisSpec {
  int n_trunc = 30;  // highest retained Fock level
  double tail_tolerance = 1e-8;

  int dim() const { return n_trunc + 1; }
  void validate() const;
};

enum class Quadrature { position, momentum };

DenseOperator annihilation(const FockBasisSpec& spec);
DenseOperator creation(const FockBasisSpec& spec);
DenseOperator number(const FockBasisSpec& spec);

/// X = (a + a†)/2 or P = (a - a†)/2i.
DenseOperator quadrature(const FockBasisSpec& spec, Quadrature which);

/// Two-level operators in the basis {|−⟩, |+⟩} (index 0 is the ground state).
struct TwoLevelOps {
  DenseOperator sigma_minus;
  DenseOperator sigma_plus;
  DenseOperator sigma_x;
  DenseOperator sigma_z;
};
TwoLevelOps two_level_ops();

inline constexpr int kMaxTensorDim = 4096;

/// Kronecker product A⊗B; throws dimension_mismatch above `max_dim`.
DenseOperator tensor(const DenseOperator& a, const DenseOperator& b,
                     int max_dim = kMaxTensorDim);

/// Thermal state truncated to the spec; throws tail_too_heavy when the
/// population above n_trunc exceeds the tail tolerance.
DenseOperator thermal_state(const FockBasisSpec& spec, double nbar);

/// Pure Fock state |n⟩⟨n|.
DenseOperator fock_state(const FockBasisSpec& spec, int n);

/// Tr(ρ A).
cplx expectation(const DenseOperator& rho, const DenseOperator& a);

/// Reduced state of the first (vibrational) factor.
DenseOperator partial_trace_meter(const DenseOperator& joint, int vib_dim, int meter_dim);

/// Population of the top `levels` Fock levels of the vibrational factor.
double top_population(const DenseOperator& rho, int vib_dim, int meter_dim = 1, int levels = 2);

/// Smallest eigenvalue of the Hermitian part.
double min_eigenvalue(const DenseOperator& rho);

/// Σ|λ_i| of the Hermitian part.
double trace_norm_hermitian(const DenseOperator& a);

/// Checks trace, Hermiticity and positivity at the given tolerances.
bool is_density_matrix(const DenseOperator& rho, double trace_tol = 1e-9,
                       double eig_tol = 1e-9);

/// Clips eigenvalues in [-clip, 0) to zero and renormalizes. Used only when a
/// state leaves the integrator.
DenseOperator clip_negative(const DenseOperator& rho, double clip = 1e-6);

}  // namespace trapcool
