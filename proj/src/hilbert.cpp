#include "trapcool/hilbert.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "trapcool/errors.hpp"

namespace trapcool {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config: return "ConfigError";
    case ErrorKind::dimension_mismatch: return "DimensionMismatch";
    case ErrorKind::tail_too_heavy: return "TailTooHeavy";
    case ErrorKind::invalid_feedback_phase: return "InvalidFeedbackPhase";
    case ErrorKind::not_unique: return "NotUnique";
    case ErrorKind::unstable: return "Unstable";
    case ErrorKind::step_too_large: return "StepTooLarge";
    case ErrorKind::grid_mismatch: return "GridMismatch";
    case ErrorKind::non_positive_covariance: return "NonPositiveCovariance";
    case ErrorKind::unsweepable_key: return "UnsweepableKey";
  }
  return "Error";
}

DenseOperator::DenseOperator(CMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) {
    throw Error(ErrorKind::dimension_mismatch, "operator matrix must be square");
  }
}

DenseOperator DenseOperator::identity(int dim) {
  return DenseOperator(CMatrix::Identity(dim, dim));
}

DenseOperator DenseOperator::zero(int dim) { return DenseOperator(CMatrix::Zero(dim, dim)); }

double DenseOperator::max_abs() const {
  return m_.size() == 0 ? 0.0 : m_.cwiseAbs().maxCoeff();
}

bool DenseOperator::is_hermitian(double tol) const {
  const double scale = max_abs();
  if (scale == 0.0) return true;
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

DenseOperator& DenseOperator::operator+=(const DenseOperator& o) {
  if (dim() != o.dim()) throw Error(ErrorKind::dimension_mismatch, "operator sum");
  m_ += o.m_;
  return *this;
}

DenseOperator& DenseOperator::operator-=(const DenseOperator& o) {
  if (dim() != o.dim()) throw Error(ErrorKind::dimension_mismatch, "operator difference");
  m_ -= o.m_;
  return *this;
}

DenseOperator& DenseOperator::operator*=(cplx s) {
  m_ *= s;
  return *this;
}

DenseOperator operator*(const DenseOperator& a, const DenseOperator& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::dimension_mismatch, "operator product");
  return DenseOperator(a.m_ * b.m_);
}

DenseOperator commutator(const DenseOperator& a, const DenseOperator& b) {
  return a * b - b * a;
}

void FockBasisSpec::validate() const {
  if (n_trunc < 1) {
    throw Error(ErrorKind::config, "n_trunc must be >= 1 (got " + std::to_string(n_trunc) + ")");
  }
  if (!(tail_tolerance > 0.0 && tail_tolerance < 1.0)) {
    throw Error(ErrorKind::config, "tail_tolerance must lie in (0, 1)");
  }
}

DenseOperator annihilation(const FockBasisSpec& spec) {
  spec.validate();
  CMatrix a = CMatrix::Zero(spec.dim(), spec.dim());
  for (int n = 1; n <= spec.n_trunc; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return DenseOperator(std::move(a));
}

DenseOperator creation(const FockBasisSpec& spec) { return annihilation(spec).adjoint(); }

DenseOperator number(const FockBasisSpec& spec) {
  spec.validate();
  CMatrix n = CMatrix::Zero(spec.dim(), spec.dim());
  for (int k = 0; k <= spec.n_trunc; ++k) n(k, k) = static_cast<double>(k);
  return DenseOperator(std::move(n));
}

DenseOperator quadrature(const FockBasisSpec& spec, Quadrature which) {
  const DenseOperator a = annihilation(spec);
  const DenseOperator ad = a.adjoint();
  if (which == Quadrature::position) return 0.5 * (a + ad);
  return cplx(0.0, -0.5) * (a - ad);
}

TwoLevelOps two_level_ops() {
  CMatrix sm = CMatrix::Zero(2, 2);
  sm(0, 1) = 1.0;  // |−⟩⟨+|
  CMatrix sz = CMatrix::Zero(2, 2);
  sz(0, 0) = -1.0;
  sz(1, 1) = 1.0;
  DenseOperator minus(sm);
  DenseOperator plus = minus.adjoint();
  return {minus, plus, minus + plus, DenseOperator(sz)};
}

DenseOperator tensor(const DenseOperator& a, const DenseOperator& b, int max_dim) {
  const long long dim = static_cast<long long>(a.dim()) * b.dim();
  if (dim > max_dim) {
    throw Error(ErrorKind::dimension_mismatch,
                "tensor product dimension " + std::to_string(dim) + " exceeds limit " +
                    std::to_string(max_dim));
  }
  return DenseOperator(CMatrix(Eigen::kroneckerProduct(a.matrix(), b.matrix())));
}

DenseOperator thermal_state(const FockBasisSpec& spec, double nbar) {
  spec.validate();
  if (!(nbar >= 0.0)) throw Error(ErrorKind::config, "thermal occupancy must be >= 0");
  if (nbar == 0.0) return fock_state(spec, 0);
  const double q = nbar / (nbar + 1.0);
  // Untruncated weights are (1-q) q^n; the discarded tail sums to q^(n_trunc+1).
  const double tail = std::pow(q, spec.n_trunc + 1);
  if (tail > spec.tail_tolerance) {
    throw Error(ErrorKind::tail_too_heavy,
                "thermal tail " + std::to_string(tail) + " above n_trunc=" +
                    std::to_string(spec.n_trunc) + " exceeds tolerance " +
                    std::to_string(spec.tail_tolerance));
  }
  CMatrix rho = CMatrix::Zero(spec.dim(), spec.dim());
  double w = 1.0;
  double sum = 0.0;
  for (int n = 0; n <= spec.n_trunc; ++n) {
    rho(n, n) = w;
    sum += w;
    w *= q;
  }
  rho /= sum;
  return DenseOperator(std::move(rho));
}

DenseOperator fock_state(const FockBasisSpec& spec, int n) {
  spec.validate();
  if (n < 0 || n > spec.n_trunc) throw Error(ErrorKind::dimension_mismatch, "Fock level out of range");
  CMatrix rho = CMatrix::Zero(spec.dim(), spec.dim());
  rho(n, n) = 1.0;
  return DenseOperator(std::move(rho));
}

cplx expectation(const DenseOperator& rho, const DenseOperator& a) {
  if (rho.dim() != a.dim()) {
    throw Error(ErrorKind::dimension_mismatch,
                "expectation: state dim " + std::to_string(rho.dim()) + " vs operator dim " +
                    std::to_string(a.dim()));
  }
  // Tr(ρA) = Σ_ij ρ_ij A_ji without forming the product.
  return (rho.matrix().array() * a.matrix().transpose().array()).sum();
}

DenseOperator partial_trace_meter(const DenseOperator& joint, int vib_dim, int meter_dim) {
  if (joint.dim() != vib_dim * meter_dim) {
    throw Error(ErrorKind::dimension_mismatch, "partial trace: dims do not factor");
  }
  CMatrix rho = CMatrix::Zero(vib_dim, vib_dim);
  const CMatrix& d = joint.matrix();
  for (int i = 0; i < vib_dim; ++i) {
    for (int j = 0; j < vib_dim; ++j) {
      cplx s = 0.0;
      for (int m = 0; m < meter_dim; ++m) s += d(i * meter_dim + m, j * meter_dim + m);
      rho(i, j) = s;
    }
  }
  return DenseOperator(std::move(rho));
}

double top_population(const DenseOperator& rho, int vib_dim, int meter_dim, int levels) {
  if (rho.dim() != vib_dim * meter_dim) {
    throw Error(ErrorKind::dimension_mismatch, "top_population: dims do not factor");
  }
  double p = 0.0;
  for (int n = std::max(0, vib_dim - levels); n < vib_dim; ++n) {
    for (int m = 0; m < meter_dim; ++m) p += rho(n * meter_dim + m, n * meter_dim + m).real();
  }
  return p;
}

namespace {
Eigen::VectorXd hermitian_eigenvalues(const DenseOperator& a) {
  const CMatrix h = 0.5 * (a.matrix() + a.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}
}  // namespace

double min_eigenvalue(const DenseOperator& rho) { return hermitian_eigenvalues(rho).minCoeff(); }

double trace_norm_hermitian(const DenseOperator& a) {
  return hermitian_eigenvalues(a).cwiseAbs().sum();
}

bool is_density_matrix(const DenseOperator& rho, double trace_tol, double eig_tol) {
  if (std::abs(rho.trace() - 1.0) > trace_tol) return false;
  if (!rho.is_hermitian(1e-10)) return false;
  return min_eigenvalue(rho) >= -eig_tol;
}

DenseOperator clip_negative(const DenseOperator& rho, double clip) {
  const CMatrix h = 0.5 * (rho.matrix() + rho.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < 0.0 && ev(i) >= -clip) ev(i) = 0.0;
  }
  CMatrix out = es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  out /= out.trace();
  return DenseOperator(std::move(out));
}

}  // namespace trapcool
