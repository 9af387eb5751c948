#include "trapcool/superop.hpp"

#include <algorithm>
#include <random>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "trapcool/errors.hpp"

namespace trapcool {

namespace {

SparseCMatrix to_sparse(const CMatrix& m) { return m.sparseView(0.0, 0.0); }

SparseCMatrix sparse_identity(int n) {
  SparseCMatrix id(n, n);
  id.setIdentity();
  return id;
}

void check_layout(const DenseOperator& a, SpaceLayout layout) {
  if (a.dim() != layout.dim()) {
    throw Error(ErrorKind::dimension_mismatch, "operator dim does not match superoperator layout");
  }
}

}  // namespace

Superoperator::Superoperator(SpaceLayout layout, SparseCMatrix matrix)
    : layout_(layout), m_(std::move(matrix)) {
  const Eigen::Index n = static_cast<Eigen::Index>(layout_.dim()) * layout_.dim();
  if (m_.rows() != n || m_.cols() != n) {
    throw Error(ErrorKind::dimension_mismatch, "superoperator matrix does not match layout");
  }
  m_.makeCompressed();
}

Superoperator Superoperator::zero(SpaceLayout layout) {
  const Eigen::Index n = static_cast<Eigen::Index>(layout.dim()) * layout.dim();
  return Superoperator(layout, SparseCMatrix(n, n));
}

DenseOperator Superoperator::apply(const DenseOperator& rho) const {
  if (rho.dim() != dim()) throw Error(ErrorKind::dimension_mismatch, "superoperator apply");
  return unvectorize(m_ * vectorize(rho), dim());
}

double Superoperator::trace_defect() const {
  const int d = dim();
  Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Zero(static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < d; ++i) row(i * (d + 1)) = 1.0;
  const Eigen::RowVectorXcd r = row * m_;
  const double scale = max_abs();
  if (scale == 0.0) return 0.0;
  return r.cwiseAbs().maxCoeff() / scale;
}

double Superoperator::hermiticity_defect(int samples, unsigned seed) const {
  std::mt19937 gen(seed);
  std::normal_distribution<double> nd;
  const int d = dim();
  double worst = 0.0;
  const double scale = std::max(max_abs(), 1e-300);
  for (int s = 0; s < samples; ++s) {
    CMatrix r(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) r(i, j) = cplx(nd(gen), nd(gen));
    const DenseOperator h(0.5 * (r + r.adjoint()));
    const DenseOperator out = apply(h);
    const double defect = (out.matrix() - out.matrix().adjoint()).cwiseAbs().maxCoeff();
    worst = std::max(worst, defect / (scale * std::max(h.max_abs(), 1e-300)));
  }
  return worst;
}

double Superoperator::norm1() const {
  double best = 0.0;
  for (int k = 0; k < m_.outerSize(); ++k) {
    double col = 0.0;
    for (SparseCMatrix::InnerIterator it(m_, k); it; ++it) col += std::abs(it.value());
    best = std::max(best, col);
  }
  return best;
}

double Superoperator::max_abs() const {
  double best = 0.0;
  for (int k = 0; k < m_.outerSize(); ++k)
    for (SparseCMatrix::InnerIterator it(m_, k); it; ++it) best = std::max(best, std::abs(it.value()));
  return best;
}

Superoperator& Superoperator::operator+=(const Superoperator& o) {
  if (o.dim() != dim()) throw Error(ErrorKind::dimension_mismatch, "superoperator sum");
  m_ += o.m_;
  m_.prune(cplx(0.0));
  return *this;
}

Superoperator& Superoperator::operator*=(cplx s) {
  m_ *= s;
  return *this;
}

Superoperator operator*(const Superoperator& a, const Superoperator& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::dimension_mismatch, "superoperator product");
  SparseCMatrix prod = (a.m_ * b.m_).pruned();
  return Superoperator(a.layout_, std::move(prod));
}

Superoperator spre(const DenseOperator& a, SpaceLayout layout) {
  check_layout(a, layout);
  SparseCMatrix m = Eigen::kroneckerProduct(sparse_identity(a.dim()), to_sparse(a.matrix()));
  return Superoperator(layout, std::move(m));
}

Superoperator spost(const DenseOperator& b, SpaceLayout layout) {
  check_layout(b, layout);
  SparseCMatrix m =
      Eigen::kroneckerProduct(to_sparse(b.matrix().transpose()), sparse_identity(b.dim()));
  return Superoperator(layout, std::move(m));
}

Superoperator sandwich(const DenseOperator& a, const DenseOperator& b, SpaceLayout layout) {
  check_layout(a, layout);
  check_layout(b, layout);
  SparseCMatrix m =
      Eigen::kroneckerProduct(to_sparse(b.matrix().transpose()), to_sparse(a.matrix()));
  return Superoperator(layout, std::move(m));
}

Superoperator commutator_super(const DenseOperator& a, SpaceLayout layout) {
  Superoperator s = spre(a, layout);
  s += cplx(-1.0) * spost(a, layout);
  return s;
}

Superoperator hamiltonian_super(const DenseOperator& h, SpaceLayout layout) {
  return cplx(0.0, -1.0) * commutator_super(h, layout);
}

Superoperator lindblad_dissipator(const DenseOperator& l, SpaceLayout layout) {
  const DenseOperator ld = l.adjoint();
  const DenseOperator ldl = ld * l;
  Superoperator s = sandwich(l, ld, layout);
  s += cplx(-0.5) * spre(ldl, layout);
  s += cplx(-0.5) * spost(ldl, layout);
  return s;
}

Eigen::VectorXcd vectorize(const DenseOperator& rho) {
  return Eigen::Map<const Eigen::VectorXcd>(rho.matrix().data(), rho.matrix().size());
}

DenseOperator unvectorize(const Eigen::VectorXcd& v, int dim) {
  if (v.size() != static_cast<Eigen::Index>(dim) * dim) {
    throw Error(ErrorKind::dimension_mismatch, "unvectorize: length mismatch");
  }
  return DenseOperator(Eigen::Map<const CMatrix>(v.data(), dim, dim));
}

}  // namespace trapcool
