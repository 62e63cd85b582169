#pragma once

// Dense complex linear algebra shared by the channel model and all solvers.
// Everything is templated on the real scalar so the same code can be
// evaluated in double or in long double.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <limits>

#include "irs/error.hpp"

namespace irs {

using Index = Eigen::Index;

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using cdouble = std::complex<double>;
using ComplexMatrix = CMatrix<double>;
using ComplexVector = CVector<double>;
using RealVector = RVector<double>;

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

/// Dense Hermitian matrix. The stored matrix is exactly Hermitian: the lower
/// triangle mirrors the upper one and the diagonal has zero imaginary part.
template <typename Real>
class Hermitian {
 public:
  using Matrix = CMatrix<Real>;

  Hermitian() = default;
  explicit Hermitian(Index dim) : m_(Matrix::Zero(dim, dim)) {}

  /// Mirrors the upper triangle of `a`.
  template <typename Derived>
  static Hermitian from_upper(const Eigen::MatrixBase<Derived>& a) {
    if (a.rows() != a.cols()) throw Error(ErrorCode::InvalidInput, "Hermitian: matrix not square");
    Hermitian h;
    h.m_ = a.template triangularView<Eigen::Upper>();
    h.fix();
    return h;
  }

  /// (a + a^H) / 2
  template <typename Derived>
  static Hermitian symmetrized(const Eigen::MatrixBase<Derived>& a) {
    if (a.rows() != a.cols()) throw Error(ErrorCode::InvalidInput, "Hermitian: matrix not square");
    Hermitian h;
    h.m_ = (a + a.adjoint()) * Real(0.5);
    h.fix();
    return h;
  }

  static Hermitian identity(Index dim) {
    Hermitian h;
    h.m_ = Matrix::Identity(dim, dim);
    return h;
  }

  template <typename Derived>
  static Hermitian diagonal(const Eigen::MatrixBase<Derived>& d) {
    Hermitian h(d.size());
    for (Index i = 0; i < d.size(); ++i) h.m_(i, i) = std::real(d(i));
    return h;
  }

  /// scale * x x^H
  template <typename Derived>
  static Hermitian outer(const Eigen::MatrixBase<Derived>& x, Real scale = Real(1)) {
    Hermitian h;
    h.m_ = scale * (x * x.adjoint());
    h.fix();
    return h;
  }

  Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  std::complex<Real> operator()(Index i, Index j) const { return m_(i, j); }
  Real trace() const { return std::real(m_.trace()); }
  Real norm() const { return m_.norm(); }

  Hermitian operator+(const Hermitian& o) const { return symmetrized(m_ + o.m_); }
  Hermitian operator-(const Hermitian& o) const { return symmetrized(m_ - o.m_); }
  Hermitian operator*(Real s) const {
    Hermitian h;
    h.m_ = m_ * s;
    return h;
  }

 private:
  void fix() {
    const Index n = m_.rows();
    for (Index j = 0; j < n; ++j) {
      m_(j, j) = std::real(m_(j, j));
      for (Index i = j + 1; i < n; ++i) m_(i, j) = std::conj(m_(j, i));
    }
  }

  Matrix m_;
};

using HermitianMatrix = Hermitian<double>;

template <typename Real>
struct HermEig {
  RVector<Real> values;   // ascending
  CMatrix<Real> vectors;  // columns, unit norm
};

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
template <typename Real>
HermEig<Real> herm_eig(const Hermitian<Real>& h) {
  if (!h.matrix().allFinite()) throw Error(ErrorCode::InvalidInput, "herm_eig: non-finite entry");
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(h.matrix());
  if (es.info() != Eigen::Success) throw Error(ErrorCode::NumericalFailure, "herm_eig: no convergence");
  return {es.eigenvalues(), es.eigenvectors()};
}

template <typename Real>
Real max_eigval(const Hermitian<Real>& h) {
  if (!h.matrix().allFinite()) throw Error(ErrorCode::InvalidInput, "max_eigval: non-finite entry");
  if (h.dim() == 0) throw Error(ErrorCode::InvalidInput, "max_eigval: empty matrix");
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(h.matrix(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::NumericalFailure, "max_eigval: no convergence");
  return es.eigenvalues()(h.dim() - 1);
}

/// Factor S with S S^H = X. Eigenvalues down to -1e-6 ||X|| are clipped to zero,
/// as are positive ones at round-off level (dim * eps * ||X||).
template <typename Real>
CMatrix<Real> psd_sqrt(const Hermitian<Real>& x) {
  const auto eig = herm_eig(x);
  if (x.dim() == 0) return CMatrix<Real>(0, 0);
  const Real scale = eig.values.cwiseAbs().maxCoeff();
  if (eig.values(0) < -Real(1e-6) * scale) {
    throw Error(ErrorCode::NotPSD, "psd_sqrt: eigenvalue " + std::to_string(double(eig.values(0))));
  }
  const Real floor = Real(x.dim()) * std::numeric_limits<Real>::epsilon() * scale;
  RVector<Real> root = eig.values.unaryExpr([floor](Real l) { return l > floor ? std::sqrt(l) : Real(0); });
  return eig.vectors * root.asDiagonal();
}

/// Largest eigenvalue of kappa * c c^H - b b^H, using the 2x2 Gram reduction.
/// The N-2 remaining eigenvalues are zero.
template <typename Real>
Real rank_two_max_eigval(const CVector<Real>& c, const CVector<Real>& b, Real kappa) {
  const Index n = c.size();
  if (n == 0) throw Error(ErrorCode::InvalidInput, "rank_two_max_eigval: empty vectors");
  if (n == 1) return kappa * std::norm(c(0)) - std::norm(b(0));
  // Nonzero spectrum equals that of diag(kappa, -1) * Gram([c b]), which is
  // similar to a real-spectrum 2x2 matrix.
  const Real cc = c.squaredNorm();
  const Real bb = b.squaredNorm();
  const Real cb2 = std::norm(c.dot(b));
  const Real tr = kappa * cc - bb;
  const Real det = -kappa * (cc * bb - cb2);
  const Real disc = std::sqrt(std::max(Real(0), tr * tr / 4 - det));
  const Real top = tr / 2 + disc;
  return n > 2 ? std::max(top, Real(0)) : top;
}

}  // namespace irs
