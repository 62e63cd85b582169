#pragma once

// Dense primal-dual interior-point solver for block semidefinite programs
//
//   maximize    sum_k tr(C_k X_k)
//   subject to  sum_k tr(A_ik X_k)  {=, <=, >=}  b_i
//               X_k PSD
//
// over real symmetric (Scalar = double) or complex Hermitian
// (Scalar = std::complex<double>) blocks. Inequalities become equalities with
// internal 1x1 slack blocks. The dual is
//
//   minimize b^T y   subject to   sum_i y_i A_i - C = Z PSD.

#include <iosfwd>
#include <vector>

#include <Eigen/Sparse>

#include "irs/linalg.hpp"

namespace irs {

enum class Relation { Equal, LessEqual, GreaterEqual };
enum class SdpStatus { Optimal, Infeasible, NumericalFailure };

const char* to_string(SdpStatus s);

template <typename Scalar>
class SdpProblem {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Sparse = Eigen::SparseMatrix<Scalar>;

  struct Term {
    int block;
    Sparse a;  // Hermitian
  };
  struct Constraint {
    std::vector<Term> terms;
    Relation rel;
    double rhs;
  };

  /// Adds a PSD block with zero objective; returns its index.
  int add_block(Index dim);
  void set_objective(int block, const Matrix& c);
  void add_constraint(std::vector<Term> terms, Relation rel, double rhs);

  static Term dense_term(int block, const Matrix& a);
  /// Single entry (i, i) with coefficient `value`.
  static Term diagonal_term(int block, Index dim, Index i, double value = 1.0);

  const std::vector<Index>& block_dims() const { return dims_; }
  const std::vector<Matrix>& objective() const { return c_; }
  const std::vector<Constraint>& constraints() const { return cons_; }

 private:
  std::vector<Index> dims_;
  std::vector<Matrix> c_;
  std::vector<Constraint> cons_;
};

template <typename Scalar>
struct SdpSolution {
  using Matrix = typename SdpProblem<Scalar>::Matrix;

  std::vector<Matrix> blocks;  // user blocks only
  Eigen::VectorXd y;
  double objective_value = 0;  // primal, tr(C X)
  double dual_value = 0;       // b^T y
  double duality_gap = 0;      // dual_value - objective_value
  double primal_residual = 0;  // ||b - A(X)|| / (1 + ||b||)
  double dual_residual = 0;
  int iterations = 0;
  SdpStatus status = SdpStatus::NumericalFailure;
};

struct SdpOptions {
  double tol = 1e-7;
  int max_iters = 200;
  std::ostream* log = nullptr;  // per-iteration dump when set
};

template <typename Scalar>
SdpSolution<Scalar> solve_sdp(const SdpProblem<Scalar>& p, const SdpOptions& opt = {});

/// [[Re H, -Im H], [Im H, Re H]]
Eigen::MatrixXd embed_complex(const ComplexMatrix& h);

/// Inverse of embed_complex for a real matrix that may have lost the block
/// structure (averages the redundant blocks).
ComplexMatrix unembed_complex(const Eigen::MatrixXd& x);

/// Real-symmetric form of a complex Hermitian SDP with the same optimal
/// value. Objective and constraint matrices are embedded with factor 1/2 so
/// that tr(embed(A)/2 embed(X)) = tr(A X).
SdpProblem<double> embed_problem(const SdpProblem<cdouble>& p);

/// Solves a complex problem through its real embedding and maps the blocks
/// back to complex Hermitian form.
SdpSolution<cdouble> solve_sdp_embedded(const SdpProblem<cdouble>& p, const SdpOptions& opt = {});

}  // namespace irs
