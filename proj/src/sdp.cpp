#include "irs/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

namespace irs {

const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::Optimal: return "Optimal";
    case SdpStatus::Infeasible: return "Infeasible";
    case SdpStatus::NumericalFailure: return "NumericalFailure";
  }
  return "NumericalFailure";
}

template <typename Scalar>
int SdpProblem<Scalar>::add_block(Index dim) {
  if (dim < 1) throw Error(ErrorCode::InvalidInput, "SdpProblem: block dimension must be >= 1");
  dims_.push_back(dim);
  c_.push_back(Matrix::Zero(dim, dim));
  return int(dims_.size()) - 1;
}

template <typename Scalar>
void SdpProblem<Scalar>::set_objective(int block, const Matrix& c) {
  if (block < 0 || block >= int(dims_.size())) throw Error(ErrorCode::InvalidInput, "SdpProblem: bad block");
  if (c.rows() != dims_[block] || c.cols() != dims_[block]) {
    throw Error(ErrorCode::InvalidInput, "SdpProblem: objective dimension mismatch");
  }
  c_[block] = (c + c.adjoint()) * 0.5;
}

template <typename Scalar>
void SdpProblem<Scalar>::add_constraint(std::vector<Term> terms, Relation rel, double rhs) {
  for (const auto& t : terms) {
    if (t.block < 0 || t.block >= int(dims_.size())) throw Error(ErrorCode::InvalidInput, "SdpProblem: bad block");
    if (t.a.rows() != dims_[t.block] || t.a.cols() != dims_[t.block]) {
      throw Error(ErrorCode::InvalidInput, "SdpProblem: constraint dimension mismatch");
    }
  }
  if (!std::isfinite(rhs)) throw Error(ErrorCode::InvalidInput, "SdpProblem: non-finite rhs");
  cons_.push_back({std::move(terms), rel, rhs});
}

template <typename Scalar>
typename SdpProblem<Scalar>::Term SdpProblem<Scalar>::dense_term(int block, const Matrix& a) {
  Matrix h = (a + a.adjoint()) * 0.5;
  return {block, h.sparseView(0.0, 0.0)};
}

template <typename Scalar>
typename SdpProblem<Scalar>::Term SdpProblem<Scalar>::diagonal_term(int block, Index dim, Index i, double value) {
  Sparse s(dim, dim);
  s.insert(i, i) = Scalar(value);
  s.makeCompressed();
  return {block, std::move(s)};
}

namespace {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
struct Entry {
  Index r, c;
  Scalar v;
};

// Constraint i restricted to one block.
template <typename Scalar>
struct BlockTerm {
  int con = 0;
  std::vector<Entry<Scalar>> entries;
  Mat<Scalar> dense;
  bool is_dense = false;
};

// Equality-form problem with slack blocks appended after the user blocks.
template <typename Scalar>
struct Standard {
  std::vector<Index> dims;
  std::vector<Mat<Scalar>> c;
  std::vector<std::vector<BlockTerm<Scalar>>> terms;  // per block
  Eigen::VectorXd b;
  int m = 0;
  int user_blocks = 0;
};

template <typename Scalar>
Standard<Scalar> standardize(const SdpProblem<Scalar>& p) {
  Standard<Scalar> s;
  s.dims = p.block_dims();
  s.c = p.objective();
  s.user_blocks = int(s.dims.size());
  s.m = int(p.constraints().size());
  s.b.resize(s.m);
  if (s.m == 0) throw Error(ErrorCode::InvalidInput, "solve_sdp: no constraints");

  // Merge terms per (constraint, block).
  std::vector<std::vector<std::pair<int, Eigen::SparseMatrix<Scalar>>>> per_con(s.m);
  for (int i = 0; i < s.m; ++i) {
    const auto& con = p.constraints()[i];
    s.b(i) = con.rhs;
    for (const auto& t : con.terms) {
      auto it = std::find_if(per_con[i].begin(), per_con[i].end(), [&](const auto& e) { return e.first == t.block; });
      if (it == per_con[i].end()) {
        per_con[i].emplace_back(t.block, t.a);
      } else {
        it->second = it->second + t.a;
      }
    }
    if (con.rel != Relation::Equal) {
      s.dims.push_back(1);
      s.c.push_back(Mat<Scalar>::Zero(1, 1));
      Eigen::SparseMatrix<Scalar> one(1, 1);
      one.insert(0, 0) = Scalar(con.rel == Relation::LessEqual ? 1.0 : -1.0);
      per_con[i].emplace_back(int(s.dims.size()) - 1, std::move(one));
    }
  }

  s.terms.resize(s.dims.size());
  for (int i = 0; i < s.m; ++i) {
    for (auto& [k, a] : per_con[i]) {
      BlockTerm<Scalar> bt;
      bt.con = i;
      for (int outer = 0; outer < a.outerSize(); ++outer) {
        for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(a, outer); it; ++it) {
          if (it.value() != Scalar(0)) bt.entries.push_back({it.row(), it.col(), it.value()});
        }
      }
      if (bt.entries.empty()) continue;
      const Index n = s.dims[k];
      bt.is_dense = Index(bt.entries.size()) > n;
      if (bt.is_dense) bt.dense = Mat<Scalar>(a);
      s.terms[k].push_back(std::move(bt));
    }
  }
  return s;
}

template <typename Scalar>
double re_trace(const std::vector<Entry<Scalar>>& s, const Mat<Scalar>& x) {
  double acc = 0;
  for (const auto& e : s) acc += std::real(e.v * x(e.c, e.r));
  return acc;
}

// A(X)_i = sum_k Re tr(A_ik X_k)
template <typename Scalar>
Eigen::VectorXd apply_a(const Standard<Scalar>& s, const std::vector<Mat<Scalar>>& x) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(s.m);
  for (std::size_t k = 0; k < s.dims.size(); ++k) {
    for (const auto& t : s.terms[k]) out(t.con) += re_trace(t.entries, x[k]);
  }
  return out;
}

// A^T(y)_k = sum_i y_i A_ik
template <typename Scalar>
std::vector<Mat<Scalar>> apply_at(const Standard<Scalar>& s, const Eigen::VectorXd& y) {
  std::vector<Mat<Scalar>> out(s.dims.size());
  for (std::size_t k = 0; k < s.dims.size(); ++k) {
    out[k] = Mat<Scalar>::Zero(s.dims[k], s.dims[k]);
    for (const auto& t : s.terms[k]) {
      const double yi = y(t.con);
      if (yi == 0) continue;
      for (const auto& e : t.entries) out[k](e.r, e.c) += yi * e.v;
    }
  }
  return out;
}

template <typename Scalar>
Mat<Scalar> herm(const Mat<Scalar>& a) {
  return (a + a.adjoint()) * 0.5;
}

template <typename Scalar>
double inner(const Mat<Scalar>& a, const Mat<Scalar>& b) {
  return std::real((a.conjugate().cwiseProduct(b)).sum());
}

// Largest alpha with X + alpha dX PSD (infinity when dX is PSD).
template <typename Scalar>
double max_step(const Mat<Scalar>& x, const Mat<Scalar>& dx) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (x.rows() == 1) {
    const double d = std::real(dx(0, 0));
    return d < 0 ? -std::real(x(0, 0)) / d : inf;
  }
  Eigen::LLT<Mat<Scalar>> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  const auto l = llt.matrixL();
  Mat<Scalar> t = l.solve(dx);
  Mat<Scalar> sm = l.solve(Mat<Scalar>(t.adjoint()));
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(herm(sm), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  return lmin < 0 ? -1.0 / lmin : inf;
}

template <typename Scalar>
double min_eig(const Mat<Scalar>& a) {
  if (a.rows() == 1) return std::real(a(0, 0));
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(herm(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

// Schur complement O_ij = sum_k Re tr(A_ik X_k A_jk Zinv_k).
template <typename Scalar>
Eigen::MatrixXd schur(const Standard<Scalar>& s, const std::vector<Mat<Scalar>>& x,
                      const std::vector<Mat<Scalar>>& zinv) {
  Eigen::MatrixXd o = Eigen::MatrixXd::Zero(s.m, s.m);
  for (std::size_t k = 0; k < s.dims.size(); ++k) {
    const auto& terms = s.terms[k];
    const Index nt = Index(terms.size());
    if (nt == 0) continue;
    const auto& xk = x[k];
    const auto& zk = zinv[k];
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(nt, nt);
    for (Index j = 0; j < nt; ++j) {
      const auto& tj = terms[j];
      if (tj.is_dense) {
        const Mat<Scalar> prod = xk * tj.dense * zk;
        for (Index i = 0; i < nt; ++i) local(i, j) = re_trace(terms[i].entries, prod);
      } else {
        for (Index i = 0; i < nt; ++i) {
          const auto& ti = terms[i];
          if (ti.is_dense) continue;
          double acc = 0;
          for (const auto& a : ti.entries) {
            for (const auto& e : tj.entries) acc += std::real(a.v * xk(a.c, e.r) * e.v * zk(e.c, a.r));
          }
          local(i, j) = acc;
        }
      }
    }
    for (Index i = 0; i < nt; ++i) {
      if (!terms[i].is_dense) continue;
      for (Index j = 0; j < nt; ++j) {
        if (!terms[j].is_dense) local(i, j) = local(j, i);
      }
    }
    for (Index i = 0; i < nt; ++i) {
      for (Index j = 0; j < nt; ++j) o(terms[i].con, terms[j].con) += local(i, j);
    }
  }
  return 0.5 * (o + o.transpose());
}

template <typename Scalar>
double frob(const std::vector<Mat<Scalar>>& v) {
  double acc = 0;
  for (const auto& m : v) acc += m.squaredNorm();
  return std::sqrt(acc);
}

}  // namespace

template <typename Scalar>
SdpSolution<Scalar> solve_sdp(const SdpProblem<Scalar>& p, const SdpOptions& opt) {
  const Standard<Scalar> s = standardize(p);
  const std::size_t nb = s.dims.size();
  const int m = s.m;

  Index n_total = 0;
  for (auto d : s.dims) n_total += d;

  // Initial point: scaled identities.
  Eigen::VectorXd norm_a = Eigen::VectorXd::Zero(m);
  for (std::size_t k = 0; k < nb; ++k) {
    for (const auto& t : s.terms[k]) {
      for (const auto& e : t.entries) norm_a(t.con) += std::norm(e.v);
    }
  }
  norm_a = norm_a.cwiseSqrt();
  const double norm_c = frob(s.c);
  const double norm_b = s.b.norm();

  std::vector<Mat<Scalar>> x(nb), z(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    const double n = double(s.dims[k]);
    double xi = std::max(10.0, std::sqrt(n));
    double eta = std::max({10.0, std::sqrt(n), s.c[k].norm()});
    for (const auto& t : s.terms[k]) {
      xi = std::max(xi, n * (1.0 + std::abs(s.b(t.con))) / (1.0 + norm_a(t.con)));
      eta = std::max(eta, norm_a(t.con));
    }
    x[k] = xi * Mat<Scalar>::Identity(s.dims[k], s.dims[k]);
    z[k] = eta * Mat<Scalar>::Identity(s.dims[k], s.dims[k]);
  }
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);

  SdpSolution<Scalar> sol;
  auto finish = [&](SdpStatus st, int it, double pobj, double dobj, double pinf, double dinf) {
    sol.status = st;
    sol.iterations = it;
    sol.objective_value = pobj;
    sol.dual_value = dobj;
    sol.duality_gap = dobj - pobj;
    sol.primal_residual = pinf;
    sol.dual_residual = dinf;
    sol.y = y;
    sol.blocks.assign(x.begin(), x.begin() + s.user_blocks);
    for (auto& blk : sol.blocks) blk = herm(blk);
    return sol;
  };

  if (opt.log) {
    *opt.log << "sdp: blocks=" << nb << " constraints=" << m << " n=" << n_total << "\n";
  }

  int stalled = 0;
  for (int iter = 0;; ++iter) {
    const Eigen::VectorXd rp = s.b - apply_a(s, x);
    const auto aty = apply_at(s, y);
    std::vector<Mat<Scalar>> rd(nb);
    for (std::size_t k = 0; k < nb; ++k) rd[k] = aty[k] - z[k] - s.c[k];

    double pobj = 0, xz = 0;
    for (std::size_t k = 0; k < nb; ++k) {
      pobj += inner(s.c[k], x[k]);
      xz += inner(x[k], z[k]);
    }
    const double dobj = s.b.dot(y);
    const double mu = xz / double(n_total);
    const double pinf = rp.norm() / (1.0 + norm_b);
    const double dinf = frob(rd) / (1.0 + norm_c);
    const double scale = 1.0 + std::abs(pobj);

    if (opt.log) {
      *opt.log << std::setw(4) << iter << std::scientific << std::setprecision(6) << "  pobj " << pobj << "  dobj "
               << dobj << "  pinf " << pinf << "  dinf " << dinf << "  mu " << mu << std::defaultfloat << "\n";
    }

    if (pinf <= opt.tol && dinf <= opt.tol && std::abs(dobj - pobj) <= opt.tol * scale && xz <= opt.tol * scale) {
      return finish(SdpStatus::Optimal, iter, pobj, dobj, pinf, dinf);
    }

    // Primal infeasibility: y/||y|| approaches a ray with b^T y < 0, A^T y PSD.
    const double ynorm = y.norm();
    if (ynorm > 1e8 * (1.0 + norm_c) && dobj < 0) {
      const Eigen::VectorXd ray = y / ynorm;
      const auto at_ray = apply_at(s, ray);
      const double at_norm = std::max(1.0, frob(at_ray));
      bool psd = true;
      for (std::size_t k = 0; k < nb && psd; ++k) psd = min_eig(at_ray[k]) >= -1e-7 * at_norm;
      if (psd && s.b.dot(ray) < -1e-8 * at_norm) {
        return finish(SdpStatus::Infeasible, iter, pobj, dobj, pinf, dinf);
      }
    }

    if (iter >= opt.max_iters || stalled >= 5 || !std::isfinite(pobj) || !std::isfinite(dobj)) {
      return finish(SdpStatus::NumericalFailure, iter, pobj, dobj, pinf, dinf);
    }

    std::vector<Mat<Scalar>> zinv(nb);
    for (std::size_t k = 0; k < nb; ++k) {
      Eigen::LLT<Mat<Scalar>> llt(z[k]);
      if (llt.info() != Eigen::Success) return finish(SdpStatus::NumericalFailure, iter, pobj, dobj, pinf, dinf);
      zinv[k] = herm(Mat<Scalar>(llt.solve(Mat<Scalar>::Identity(s.dims[k], s.dims[k]))));
    }

    Eigen::MatrixXd o = schur(s, x, zinv);
    Eigen::LLT<Eigen::MatrixXd> o_llt(o);
    Eigen::LDLT<Eigen::MatrixXd> o_ldlt;
    const bool use_llt = o_llt.info() == Eigen::Success;
    if (!use_llt) {
      o.diagonal().array() += 1e-14 * o.diagonal().cwiseAbs().maxCoeff();
      o_ldlt.compute(o);
    }
    auto solve_o = [&](const Eigen::VectorXd& r) -> Eigen::VectorXd {
      return use_llt ? Eigen::VectorXd(o_llt.solve(r)) : Eigen::VectorXd(o_ldlt.solve(r));
    };

    // X Rd Zinv is shared by predictor and corrector.
    std::vector<Mat<Scalar>> xrdz(nb);
    for (std::size_t k = 0; k < nb; ++k) xrdz[k] = x[k] * rd[k] * zinv[k];

    struct Direction {
      std::vector<Mat<Scalar>> dx, dz;
      Eigen::VectorXd dy;
    };
    // g_k = sigma mu Zinv - X - X Rd Zinv - corr_k
    auto direction = [&](double sigma_mu, const std::vector<Mat<Scalar>>* corr) {
      std::vector<Mat<Scalar>> g(nb);
      for (std::size_t k = 0; k < nb; ++k) {
        g[k] = sigma_mu * zinv[k] - x[k] - xrdz[k];
        if (corr) g[k] -= (*corr)[k];
      }
      Direction d;
      d.dy = solve_o(apply_a(s, g) - rp);
      const auto atdy = apply_at(s, d.dy);
      d.dx.resize(nb);
      d.dz.resize(nb);
      for (std::size_t k = 0; k < nb; ++k) {
        d.dz[k] = herm(Mat<Scalar>(atdy[k] + rd[k]));
        d.dx[k] = herm(Mat<Scalar>(g[k] - x[k] * atdy[k] * zinv[k]));
      }
      return d;
    };
    auto step_lengths = [&](const Direction& d) {
      double ap = std::numeric_limits<double>::infinity();
      double ad = ap;
      for (std::size_t k = 0; k < nb; ++k) {
        ap = std::min(ap, max_step(x[k], d.dx[k]));
        ad = std::min(ad, max_step(z[k], d.dz[k]));
      }
      return std::pair{ap, ad};
    };

    // Mehrotra predictor-corrector.
    const Direction pred = direction(0.0, nullptr);
    auto [ap_max, ad_max] = step_lengths(pred);
    const double ap_aff = std::min(1.0, ap_max);
    const double ad_aff = std::min(1.0, ad_max);
    double xz_aff = 0;
    for (std::size_t k = 0; k < nb; ++k) {
      xz_aff += inner(Mat<Scalar>(x[k] + ap_aff * pred.dx[k]), Mat<Scalar>(z[k] + ad_aff * pred.dz[k]));
    }
    const double mu_aff = std::max(0.0, xz_aff / double(n_total));
    double sigma = std::pow(mu > 0 ? mu_aff / mu : 0.0, 3);
    sigma = std::clamp(sigma, 0.0, 1.0);

    std::vector<Mat<Scalar>> corr(nb);
    for (std::size_t k = 0; k < nb; ++k) corr[k] = pred.dx[k] * pred.dz[k] * zinv[k];
    const Direction dir = direction(sigma * mu, &corr);
    auto [ap, ad] = step_lengths(dir);
    const double gamma = 0.9 + 0.09 * std::min(ap_aff, ad_aff);
    ap = std::min(1.0, gamma * ap);
    ad = std::min(1.0, gamma * ad);
    if (ap < 1e-12 && ad < 1e-12) {
      ++stalled;
    } else {
      stalled = 0;
    }

    for (std::size_t k = 0; k < nb; ++k) {
      x[k] = herm(Mat<Scalar>(x[k] + ap * dir.dx[k]));
      z[k] = herm(Mat<Scalar>(z[k] + ad * dir.dz[k]));
    }
    y += ad * dir.dy;
  }
}

template class SdpProblem<double>;
template class SdpProblem<cdouble>;
template SdpSolution<double> solve_sdp(const SdpProblem<double>&, const SdpOptions&);
template SdpSolution<cdouble> solve_sdp(const SdpProblem<cdouble>&, const SdpOptions&);

Eigen::MatrixXd embed_complex(const ComplexMatrix& h) {
  const Index n = h.rows();
  Eigen::MatrixXd e(2 * n, 2 * h.cols());
  e.topLeftCorner(n, h.cols()) = h.real();
  e.topRightCorner(n, h.cols()) = -h.imag();
  e.bottomLeftCorner(n, h.cols()) = h.imag();
  e.bottomRightCorner(n, h.cols()) = h.real();
  return e;
}

ComplexMatrix unembed_complex(const Eigen::MatrixXd& x) {
  const Index n = x.rows() / 2;
  const Eigen::MatrixXd re = 0.5 * (x.topLeftCorner(n, n) + x.bottomRightCorner(n, n));
  const Eigen::MatrixXd im = 0.5 * (x.bottomLeftCorner(n, n) - x.topRightCorner(n, n));
  ComplexMatrix c(n, n);
  c.real() = re;
  c.imag() = im;
  return c;
}

SdpProblem<double> embed_problem(const SdpProblem<cdouble>& p) {
  SdpProblem<double> r;
  for (std::size_t k = 0; k < p.block_dims().size(); ++k) {
    const int blk = r.add_block(2 * p.block_dims()[k]);
    r.set_objective(blk, 0.5 * embed_complex(p.objective()[k]));
  }
  for (const auto& con : p.constraints()) {
    std::vector<SdpProblem<double>::Term> terms;
    for (const auto& t : con.terms) {
      const Eigen::MatrixXd e = 0.5 * embed_complex(ComplexMatrix(t.a));
      terms.push_back({t.block, e.sparseView(0.0, 0.0)});
    }
    r.add_constraint(std::move(terms), con.rel, con.rhs);
  }
  return r;
}

SdpSolution<cdouble> solve_sdp_embedded(const SdpProblem<cdouble>& p, const SdpOptions& opt) {
  const auto real_sol = solve_sdp(embed_problem(p), opt);
  SdpSolution<cdouble> sol;
  sol.y = real_sol.y;
  sol.objective_value = real_sol.objective_value;
  sol.dual_value = real_sol.dual_value;
  sol.duality_gap = real_sol.duality_gap;
  sol.primal_residual = real_sol.primal_residual;
  sol.dual_residual = real_sol.dual_residual;
  sol.iterations = real_sol.iterations;
  sol.status = real_sol.status;
  for (const auto& b : real_sol.blocks) sol.blocks.push_back(unembed_complex(b));
  return sol;
}

}  // namespace irs
