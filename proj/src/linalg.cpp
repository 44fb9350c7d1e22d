#include "xyneg/linalg.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

extern "C" {
void dsyevd_(const char* jobz, const char* uplo, const int* n, double* a,
             const int* lda, double* w, double* work, const int* lwork,
             int* iwork, const int* liwork, int* info);
}

namespace xyneg {

namespace {

void dsyevd_inplace(Eigen::MatrixXd& a, Eigen::VectorXd& w, bool vectors) {
  const int n = static_cast<int>(a.rows());
  w.resize(n);
  if (n == 0) return;
  const char jobz = vectors ? 'V' : 'N';
  const char uplo = 'L';
  int info = 0, lwork = -1, liwork = -1;
  double wkopt = 0;
  int iwkopt = 0;
  dsyevd_(&jobz, &uplo, &n, a.data(), &n, w.data(), &wkopt, &lwork, &iwkopt,
          &liwork, &info);
  lwork = static_cast<int>(wkopt);
  liwork = iwkopt;
  std::vector<double> work(static_cast<size_t>(lwork));
  std::vector<int> iwork(static_cast<size_t>(liwork));
  dsyevd_(&jobz, &uplo, &n, a.data(), &n, w.data(), work.data(), &lwork,
          iwork.data(), &liwork, &info);
  if (info != 0)
    throw std::runtime_error("dsyevd failed, info = " + std::to_string(info));
}

struct RitzData {
  double theta = 0.0;
  double second = 0.0;
  double resid = 0.0;
  Eigen::VectorXd y;  // tridiagonal ground eigenvector
};

RitzData tridiag_ground(const std::vector<double>& alpha,
                        const std::vector<double>& beta, double b_next) {
  const int m = static_cast<int>(alpha.size());
  Eigen::VectorXd diag(m), sub(std::max(m - 1, 0));
  for (int i = 0; i < m; ++i) diag(i) = alpha[static_cast<size_t>(i)];
  for (int i = 0; i + 1 < m; ++i) sub(i) = beta[static_cast<size_t>(i)];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub);
  RitzData r;
  r.theta = es.eigenvalues()(0);
  r.second = m > 1 ? es.eigenvalues()(1) : r.theta;
  r.y = es.eigenvectors().col(0);
  r.resid = b_next * std::abs(r.y(m - 1));
  return r;
}

}  // namespace

Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("matrix not square");
  Eigen::MatrixXd work = a;
  Eigen::VectorXd w;
  dsyevd_inplace(work, w, false);
  return w;
}

void symmetric_eigen(const Eigen::MatrixXd& a, Eigen::VectorXd& values,
                     Eigen::MatrixXd& vectors) {
  if (a.rows() != a.cols()) throw std::invalid_argument("matrix not square");
  vectors = a;
  dsyevd_inplace(vectors, values, true);
}

Eigen::VectorXd deterministic_unit_vector(Eigen::Index dim, std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = dist(gen);
  const double nrm = v.norm();
  if (nrm == 0.0) throw std::runtime_error("degenerate start vector");
  return v / nrm;
}

LanczosResult lanczos_ground(const MatVec& apply, Eigen::Index dim,
                             const LanczosOptions& opt,
                             const Eigen::VectorXd* start) {
  if (dim < 1) throw std::invalid_argument("empty operator");

  LanczosResult res;
  Eigen::VectorXd v0;
  if (start && start->norm() > 1e-14)
    v0 = start->normalized();
  else
    v0 = deterministic_unit_vector(dim, opt.seed);

  const int m_max = static_cast<int>(std::min<Eigen::Index>(opt.max_basis, dim));
  std::vector<Eigen::VectorXd> basis;
  basis.reserve(static_cast<size_t>(m_max));
  Eigen::VectorXd w(dim);

  auto finish = [&](const RitzData& r, bool converged) {
    const int m = static_cast<int>(r.y.size());
    Eigen::VectorXd ritz = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < m; ++i)
      ritz.noalias() += r.y(i) * basis[static_cast<size_t>(i)];
    ritz.normalize();
    res.eigenvalue = r.theta;
    res.second = r.second;
    res.eigenvector = ritz;
    res.residual = r.resid;
    res.converged = converged;
    return ritz;
  };

  double prev_cycle_resid = std::numeric_limits<double>::infinity();
  int stalled_cycles = 0;

  for (int restart = 0; restart <= opt.max_restarts; ++restart) {
    basis.clear();
    basis.push_back(v0);
    std::vector<double> alpha, beta;

    for (int k = 0; k < m_max; ++k) {
      apply(basis[static_cast<size_t>(k)], w);
      ++res.matvecs;
      alpha.push_back(basis[static_cast<size_t>(k)].dot(w));

      // full reorthogonalization, two passes
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& q : basis) w.noalias() -= q.dot(w) * q;
      const double b = w.norm();

      const int m = static_cast<int>(alpha.size());
      const bool breakdown =
          b <= 1e-14 * std::max(1.0, std::abs(alpha.back()));
      const bool last = (k == m_max - 1) || breakdown ||
                        static_cast<Eigen::Index>(m) == dim;
      const bool check = last || m <= 48 || m % 4 == 0;
      if (check) {
        const RitzData r = tridiag_ground(alpha, beta, b);
        const double goal = std::max(
            opt.residual_tol,
            opt.rel_residual_tol * std::max(1.0, std::abs(r.theta)));

        if (r.resid <= goal || breakdown ||
            static_cast<Eigen::Index>(m) == dim) {
          finish(r, true);
          return res;
        }
        if (last) {
          // roundoff floor: the residual stopped improving across cycles
          stalled_cycles = r.resid >= 0.9 * prev_cycle_resid ? stalled_cycles + 1 : 0;
          prev_cycle_resid = r.resid;
          v0 = finish(r, false);
          if (stalled_cycles >= 3) {
            res.converged = r.resid <= 1e3 * goal;
            return res;
          }
          break;  // restart from the Ritz vector
        }
      }
      beta.push_back(b);
      basis.push_back(w / b);
    }
  }
  return res;  // restarts exhausted; res.converged == false
}

}  // namespace xyneg
