#include "xyneg/dmrg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

#include "xyneg/linalg.hpp"

namespace xyneg {

namespace {

using Eigen::Index;
using Eigen::Map;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using Eigen::VectorXi;

int site_sz(int s) { return s == 0 ? 1 : -1; }

BlockBasis single_site_block(const ModelParams& p) {
  BlockBasis b;
  b.block_len = 1;
  b.dim = 2;
  b.transform = MatrixXd::Identity(2, 2);
  b.block_h = -p.lambda * pauli_z();
  b.edge_x = pauli_x();
  b.edge_iy = pauli_iy();
  b.sz = VectorXi(2);
  b.sz << 1, -1;
  return b;
}

// (block (x) site) or (site (x) block) product-space operators
struct Enlarged {
  MatrixXd h;
  MatrixXd site_x, site_iy;  // the added site, which becomes the new edge
  VectorXi sz;
};

Enlarged enlarge_left(const BlockBasis& b, const ModelParams& p) {
  const Index m = b.dim;
  const MatrixXd im = MatrixXd::Identity(m, m);
  const Eigen::Matrix2d i2 = Eigen::Matrix2d::Identity();
  const double cx = -0.5 * (1.0 + p.gamma);
  const double cy = 0.5 * (1.0 - p.gamma);

  Enlarged e;
  e.h = Eigen::kroneckerProduct(b.block_h, i2).eval()
        + Eigen::kroneckerProduct(im, (-p.lambda * pauli_z()).eval()).eval()
        + cx * Eigen::kroneckerProduct(b.edge_x, pauli_x()).eval()
        + cy * Eigen::kroneckerProduct(b.edge_iy, pauli_iy()).eval();
  e.site_x = Eigen::kroneckerProduct(im, pauli_x());
  e.site_iy = Eigen::kroneckerProduct(im, pauli_iy());
  e.sz.resize(2 * m);
  for (Index s = 0; s < m; ++s)
    for (int sig = 0; sig < 2; ++sig)
      e.sz(2 * s + sig) = b.sz(s) + site_sz(sig);
  return e;
}

Enlarged enlarge_right(const BlockBasis& b, const ModelParams& p) {
  const Index m = b.dim;
  const MatrixXd im = MatrixXd::Identity(m, m);
  const Eigen::Matrix2d i2 = Eigen::Matrix2d::Identity();
  const double cx = -0.5 * (1.0 + p.gamma);
  const double cy = 0.5 * (1.0 - p.gamma);

  Enlarged e;
  e.h = Eigen::kroneckerProduct(i2, b.block_h).eval()
        + Eigen::kroneckerProduct((-p.lambda * pauli_z()).eval(), im).eval()
        + cx * Eigen::kroneckerProduct(pauli_x(), b.edge_x).eval()
        + cy * Eigen::kroneckerProduct(pauli_iy(), b.edge_iy).eval();
  e.site_x = Eigen::kroneckerProduct(pauli_x(), im);
  e.site_iy = Eigen::kroneckerProduct(pauli_iy(), im);
  e.sz.resize(2 * m);
  for (int sig = 0; sig < 2; ++sig)
    for (Index s = 0; s < m; ++s)
      e.sz(sig * m + s) = b.sz(s) + site_sz(sig);
  return e;
}

// H on (block, site, site, block); the free-site pair carries the two
// on-site fields and the middle bond in one 4x4
class SuperHamiltonian {
 public:
  SuperHamiltonian(const BlockBasis& l, const BlockBasis& r,
                   const ModelParams& p)
      : l_(l), r_(r), ds_(l.dim), de_(r.dim) {
    cx_ = -0.5 * (1.0 + p.gamma);
    cy_ = 0.5 * (1.0 - p.gamma);
    x_ = pauli_x();
    iy_ = pauli_iy();
    const Eigen::Matrix2d hz = -p.lambda * pauli_z();
    const Eigen::Matrix2d i2 = Eigen::Matrix2d::Identity();
    w4_ = bond_term(p) + Eigen::kroneckerProduct(hz, i2)
          + Eigen::kroneckerProduct(i2, hz);
    buf_.resize(4 * de_ * ds_);
  }

  Index dim() const { return ds_ * 4 * de_; }

  void apply(const VectorXd& v, VectorXd& out) const {
    out.resize(dim());
    Map<const MatrixXd> in4(v.data(), 4 * de_, ds_);
    Map<MatrixXd> out4(out.data(), 4 * de_, ds_);
    out4.noalias() = in4 * l_.block_h;  // block_h symmetric

    Map<const MatrixXd> in1(v.data(), de_, 4 * ds_);
    Map<MatrixXd> out1(out.data(), de_, 4 * ds_);
    out1.noalias() += r_.block_h * in1;

    // left edge -- first free site
    apply_left_pair(v, out, l_.edge_x, x_, cx_);
    apply_left_pair(v, out, l_.edge_iy, iy_, cy_);

    // free-site pair
    for (Index s = 0; s < ds_; ++s)
      out1.middleCols(4 * s, 4).noalias() +=
          in1.middleCols(4 * s, 4) * w4_.transpose();

    // second free site -- right edge
    apply_right_pair(v, out, r_.edge_x, x_, cx_);
    apply_right_pair(v, out, r_.edge_iy, iy_, cy_);
  }

 private:
  void apply_left_pair(const VectorXd& v, VectorXd& out, const MatrixXd& op_b,
                       const Eigen::Matrix2d& op_s, double coeff) const {
    Map<const MatrixXd> in4(v.data(), 4 * de_, ds_);
    Map<MatrixXd> t4(buf_.data(), 4 * de_, ds_);
    t4.noalias() = in4 * op_b.transpose();
    Map<const MatrixXd> t2(buf_.data(), 2 * de_, 2 * ds_);
    Map<MatrixXd> out2(out.data(), 2 * de_, 2 * ds_);
    for (Index s = 0; s < ds_; ++s)
      out2.middleCols(2 * s, 2).noalias() +=
          coeff * t2.middleCols(2 * s, 2) * op_s.transpose();
  }

  void apply_right_pair(const VectorXd& v, VectorXd& out, const MatrixXd& op_b,
                        const Eigen::Matrix2d& op_s, double coeff) const {
    Map<const MatrixXd> in1(v.data(), de_, 4 * ds_);
    Map<MatrixXd> t1(buf_.data(), de_, 4 * ds_);
    t1.noalias() = op_b * in1;
    Map<MatrixXd> out1(out.data(), de_, 4 * ds_);
    for (Index k = 0; k < 2 * ds_; ++k)
      out1.middleCols(2 * k, 2).noalias() +=
          coeff * t1.middleCols(2 * k, 2) * op_s.transpose();
  }

  const BlockBasis& l_;
  const BlockBasis& r_;
  Index ds_, de_;
  double cx_, cy_;
  Eigen::Matrix2d x_, iy_;
  Eigen::Matrix4d w4_;
  mutable VectorXd buf_;
};

// zero every component outside total magnetization `target`; false if nothing survives
bool mask_to_sector(VectorXd& v, const BlockBasis& l, const BlockBasis& r,
                    int target) {
  const Index ds = l.dim, de = r.dim;
  Index off = 0;
  for (Index s = 0; s < ds; ++s)
    for (int s1 = 0; s1 < 2; ++s1)
      for (int s2 = 0; s2 < 2; ++s2)
        for (Index e = 0; e < de; ++e, ++off)
          if (l.sz(s) + site_sz(s1) + site_sz(s2) + r.sz(e) != target)
            v(off) = 0.0;
  const double nrm = v.norm();
  if (nrm < 1e-12) return false;
  v /= nrm;
  return true;
}

struct Decimation {
  MatrixXd transform;
  VectorXi kept_sz;
  VectorXd spectrum;  // full weight list, descending
  double eps = 0.0;
};

// density-matrix eigenbasis, truncated to max_keep states. With
// conserve_sz the matrix is diagonalized sector by sector, which both
// discards the (numerically tiny) cross-sector elements and keeps the
// kept basis magnetization-pure. Ordering at degenerate weights follows
// the deterministic eigensolver output.
Decimation decimate(const MatrixXd& rho, const VectorXi& sz, int max_keep,
                    bool conserve_sz) {
  const Index dim = rho.rows();
  std::map<int, std::vector<Index>> sectors;
  if (conserve_sz) {
    for (Index i = 0; i < dim; ++i) sectors[sz(i)].push_back(i);
  } else {
    auto& all = sectors[0];
    all.resize(static_cast<size_t>(dim));
    for (Index i = 0; i < dim; ++i) all[static_cast<size_t>(i)] = i;
  }

  struct Entry {
    double w;
    int label;
    const std::vector<Index>* idx;
    Eigen::VectorXd vec;  // within-sector eigenvector
  };
  std::vector<Entry> entries;
  entries.reserve(static_cast<size_t>(dim));

  for (auto& [label, idx] : sectors) {
    const Index n = static_cast<Index>(idx.size());
    MatrixXd sub(n, n);
    for (Index a = 0; a < n; ++a)
      for (Index b = 0; b < n; ++b)
        sub(a, b) = rho(idx[static_cast<size_t>(a)], idx[static_cast<size_t>(b)]);
    VectorXd vals;
    MatrixXd vecs;
    symmetric_eigen(sub, vals, vecs);
    for (Index j = n - 1; j >= 0; --j)
      entries.push_back({vals(j), label, &idx, vecs.col(j)});
  }

  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.w > b.w; });

  const Index keep = std::min<Index>(max_keep, dim);
  Decimation d;
  d.spectrum.resize(dim);
  for (Index i = 0; i < dim; ++i) d.spectrum(i) = entries[static_cast<size_t>(i)].w;
  d.eps = 0.0;
  for (Index i = keep; i < dim; ++i) d.eps += std::max(0.0, d.spectrum(i));
  d.transform = MatrixXd::Zero(dim, keep);
  d.kept_sz.resize(keep);
  for (Index c = 0; c < keep; ++c) {
    const Entry& e = entries[static_cast<size_t>(c)];
    for (Index a = 0; a < static_cast<Index>(e.idx->size()); ++a)
      d.transform((*e.idx)[static_cast<size_t>(a)], c) = e.vec(a);
    d.kept_sz(c) = e.label;
  }
  return d;
}

struct BondSolve {
  VectorXd psi;
  double energy = 0.0;
};

BondSolve solve_bond(const BlockBasis& l, const BlockBasis& r,
                     const ModelParams& p, const DmrgConfig& c,
                     const VectorXd* seed) {
  SuperHamiltonian h(l, r, p);
  LanczosOptions opt;
  opt.rel_residual_tol = std::max(1e3 * c.eigensolver_tol, 1e-11);
  opt.max_basis = static_cast<int>(std::min<Index>(200, h.dim()));
  opt.max_restarts = 100;

  VectorXd start;
  const VectorXd* sp = seed;
  if (c.conserve_sz) {
    start = seed ? *seed : deterministic_unit_vector(h.dim(), opt.seed);
    if (!mask_to_sector(start, l, r, 0)) {
      start = deterministic_unit_vector(h.dim(), opt.seed);
      if (!mask_to_sector(start, l, r, 0))
        throw std::runtime_error("no basis states in the target magnetization sector");
    }
    sp = &start;
  }

  MatVec apply = [&h](const VectorXd& v, VectorXd& out) { h.apply(v, out); };
  LanczosResult res = lanczos_ground(apply, h.dim(), opt, sp);
  if (res.eigenvector.size() == 0)
    throw std::runtime_error("superblock eigensolver produced no vector");

  BondSolve out;
  out.psi = std::move(res.eigenvector);
  out.energy = res.eigenvalue;
  if (c.conserve_sz) mask_to_sector(out.psi, l, r, 0);
  return out;
}

// grow helpers: decimate the half density matrix of psi and build the
// enlarged block in the kept basis
BlockBasis grow_left(const BlockBasis& prev, const VectorXd& psi, Index ds,
                     Index de, const ModelParams& p, const DmrgConfig& c,
                     double& eps) {
  const Enlarged en = enlarge_left(prev, p);
  Map<const MatrixXd> a(psi.data(), 2 * de, 2 * ds);
  MatrixXd rho;
  rho.noalias() = a.transpose() * a;
  const Decimation d = decimate(rho, en.sz, c.max_kept_states, c.conserve_sz);
  eps = d.eps;

  BlockBasis nb;
  nb.block_len = prev.block_len + 1;
  nb.dim = d.transform.cols();
  nb.block_h.noalias() = d.transform.transpose() * en.h * d.transform;
  nb.edge_x.noalias() = d.transform.transpose() * en.site_x * d.transform;
  nb.edge_iy.noalias() = d.transform.transpose() * en.site_iy * d.transform;
  nb.transform = d.transform;
  nb.sz = d.kept_sz;
  return nb;
}

BlockBasis grow_right(const BlockBasis& prev, const VectorXd& psi, Index ds,
                      Index de, const ModelParams& p, const DmrgConfig& c,
                      double& eps) {
  const Enlarged en = enlarge_right(prev, p);
  Map<const MatrixXd> a(psi.data(), 2 * de, 2 * ds);
  MatrixXd rho;
  rho.noalias() = a * a.transpose();
  const Decimation d = decimate(rho, en.sz, c.max_kept_states, c.conserve_sz);
  eps = d.eps;

  BlockBasis nb;
  nb.block_len = prev.block_len + 1;
  nb.dim = d.transform.cols();
  nb.block_h.noalias() = d.transform.transpose() * en.h * d.transform;
  nb.edge_x.noalias() = d.transform.transpose() * en.site_x * d.transform;
  nb.edge_iy.noalias() = d.transform.transpose() * en.site_iy * d.transform;
  nb.transform = d.transform;
  nb.sz = d.kept_sz;
  return nb;
}

// two-site wavefunction carried to the next bond on the right
VectorXd predict_right(const VectorXd& psi, const BlockBasis& new_left,
                       const BlockBasis& cur_right, Index ds, Index de) {
  const MatrixXd& tl = new_left.transform;  // (2*ds) x m
  const MatrixXd& tr = cur_right.transform; // (2*d2) x de
  const Index m = tl.cols();
  const Index d2 = tr.rows() / 2;
  MatrixXd mid;
  mid.noalias() = Map<const MatrixXd>(psi.data(), 2 * de, 2 * ds) * tl;

  VectorXd out(m * 4 * d2);
  for (int s1 = 0; s1 < 2; ++s1) {
    MatrixXd pr;
    pr.noalias() = tr * mid.middleRows(s1 * de, de);  // (2*d2) x m
    for (Index s = 0; s < m; ++s)
      for (int s2 = 0; s2 < 2; ++s2)
        out.segment(d2 * (s2 + 2 * (s1 + 2 * s)), d2) =
            pr.col(s).segment(s2 * d2, d2);
  }
  const double nrm = out.norm();
  if (nrm > 1e-14) out /= nrm;
  return out;
}

// two-site wavefunction carried to the next bond on the left
VectorXd predict_left(const VectorXd& psi, const BlockBasis& cur_left,
                      const BlockBasis& new_right, Index ds, Index de) {
  const MatrixXd& tl = cur_left.transform;   // (2*d2) x ds
  const MatrixXd& tr = new_right.transform;  // (2*de) x m
  const Index m = tr.cols();
  const Index d2 = tl.rows() / 2;
  MatrixXd mid;
  mid.noalias() =
      tr.transpose() * Map<const MatrixXd>(psi.data(), 2 * de, 2 * ds);  // m x 2ds

  VectorXd out(d2 * 4 * m);
  MatrixXd g(m, ds);
  for (int s1 = 0; s1 < 2; ++s1) {  // the old first free site becomes the new second
    for (Index s = 0; s < ds; ++s) g.col(s) = mid.col(s1 + 2 * s);
    MatrixXd pr;
    pr.noalias() = g * tl.transpose();  // m x (2*d2), column (s2*2 + sa)
    for (Index s2 = 0; s2 < d2; ++s2)
      for (int sa = 0; sa < 2; ++sa)
        for (Index r = 0; r < m; ++r)
          out(r + m * (s1 + 2 * (sa + 2 * s2))) = pr(r, 2 * s2 + sa);
  }
  const double nrm = out.norm();
  if (nrm > 1e-14) out /= nrm;
  return out;
}

}  // namespace

bool BlockBasis::is_isometry(double tol) const {
  if (transform.size() == 0) return dim == 0;
  const MatrixXd g = transform.transpose() * transform
                     - MatrixXd::Identity(transform.cols(), transform.cols());
  return g.cwiseAbs().maxCoeff() <= tol;
}

void DmrgConfig::validate() const {
  if (max_kept_states < 2) throw std::invalid_argument("max_kept_states must be >= 2");
  if (n_sweeps < 1) throw std::invalid_argument("n_sweeps must be >= 1");
  if (eigensolver_tol <= 0 || target_epsilon <= 0)
    throw std::invalid_argument("tolerances must be positive");
}

DmrgChains warmup(const ModelParams& p, const DmrgConfig& c,
                  double* max_truncated_weight) {
  p.validate();
  c.validate();
  if (p.n_sites < 4 || p.n_sites % 2 != 0)
    throw std::invalid_argument("dmrg requires even n_sites >= 4");

  const int n = p.n_sites;
  DmrgChains ch;
  ch.left.resize(static_cast<size_t>(n));
  ch.right.resize(static_cast<size_t>(n));
  ch.left[1] = single_site_block(p);
  ch.right[1] = single_site_block(p);

  double max_eps = 0.0;
  for (int b = 1; 2 * b + 2 < n; ++b) {
    const BlockBasis& l = ch.left[static_cast<size_t>(b)];
    const BlockBasis& r = ch.right[static_cast<size_t>(b)];
    const BondSolve sol = solve_bond(l, r, p, c, nullptr);
    double el = 0.0, er = 0.0;
    ch.left[static_cast<size_t>(b + 1)] =
        grow_left(l, sol.psi, l.dim, r.dim, p, c, el);
    ch.right[static_cast<size_t>(b + 1)] =
        grow_right(r, sol.psi, l.dim, r.dim, p, c, er);
    max_eps = std::max({max_eps, el, er});
  }
  if (max_truncated_weight) *max_truncated_weight = max_eps;
  return ch;
}

SuperblockState sweep_to_convergence(DmrgChains& chains, const ModelParams& p,
                                     const DmrgConfig& c, SweepStats* stats) {
  p.validate();
  c.validate();
  const int n = p.n_sites;
  const int center = n / 2;
  SweepStats st;

  auto left_of = [&](int l) -> BlockBasis& {
    return chains.left[static_cast<size_t>(l - 1)];
  };
  auto right_of = [&](int l) -> BlockBasis& {
    return chains.right[static_cast<size_t>(n - l - 1)];
  };

  st.bond_truncated_weights.assign(static_cast<size_t>(n), 0.0);

  int l = center;
  BondSolve cur = solve_bond(left_of(l), right_of(l), p, c, nullptr);

  auto step_right = [&](int& pos) {
    const BlockBasis& lb = left_of(pos);
    const BlockBasis& rb = right_of(pos);
    double eps = 0.0;
    chains.left[static_cast<size_t>(pos)] =
        grow_left(lb, cur.psi, lb.dim, rb.dim, p, c, eps);
    st.max_truncated_weight = std::max(st.max_truncated_weight, eps);
    st.bond_truncated_weights[static_cast<size_t>(pos)] = eps;
    if (eps > c.target_epsilon) st.epsilon_exceeded = true;
    const VectorXd seed = predict_right(
        cur.psi, chains.left[static_cast<size_t>(pos)],
        chains.right[static_cast<size_t>(n - pos - 1)], lb.dim, rb.dim);
    ++pos;
    cur = solve_bond(left_of(pos), right_of(pos), p, c, &seed);
  };
  auto step_left = [&](int& pos) {
    const BlockBasis& lb = left_of(pos);
    const BlockBasis& rb = right_of(pos);
    double eps = 0.0;
    chains.right[static_cast<size_t>(n - pos)] =
        grow_right(rb, cur.psi, lb.dim, rb.dim, p, c, eps);
    st.max_truncated_weight = std::max(st.max_truncated_weight, eps);
    st.bond_truncated_weights[static_cast<size_t>(pos)] = eps;
    if (eps > c.target_epsilon) st.epsilon_exceeded = true;
    const VectorXd seed =
        predict_left(cur.psi, lb, chains.right[static_cast<size_t>(n - pos)],
                     lb.dim, rb.dim);
    --pos;
    cur = solve_bond(left_of(pos), right_of(pos), p, c, &seed);
  };

  double e_prev = std::numeric_limits<double>::infinity();
  for (int sweep = 1; sweep <= c.n_sweeps; ++sweep) {
    while (l < n - 2) step_right(l);
    while (l > 2) step_left(l);
    while (l < center) step_right(l);

    const double e = cur.energy;
    st.sweep_energies.push_back(e);
    st.sweeps_done = sweep;
    const double scale = std::max(1.0, std::abs(e));
    if (sweep > 1 && e > e_prev + 100.0 * c.eigensolver_tol * scale)
      st.monotonicity_violated = true;
    if (std::abs(e - e_prev) <=
        std::max(10.0 * c.eigensolver_tol, 1e-11) * scale) {
      st.converged = true;
      break;
    }
    e_prev = e;
  }

  SuperblockState out;
  out.psi = cur.psi;
  out.dim_s = left_of(l).dim;
  out.dim_e = right_of(l).dim;
  out.n_sites = n;
  out.bond = l;
  out.energy = cur.energy;

  // center-bond Schmidt spectrum
  Map<const MatrixXd> a(out.psi.data(), 2 * out.dim_e, 2 * out.dim_s);
  MatrixXd rho_l;
  rho_l.noalias() = a.transpose() * a;
  VectorXd w = symmetric_eigenvalues(rho_l);
  std::sort(w.data(), w.data() + w.size(), std::greater<double>());
  out.schmidt_spectrum = w;
  out.truncated_weight = 0.0;
  for (Index i = c.max_kept_states; i < w.size(); ++i)
    out.truncated_weight += std::max(0.0, w(i));

  if (stats) *stats = st;
  return out;
}

double schmidt_entropy(const SuperblockState& s) {
  double ent = 0.0;
  for (Index i = 0; i < s.schmidt_spectrum.size(); ++i) {
    const double w = s.schmidt_spectrum(i);
    if (w > 1e-14) ent -= w * std::log2(w);
  }
  return ent;
}

DmrgRun run_dmrg(const ModelParams& p, const DmrgConfig& c) {
  DmrgRun run;
  run.params = p;
  run.config = c;
  if (p.is_xx()) run.config.conserve_sz = true;
  run.chains = warmup(p, run.config, &run.warmup_truncated_weight);
  run.state = sweep_to_convergence(run.chains, p, run.config, &run.stats);
  return run;
}

// ---------------------------------------------------------------------------
// checkpoint container: "XYNEGCK1", little-endian, dimension-prefixed blobs

namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint container assumes a little-endian host");

constexpr char kMagic[8] = {'X', 'Y', 'N', 'E', 'G', 'C', 'K', '1'};

template <typename T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("truncated checkpoint");
  return v;
}

void put_matrix(std::ostream& os, const MatrixXd& m) {
  put<std::int64_t>(os, m.rows());
  put<std::int64_t>(os, m.cols());
  os.write(reinterpret_cast<const char*>(m.data()),
           static_cast<std::streamsize>(sizeof(double) * m.size()));
}

MatrixXd get_matrix(std::istream& is) {
  const auto rows = get<std::int64_t>(is);
  const auto cols = get<std::int64_t>(is);
  if (rows < 0 || cols < 0 || rows * cols > (1L << 32))
    throw std::runtime_error("corrupt checkpoint matrix header");
  MatrixXd m(rows, cols);
  is.read(reinterpret_cast<char*>(m.data()),
          static_cast<std::streamsize>(sizeof(double) * m.size()));
  if (!is) throw std::runtime_error("truncated checkpoint");
  return m;
}

void put_vector(std::ostream& os, const VectorXd& v) {
  put<std::int64_t>(os, v.size());
  os.write(reinterpret_cast<const char*>(v.data()),
           static_cast<std::streamsize>(sizeof(double) * v.size()));
}

VectorXd get_vector(std::istream& is) {
  const auto n = get<std::int64_t>(is);
  if (n < 0 || n > (1L << 32)) throw std::runtime_error("corrupt checkpoint");
  VectorXd v(n);
  is.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(sizeof(double) * v.size()));
  if (!is) throw std::runtime_error("truncated checkpoint");
  return v;
}

void put_veci(std::ostream& os, const VectorXi& v) {
  put<std::int64_t>(os, v.size());
  os.write(reinterpret_cast<const char*>(v.data()),
           static_cast<std::streamsize>(sizeof(int) * v.size()));
}

VectorXi get_veci(std::istream& is) {
  const auto n = get<std::int64_t>(is);
  if (n < 0 || n > (1L << 32)) throw std::runtime_error("corrupt checkpoint");
  VectorXi v(n);
  is.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(sizeof(int) * v.size()));
  if (!is) throw std::runtime_error("truncated checkpoint");
  return v;
}

void put_block(std::ostream& os, const BlockBasis& b) {
  put<std::int32_t>(os, b.block_len);
  put<std::int64_t>(os, b.dim);
  put_matrix(os, b.transform);
  put_matrix(os, b.block_h);
  put_matrix(os, b.edge_x);
  put_matrix(os, b.edge_iy);
  put_veci(os, b.sz);
}

BlockBasis get_block(std::istream& is) {
  BlockBasis b;
  b.block_len = get<std::int32_t>(is);
  b.dim = get<std::int64_t>(is);
  b.transform = get_matrix(is);
  b.block_h = get_matrix(is);
  b.edge_x = get_matrix(is);
  b.edge_iy = get_matrix(is);
  b.sz = get_veci(is);
  return b;
}

}  // namespace

void save_checkpoint(const DmrgRun& run, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os.write(kMagic, sizeof(kMagic));

  put<std::int32_t>(os, run.params.n_sites);
  put<double>(os, run.params.gamma);
  put<double>(os, run.params.lambda);

  put<std::int32_t>(os, run.config.max_kept_states);
  put<std::int32_t>(os, run.config.n_sweeps);
  put<double>(os, run.config.eigensolver_tol);
  put<double>(os, run.config.target_epsilon);
  put<std::uint8_t>(os, run.config.conserve_sz ? 1 : 0);

  put<std::uint8_t>(os, run.stats.converged ? 1 : 0);
  put<std::int32_t>(os, run.stats.sweeps_done);
  put<double>(os, run.stats.max_truncated_weight);
  put<std::uint8_t>(os, run.stats.epsilon_exceeded ? 1 : 0);
  put<std::uint8_t>(os, run.stats.monotonicity_violated ? 1 : 0);
  put<std::int64_t>(os, static_cast<std::int64_t>(run.stats.sweep_energies.size()));
  for (double e : run.stats.sweep_energies) put<double>(os, e);
  put<std::int64_t>(os,
                    static_cast<std::int64_t>(run.stats.bond_truncated_weights.size()));
  for (double e : run.stats.bond_truncated_weights) put<double>(os, e);
  put<double>(os, run.warmup_truncated_weight);

  put<std::int64_t>(os, static_cast<std::int64_t>(run.chains.left.size()));
  for (const auto& b : run.chains.left) put_block(os, b);
  put<std::int64_t>(os, static_cast<std::int64_t>(run.chains.right.size()));
  for (const auto& b : run.chains.right) put_block(os, b);

  put<std::int64_t>(os, run.state.dim_s);
  put<std::int64_t>(os, run.state.dim_e);
  put<std::int32_t>(os, run.state.n_sites);
  put<std::int32_t>(os, run.state.bond);
  put<double>(os, run.state.energy);
  put<double>(os, run.state.truncated_weight);
  put_vector(os, run.state.psi);
  put_vector(os, run.state.schmidt_spectrum);
  if (!os) throw std::runtime_error("write failure on " + path);
}

DmrgRun load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || !std::equal(magic, magic + 8, kMagic))
    throw std::runtime_error(path + " is not a dmrg checkpoint");

  DmrgRun run;
  run.params.n_sites = get<std::int32_t>(is);
  run.params.gamma = get<double>(is);
  run.params.lambda = get<double>(is);

  run.config.max_kept_states = get<std::int32_t>(is);
  run.config.n_sweeps = get<std::int32_t>(is);
  run.config.eigensolver_tol = get<double>(is);
  run.config.target_epsilon = get<double>(is);
  run.config.conserve_sz = get<std::uint8_t>(is) != 0;

  run.stats.converged = get<std::uint8_t>(is) != 0;
  run.stats.sweeps_done = get<std::int32_t>(is);
  run.stats.max_truncated_weight = get<double>(is);
  run.stats.epsilon_exceeded = get<std::uint8_t>(is) != 0;
  run.stats.monotonicity_violated = get<std::uint8_t>(is) != 0;
  const auto ne = get<std::int64_t>(is);
  run.stats.sweep_energies.resize(static_cast<size_t>(ne));
  for (auto& e : run.stats.sweep_energies) e = get<double>(is);
  const auto nb = get<std::int64_t>(is);
  run.stats.bond_truncated_weights.resize(static_cast<size_t>(nb));
  for (auto& e : run.stats.bond_truncated_weights) e = get<double>(is);
  run.warmup_truncated_weight = get<double>(is);

  const auto nl = get<std::int64_t>(is);
  run.chains.left.resize(static_cast<size_t>(nl));
  for (auto& b : run.chains.left) b = get_block(is);
  const auto nr = get<std::int64_t>(is);
  run.chains.right.resize(static_cast<size_t>(nr));
  for (auto& b : run.chains.right) b = get_block(is);

  run.state.dim_s = get<std::int64_t>(is);
  run.state.dim_e = get<std::int64_t>(is);
  run.state.n_sites = get<std::int32_t>(is);
  run.state.bond = get<std::int32_t>(is);
  run.state.energy = get<double>(is);
  run.state.truncated_weight = get<double>(is);
  run.state.psi = get_vector(is);
  run.state.schmidt_spectrum = get_vector(is);
  return run;
}

}  // namespace xyneg
