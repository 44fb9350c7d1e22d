#include <doctest.h>

#include <cmath>
#include <random>

#include <unsupported/Eigen/KroneckerProduct>

#include "xyneg/entanglement.hpp"
#include "xyneg/exact.hpp"
#include "xyneg/linalg.hpp"

using namespace xyneg;

namespace {

DensityOperator make_rho(const Eigen::MatrixXd& m, Eigen::Index ds,
                         Eigen::Index de) {
  DensityOperator rho;
  rho.matrix = m;
  rho.d_s = ds;
  rho.d_e = de;
  return rho;
}

DensityOperator bell_projector() {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return make_rho(v * v.transpose(), 2, 2);
}

Eigen::MatrixXd random_orthogonal(Eigen::Index n, std::mt19937& gen) {
  std::normal_distribution<double> dist;
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = dist(gen);
  return Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ();
}

// partial transpose on the environment factor, for the T_S vs T_E check
Eigen::MatrixXd transpose_env(const DensityOperator& rho) {
  const Eigen::Index ds = rho.d_s, de = rho.d_e;
  Eigen::MatrixXd out(ds * de, ds * de);
  for (Eigen::Index i = 0; i < ds; ++i)
    for (Eigen::Index k = 0; k < ds; ++k)
      out.block(i * de, k * de, de, de) =
          rho.matrix.block(i * de, k * de, de, de).transpose();
  return out;
}

}  // namespace

TEST_CASE("partial transpose basics") {
  SUBCASE("maximally mixed state is invariant") {
    const auto rho = make_rho(Eigen::MatrixXd::Identity(4, 4) / 4.0, 2, 2);
    CHECK((partial_transpose(rho) - rho.matrix).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("bell projector spectrum is {1/2, 1/2, 1/2, -1/2}") {
    const auto ev = symmetric_eigenvalues(partial_transpose(bell_projector()));
    CHECK(ev(0) == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(ev(1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(ev(3) == doctest::Approx(0.5).epsilon(1e-14));
  }

  SUBCASE("product states stay positive") {
    std::mt19937 gen(42);
    for (int rep = 0; rep < 20; ++rep) {
      const auto us = random_orthogonal(3, gen);
      const auto ue = random_orthogonal(4, gen);
      Eigen::VectorXd ps = Eigen::VectorXd::Random(3).cwiseAbs();
      Eigen::VectorXd pe = Eigen::VectorXd::Random(4).cwiseAbs();
      ps /= ps.sum();
      pe /= pe.sum();
      const Eigen::MatrixXd rs = us * ps.asDiagonal() * us.transpose();
      const Eigen::MatrixXd re = ue * pe.asDiagonal() * ue.transpose();
      const auto rho = make_rho(Eigen::kroneckerProduct(rs, re), 3, 4);
      CHECK(symmetric_eigenvalues(partial_transpose(rho))(0) >= -1e-12);
      CHECK(negativity(rho).negativity == 0.0);
    }
  }

  SUBCASE("involution is exact") {
    const auto gs = exact_ground_state({6, 0.5, 1.0});
    const auto rho = exact_rho_se(gs.state, 2, 2);
    DensityOperator pt = rho;
    pt.matrix = partial_transpose(rho);
    CHECK((partial_transpose(pt) - rho.matrix).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("trace preserved and output symmetric") {
    const auto gs = exact_ground_state({8, 1.0, 1.0});
    const auto rho = exact_rho_se(gs.state, 3, 2);
    const auto pt = partial_transpose(rho);
    CHECK(pt.trace() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((pt - pt.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  }

  SUBCASE("non-factorizable dimension is rejected") {
    auto rho = make_rho(Eigen::MatrixXd::Identity(6, 6) / 6.0, 2, 2);
    CHECK_THROWS_AS(partial_transpose(rho), std::invalid_argument);
  }
}

TEST_CASE("negativity values") {
  SUBCASE("bell pair") {
    const auto r = negativity(bell_projector());
    CHECK(r.negativity == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.log_negativity == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.min_eigenvalue == doctest::Approx(-0.5).epsilon(1e-14));
  }

  SUBCASE("log negativity definition holds on data") {
    const auto gs = exact_ground_state({8, 1.0, 1.0});
    const auto r = negativity(exact_rho_se(gs.state, 3, 2));
    CHECK(r.log_negativity == doctest::Approx(std::log2(r.negativity + 1.0)));
  }

  SUBCASE("two-site critical ising ground state") {
    const auto gs = exact_ground_state({2, 1.0, 1.0});
    DensityOperator rho;
    rho.matrix = gs.state.amplitudes * gs.state.amplitudes.transpose();
    rho.d_s = rho.d_e = 2;
    CHECK(negativity(rho).negativity ==
          doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-12));
  }
}

TEST_CASE("negativity invariances") {
  const auto gs = exact_ground_state({6, 1.0, 1.0});
  const auto rho = exact_rho_se(gs.state, 2, 2);
  const double base = negativity(rho).negativity;

  SUBCASE("local basis changes") {
    std::mt19937 gen(7);
    for (int rep = 0; rep < 25; ++rep) {
      const Eigen::MatrixXd u =
          Eigen::kroneckerProduct(random_orthogonal(4, gen),
                                  random_orthogonal(4, gen));
      auto rotated = rho;
      rotated.matrix = u * rho.matrix * u.transpose();
      CHECK(negativity(rotated).negativity == doctest::Approx(base).epsilon(1e-10));
    }
  }

  SUBCASE("transposing either factor gives the same spectrum") {
    const auto es = symmetric_eigenvalues(partial_transpose(rho));
    const auto ee = symmetric_eigenvalues(transpose_env(rho));
    CHECK((es - ee).cwiseAbs().maxCoeff() <= 1e-12);
  }

  SUBCASE("schmidt formula on random pure states") {
    std::mt19937 gen(13);
    std::normal_distribution<double> dist;
    for (int rep = 0; rep < 25; ++rep) {
      const Eigen::Index d = 2 + rep % 7;  // up to 8x8
      Eigen::MatrixXd a(d, d);
      for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) a(i, j) = dist(gen);
      a /= a.norm();
      Eigen::Map<const Eigen::VectorXd> v(a.data(), d * d);
      const auto pure = make_rho(v * v.transpose(), d, d);
      const Eigen::VectorXd sv = a.jacobiSvd().singularValues();
      double root_sum = 0.0;
      for (Eigen::Index i = 0; i < d; ++i) root_sum += sv(i);
      CHECK(negativity(pure).negativity ==
            doctest::Approx(root_sum * root_sum - 1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("von neumann entropy") {
  SUBCASE("pure projector has zero entropy") {
    CHECK(von_neumann_entropy(bell_projector()) == doctest::Approx(0.0).epsilon(1e-12));
  }

  SUBCASE("maximally mixed two-qubit state has two bits") {
    const auto rho = make_rho(Eigen::MatrixXd::Identity(4, 4) / 4.0, 2, 2);
    CHECK(von_neumann_entropy(rho) == doctest::Approx(2.0).epsilon(1e-14));
  }

  SUBCASE("n=12 critical ising fixture") {
    const auto gs = exact_ground_state({12, 1.0, 1.0});
    const auto rho = exact_rho_se(gs.state, 5, 2);
    CHECK(von_neumann_entropy(rho) ==
          doctest::Approx(0.800627193841885).epsilon(1e-9));
    CHECK(negativity(rho).negativity ==
          doctest::Approx(0.126171295061947).epsilon(1e-9));
  }

  SUBCASE("rejects operators with real negative spectrum") {
    auto rho = make_rho(Eigen::MatrixXd::Identity(2, 2), 2, 1);
    rho.matrix(1, 1) = -0.5;
    rho.matrix(0, 0) = 1.5;
    CHECK_THROWS_AS(von_neumann_entropy(rho), std::runtime_error);
  }
}
