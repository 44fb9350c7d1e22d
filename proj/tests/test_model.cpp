#include <doctest.h>

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

#include "xyneg/linalg.hpp"
#include "xyneg/model.hpp"

using namespace xyneg;

TEST_CASE("pauli operators are hermitian, traceless and square to one") {
  for (char label : {'x', 'y', 'z'}) {
    const auto op = local_operator(label).matrix;
    CHECK((op - op.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(std::abs(op.trace()) == 0.0);
    CHECK((op * op - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK_THROWS_AS(local_operator('q'), std::invalid_argument);
}

TEST_CASE("bond term limits") {
  const Eigen::Matrix2d x = pauli_x();

  SUBCASE("gamma = 1 is the pure xx coupling") {
    const Eigen::Matrix4d b = bond_term({2, 1.0, 0.0});
    const Eigen::Matrix4d want = -Eigen::kroneckerProduct(x, x);
    CHECK((b - want).cwiseAbs().maxCoeff() <= 1e-15);
  }

  SUBCASE("gamma = 0 is the hopping form") {
    const Eigen::Matrix4d b = bond_term({2, 0.0, 0.0});
    // antidiagonal -1 inside the {ud, du} subspace, no uu<->dd element
    CHECK(b(1, 2) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(b(2, 1) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(b(0, 3) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(b(3, 0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(b.diagonal().cwiseAbs().maxCoeff() <= 1e-15);
  }

  SUBCASE("gamma = 0.5 mixes xx and yy with weights 0.75 / 0.25") {
    const Eigen::Matrix4d b = bond_term({2, 0.5, 0.0});
    CHECK(b(0, 3) == doctest::Approx(-0.5).epsilon(1e-15));  // -wx + wy
    CHECK(b(1, 2) == doctest::Approx(-1.0).epsilon(1e-15));  // -wx - wy
  }

  SUBCASE("hermitian with real entries for any gamma") {
    for (double g : {0.0, 0.3, 0.7, 1.0}) {
      const Eigen::Matrix4d b = bond_term({2, g, 0.0});
      CHECK((b - b.transpose()).cwiseAbs().maxCoeff() <= 1e-15);
    }
  }

  CHECK_THROWS_AS(bond_term({2, 1.5, 0.0}), std::invalid_argument);
}

TEST_CASE("dense hamiltonian small-chain spectra") {
  SUBCASE("single bond, zero field") {
    const auto h = build_dense_hamiltonian({2, 1.0, 0.0});
    const auto ev = symmetric_eigenvalues(h);
    CHECK(ev(0) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(ev(1) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(ev(2) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(ev(3) == doctest::Approx(1.0).epsilon(1e-14));
  }

  SUBCASE("two-site critical ising ground energy is -sqrt(5)") {
    const auto ev = symmetric_eigenvalues(build_dense_hamiltonian({2, 1.0, 1.0}));
    CHECK(ev(0) == doctest::Approx(-std::sqrt(5.0)).epsilon(1e-14));
  }

  SUBCASE("three-site xx ground energy is -sqrt(2)") {
    const auto ev = symmetric_eigenvalues(build_dense_hamiltonian({3, 0.0, 0.0}));
    CHECK(ev(0) == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-14));
  }
}

TEST_CASE("dense hamiltonian structure") {
  SUBCASE("hermitian to 1e-12") {
    for (auto p : {ModelParams{6, 1.0, 1.0}, ModelParams{6, 0.5, 1.0},
                   ModelParams{6, 0.0, 0.0}}) {
      const auto h = build_dense_hamiltonian(p);
      CHECK((h - h.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }

  SUBCASE("ising commutes with the global spin flip") {
    const int n = 6;
    const auto h = build_dense_hamiltonian({n, 1.0, 1.0});
    const long dim = 1L << n;
    // parity operator prod_k sigma_z: diagonal sign by down-spin count
    Eigen::VectorXd par(dim);
    for (long i = 0; i < dim; ++i)
      par(i) = __builtin_popcountl(static_cast<unsigned long>(i)) % 2 ? -1.0 : 1.0;
    const Eigen::MatrixXd hp = h * par.asDiagonal();
    const Eigen::MatrixXd ph = par.asDiagonal() * h;
    CHECK((hp - ph).cwiseAbs().maxCoeff() <= 1e-12);
  }

  SUBCASE("spectrum invariant under lambda -> -lambda with global flip") {
    for (int n : {4, 6, 8}) {
      const auto e1 = symmetric_eigenvalues(build_dense_hamiltonian({n, 1.0, 0.7}));
      const auto e2 = symmetric_eigenvalues(build_dense_hamiltonian({n, 1.0, -0.7}));
      CHECK((e1 - e2).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }

  SUBCASE("no wrap-around bond") {
    // gamma=1, lambda=0: only double flips of adjacent sites appear
    const auto h = build_dense_hamiltonian({3, 1.0, 0.0});
    // site 1 = most significant bit: |uuu> couples to |ddu> and |udd> only
    CHECK(h(0b110, 0) == doctest::Approx(-1.0));
    CHECK(h(0b011, 0) == doctest::Approx(-1.0));
    CHECK(h(0b101, 0) == doctest::Approx(0.0));
  }
}

TEST_CASE("parameter guards") {
  CHECK_THROWS_AS(build_dense_hamiltonian({15, 1.0, 1.0}), std::length_error);
  CHECK_THROWS_AS(build_dense_hamiltonian({8, -0.2, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams({8, 1.0, -1.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams({1, 1.0, 1.0}).validate(), std::invalid_argument);
  CHECK_NOTHROW(ModelParams({8, 1.0, 1.0}).validate());
}

TEST_CASE("matrix-free apply agrees with the dense matrix") {
  for (auto p : {ModelParams{6, 1.0, 1.0}, ModelParams{6, 0.0, 0.0},
                 ModelParams{7, 0.5, 0.4}}) {
    const auto h = build_dense_hamiltonian(p);
    const auto v = deterministic_unit_vector(1L << p.n_sites, 7u);
    Eigen::VectorXd hv;
    apply_hamiltonian(p, v, hv);
    CHECK((hv - h * v).cwiseAbs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("predefined critical points") {
  CHECK(critical_ising(32).gamma == 1.0);
  CHECK(critical_ising(32).lambda == 1.0);
  CHECK(critical_xy(32).gamma == 0.5);
  CHECK(critical_xy(32).lambda == 1.0);
  CHECK(critical_xx(32).gamma == 0.0);
  CHECK(critical_xx(32).lambda == 0.0);
  CHECK(critical_xx(32).is_xx());
}
