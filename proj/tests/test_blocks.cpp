#include <doctest.h>

#include <cmath>

#include "xyneg/blocks.hpp"
#include "xyneg/entanglement.hpp"
#include "xyneg/exact.hpp"
#include "xyneg/linalg.hpp"

using namespace xyneg;

namespace {

DmrgConfig config(int m) {
  DmrgConfig c;
  c.max_kept_states = m;
  return c;
}

// descending spectra of two operators compared entry by entry
double spectrum_distance(const DensityOperator& a, const DensityOperator& b) {
  const auto ea = symmetric_eigenvalues(a.matrix);
  const auto eb = symmetric_eigenvalues(b.matrix);
  const Eigen::Index n = std::min(ea.size(), eb.size());
  double d = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    d = std::max(d, std::abs(ea(ea.size() - 1 - i) - eb(eb.size() - 1 - i)));
  return d;
}

}  // namespace

TEST_CASE("extraction at n=4 is exact in the physical basis") {
  const auto run = run_dmrg({4, 1.0, 1.0}, config(4));
  const auto rho = extract_rho_se(run.state);
  CHECK(rho.block_len == 1);
  CHECK(rho.separation == 2);
  CHECK(rho.d_s == 2);
  CHECK(rho.d_e == 2);

  // one-site end blocks keep the physical basis, so entries must agree
  const auto ex = exact_ground_state({4, 1.0, 1.0});
  const auto want = exact_rho_se(ex.state, 1, 2);
  CHECK((rho.matrix - want.matrix).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("one unnesting step against the exact reduced operator") {
  DmrgConfig tight = config(16);
  tight.eigensolver_tol = 1e-14;  // entrywise comparison needs a sharp state
  const auto run = run_dmrg({6, 1.0, 1.0}, tight);
  const auto ex = exact_ground_state({6, 1.0, 1.0});

  auto rho = extract_rho_se(run.state);
  CHECK(spectrum_distance(rho, exact_rho_se(ex.state, 2, 2)) <= 1e-10);

  const auto next = unnest_step(rho, run.chains.left[2], run.chains.right[2]);
  CHECK(next.block_len == 1);
  CHECK(next.separation == 4);
  CHECK(std::abs(next.matrix.trace() - 1.0) <= 1e-10);
  // terminal blocks are single sites in the physical basis again
  const auto want = exact_rho_se(ex.state, 1, 4);
  CHECK((next.matrix - want.matrix).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("mu series bookkeeping on n=8") {
  const auto run = run_dmrg({8, 1.0, 1.0}, config(16));
  const auto steps = mu_series(run.state, run.chains);
  REQUIRE(steps.size() == 3);
  CHECK(steps[0].block_len == 3);
  CHECK(steps[0].separation == 2);
  CHECK(steps[0].mu == doctest::Approx(2.0 / 3.0));
  CHECK(steps[1].block_len == 2);
  CHECK(steps[1].separation == 4);
  CHECK(steps[1].mu == doctest::Approx(2.0));
  CHECK(steps[2].block_len == 1);
  CHECK(steps[2].separation == 6);
  CHECK(steps[2].mu == doctest::Approx(6.0));
  for (const auto& s : steps) {
    CHECK(2 * s.block_len + s.separation == 8);
    CHECK(std::abs(s.rho.matrix.trace() - 1.0) <= 1e-10);
  }
}

TEST_CASE("pipeline matches the oracle on every series step") {
  for (auto p : {ModelParams{12, 1.0, 1.0}, ModelParams{12, 0.0, 0.0}}) {
    const auto run = run_dmrg(p, config(32));
    const auto ex = exact_ground_state(p);
    mu_series(run.state, run.chains, [&](const MuStep& s) {
      const auto oracle = exact_rho_se(ex.state, s.block_len, s.separation);
      CHECK(spectrum_distance(s.rho, oracle) <= 1e-8);
      CHECK(std::abs(negativity(s.rho).negativity -
                     negativity(oracle).negativity) <= 1e-6);
      return true;
    });
  }
}

TEST_CASE("negativity is non-increasing along the series at criticality") {
  const auto run = run_dmrg({12, 1.0, 1.0}, config(32));
  double prev = std::numeric_limits<double>::infinity();
  mu_series(run.state, run.chains, [&](const MuStep& s) {
    const double neg = negativity(s.rho).negativity;
    CHECK(neg <= prev + 1e-5);
    prev = neg;
    return true;
  });
}

TEST_CASE("streaming sink can stop early") {
  const auto run = run_dmrg({12, 1.0, 1.0}, config(16));
  int calls = 0;
  mu_series(run.state, run.chains, [&](const MuStep&) {
    ++calls;
    return calls < 2;
  });
  CHECK(calls == 2);
}

TEST_CASE("unnesting rejects inconsistent inputs") {
  const auto run = run_dmrg({8, 1.0, 1.0}, config(16));
  auto rho = extract_rho_se(run.state);

  SUBCASE("wrong block size") {
    CHECK_THROWS_AS(unnest_step(rho, run.chains.left[2], run.chains.right[2]),
                    std::invalid_argument);
  }

  SUBCASE("corrupted transform") {
    auto bad = run.chains.left[3];
    bad.transform *= 1.5;
    CHECK_THROWS_AS(unnest_step(rho, bad, run.chains.right[3]),
                    std::runtime_error);
  }

  SUBCASE("single-site blocks cannot be unnested") {
    const auto steps = mu_series(run.state, run.chains);
    CHECK_THROWS_AS(
        unnest_step(steps.back().rho, run.chains.left[1], run.chains.right[1]),
        std::invalid_argument);
  }
}

TEST_CASE("off-center states are rejected") {
  SuperblockState s;
  s.n_sites = 8;
  s.bond = 3;
  s.dim_s = 2;
  s.dim_e = 2;
  s.psi = Eigen::VectorXd::Zero(16);
  s.psi(0) = 1.0;
  CHECK_THROWS_AS(extract_rho_se(s), std::invalid_argument);
}
