#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "twomode/fock.hpp"
#include "twomode/rng.hpp"
#include "twomode/states.hpp"

using namespace twomode;

namespace {

Eigen::VectorXcd basis_vector(const FockSpace& space, std::int64_t n_a, std::int64_t n_b) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(space.dim());
  v(space.index_of(n_a, n_b)) = 1.0;
  return v;
}

}  // namespace

TEST_CASE("sector-major basis layout") {
  const FockSpace space(2);
  CHECK(space.dim() == 6);

  // (n_a, n_b) in index order for n_max = 2
  const std::pair<std::int64_t, std::int64_t> expected[] = {{0, 0}, {1, 0}, {0, 1},
                                                            {2, 0}, {1, 1}, {0, 2}};
  for (std::int64_t i = 0; i < 6; ++i) {
    CHECK(space.occupations_of(i) == expected[i]);
    CHECK(space.index_of(expected[i].first, expected[i].second) == i);
  }

  SUBCASE("round trip at a larger truncation") {
    const FockSpace big(37);
    CHECK(big.dim() == 38 * 39 / 2);
    for (std::int64_t i = 0; i < big.dim(); ++i) {
      const auto [n_a, n_b] = big.occupations_of(i);
      CHECK(big.index_of(n_a, n_b) == i);
      CHECK(big.total_of(i) == n_a + n_b);
    }
  }

  SUBCASE("out-of-range lookups throw") {
    CHECK_THROWS_AS(space.index_of(2, 1), UsageError);
    CHECK_THROWS_AS(space.index_of(-1, 0), UsageError);
    CHECK_THROWS_AS(space.occupations_of(6), UsageError);
    CHECK_THROWS_AS(FockSpace(-1), UsageError);
    CHECK_THROWS_AS(FockSpace(4001), UsageError);
  }
}

TEST_CASE("ladder operators act with sqrt factors and drop truncation overflow") {
  const FockSpace space(4);
  const ModeOperator a = annihilator(space, Mode::A);
  const ModeOperator b = annihilator(space, Mode::B);

  // a |3,0> = sqrt(3) |2,0>
  Eigen::VectorXcd out = a.matrix() * basis_vector(space, 3, 0);
  CHECK(std::abs(out(space.index_of(2, 0)) - std::sqrt(3.0)) < 1e-14);
  CHECK(std::abs(out.norm() - std::sqrt(3.0)) < 1e-14);

  // b^dag |1,1> = sqrt(2) |1,2>
  out = b.matrix().adjoint() * basis_vector(space, 1, 1);
  CHECK(std::abs(out(space.index_of(1, 2)) - std::sqrt(2.0)) < 1e-14);

  // raising out of the truncated space is dropped, not wrapped
  out = adjoint(a).matrix() * basis_vector(space, 4, 0);
  CHECK(out.norm() == 0.0);

  SUBCASE("number operator from composition") {
    const ModeOperator n_a = adjoint(a) * a;
    for (std::int64_t i = 0; i < space.dim(); ++i) {
      const auto occ = space.occupations_of(i);
      CHECK(std::abs(n_a.matrix()(i, i) - cplx(static_cast<double>(occ.first))) < 1e-14);
    }
    CHECK((n_a.matrix() - number_operator(space, Mode::A).matrix()).norm() < 1e-13);
  }

  SUBCASE("commutator [a, a^dag] = 1 away from the truncation edge") {
    const Eigen::MatrixXcd comm =
        a.matrix() * a.matrix().adjoint() - a.matrix().adjoint() * a.matrix();
    for (std::int64_t i = 0; i < space.dim(); ++i) {
      const auto [n_a, n_b] = space.occupations_of(i);
      if (n_a + n_b == space.n_max()) continue;  // edge rows lose the +1
      CHECK(std::abs(comm(i, i) - cplx(1.0)) < 1e-13);
    }
  }

  SUBCASE("modes commute") {
    const Eigen::MatrixXcd ab = a.matrix() * b.matrix();
    const Eigen::MatrixXcd ba = b.matrix() * a.matrix();
    CHECK((ab - ba).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("state and density validation") {
  const FockSpace space(3);

  SUBCASE("state vectors normalize on construction") {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(space.dim());
    v(0) = 3.0;
    v(4) = 4.0;
    const StateVector psi(space, v);
    CHECK(std::abs(psi.amplitudes().norm() - 1.0) < 1e-15);
    CHECK_THROWS_AS(StateVector(space, Eigen::VectorXcd::Zero(space.dim())), ValidationError);
    CHECK_THROWS_AS(StateVector(space, Eigen::VectorXcd::Ones(2)), UsageError);
  }

  SUBCASE("density operators reject bad matrices") {
    Eigen::MatrixXcd good = Eigen::MatrixXcd::Zero(space.dim(), space.dim());
    good(0, 0) = 0.5;
    good(1, 1) = 0.5;
    CHECK_NOTHROW(DensityOperator(space, good));

    Eigen::MatrixXcd bad_trace = good;
    bad_trace(0, 0) = 0.7;
    CHECK_THROWS_AS(DensityOperator(space, bad_trace), ValidationError);

    Eigen::MatrixXcd not_hermitian = good;
    not_hermitian(0, 1) = 0.3;
    CHECK_THROWS_AS(DensityOperator(space, not_hermitian), ValidationError);

    // Hermitian, unit trace, but indefinite
    Eigen::MatrixXcd indefinite = good;
    indefinite(0, 1) = indefinite(1, 0) = 0.9;
    CHECK_THROWS_AS(DensityOperator(space, indefinite), ValidationError);
  }
}

TEST_CASE("expectations and variances") {
  const FockSpace space(4);
  const ModeOperator n_tot = total_number_operator(space);

  SUBCASE("variance of a number eigenstate vanishes") {
    Eigen::VectorXcd v = basis_vector(space, 4, 0);
    const StateVector psi(space, v);
    CHECK(variance(n_tot, psi) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(real_expectation(n_tot, psi) == doctest::Approx(4.0));
  }

  SUBCASE("dense and pure paths agree on a superposition") {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(space.dim());
    v(space.index_of(0, 0)) = 0.6;
    v(space.index_of(2, 1)) = 0.8 * cplx(0.0, 1.0);
    const StateVector psi(space, v);
    const DensityOperator rho = make_density(psi);
    CHECK(real_expectation(n_tot, rho) == doctest::Approx(real_expectation(n_tot, psi)));
    CHECK(variance(n_tot, rho) == doctest::Approx(variance(n_tot, psi)).epsilon(1e-12));
    // <n> = 0.36*0 + 0.64*3
    CHECK(real_expectation(n_tot, psi) == doctest::Approx(1.92));
  }

  SUBCASE("non-Hermitian operators are rejected") {
    const ModeOperator a = annihilator(space, Mode::A);
    CHECK_THROWS_AS(variance(a, fock_state(space, 1, 0)), UsageError);
    CHECK_THROWS_AS(real_expectation(a, fock_state(space, 1, 0)), UsageError);
  }
}

TEST_CASE("partial trace") {
  const FockSpace space(3);

  // |psi> = (|1,0> + |0,1>)/sqrt(2): each mode reduces to a 50:50 number mixture
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(space.dim());
  v(space.index_of(1, 0)) = M_SQRT1_2;
  v(space.index_of(0, 1)) = M_SQRT1_2;
  const DensityOperator rho = make_density(StateVector(space, v));

  const SingleModeDensity ra = partial_trace(rho, Mode::A);
  CHECK(ra.max_n() == 3);
  CHECK(ra.matrix()(0, 0).real() == doctest::Approx(0.5));
  CHECK(ra.matrix()(1, 1).real() == doctest::Approx(0.5));
  CHECK(std::abs(ra.matrix()(0, 1)) < 1e-14);  // no local coherence survives

  SUBCASE("product state reduces to its factor") {
    Eigen::VectorXcd w = Eigen::VectorXcd::Zero(space.dim());
    w(space.index_of(0, 0)) = M_SQRT1_2;
    w(space.index_of(1, 0)) = M_SQRT1_2;  // (|0> + |1>)_A (x) |0>_B
    const SingleModeDensity red = partial_trace(make_density(StateVector(space, w)), Mode::A);
    CHECK(red.matrix()(0, 1).real() == doctest::Approx(0.5));  // coherence preserved
    const SingleModeDensity red_b = partial_trace(make_density(StateVector(space, w)), Mode::B);
    CHECK(red_b.matrix()(0, 0).real() == doctest::Approx(1.0));
  }
}

TEST_CASE("sector embedding and extraction") {
  const FockSpace space(6);
  Eigen::VectorXcd amps(4);
  amps << 0.5, 0.5, cplx(0.0, 0.5), 0.5;
  const SectorState s(3, amps);

  const StateVector psi = embed_sector(space, s);
  CHECK(std::abs(psi.amplitudes()(space.index_of(3, 0)) - cplx(0.5)) < 1e-15);
  CHECK(std::abs(psi.amplitudes()(space.index_of(1, 2)) - cplx(0.0, 0.5)) < 1e-15);

  const SectorState back = extract_sector(psi);
  CHECK(back.total_n() == 3);
  CHECK((back.amplitudes() - s.amplitudes()).norm() < 1e-14);

  SUBCASE("mixed-sector extraction is an error") {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(space.dim());
    v(space.index_of(0, 0)) = M_SQRT1_2;
    v(space.index_of(1, 0)) = M_SQRT1_2;
    CHECK_THROWS_AS(extract_sector(StateVector(space, v)), UsageError);
  }

  SUBCASE("sector too large for the space") {
    Eigen::VectorXcd big = Eigen::VectorXcd::Ones(8);
    CHECK_THROWS_AS(embed_sector(space, SectorState(7, big)), UsageError);
  }
}

TEST_CASE("correlation moments are truncation-safe") {
  // At n_max = N the operator a^m (b^dag)^n only stays exact if the
  // lowering acts first; these checks pin that behavior.
  const std::int64_t n = 6;
  const FockSpace space(n);

  Eigen::VectorXcd amps(n + 1);
  Rng rng(911);
  for (std::int64_t j = 0; j <= n; ++j) amps(j) = rng.complex_gaussian();
  const SectorState s(n, amps);
  const DensityOperator rho = make_density(embed_sector(space, s));

  for (int m = 1; m <= 2; ++m) {
    for (int k = 1; k <= 2; ++k) {
      const cplx dense = correlation_moment(rho, m, k);
      const cplx fast = correlation_moment(s, m, k);
      CHECK(std::abs(dense - fast) < 1e-12);
      CHECK(correlation_threshold(rho, m, k) ==
            doctest::Approx(correlation_threshold(s, m, k)).epsilon(1e-12));
    }
  }

  SUBCASE("sector states have no cross-power moments") {
    CHECK(std::abs(correlation_moment(s, 1, 2)) == 0.0);
    CHECK(std::abs(correlation_moment(s, 2, 1)) == 0.0);
  }

  SUBCASE("thresholds are falling-factorial expectations") {
    const DensityOperator fock22 = make_density(fock_state(space, 2, 2));
    // <(a^dag)^1 a^1 (b^dag)^1 b^1> = n_a * n_b = 4
    CHECK(correlation_threshold(fock22, 1, 1) == doctest::Approx(4.0));
    // m = 2: 2*1 * 2*1 = 4 again; m=2,n=1: 2*1*2 = 4
    CHECK(correlation_threshold(fock22, 2, 2) == doctest::Approx(4.0));
    CHECK(correlation_threshold(fock22, 2, 1) == doctest::Approx(4.0));
    // falling factorial kills powers above the occupation
    CHECK(correlation_threshold(make_density(fock_state(space, 1, 1)), 2, 1) ==
          doctest::Approx(0.0));
  }
}
