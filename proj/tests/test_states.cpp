#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "twomode/spin.hpp"
#include "twomode/states.hpp"

using namespace twomode;

namespace {

double frobenius_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).norm();
}

}  // namespace

TEST_CASE("fock and noon builders") {
  const auto space = build_space(6);

  const auto f = fock_state(space, 2, 3);
  CHECK(std::abs(f.amplitudes()(space.index_of(2, 3))) == doctest::Approx(1.0));
  CHECK(f.amplitudes().norm() == doctest::Approx(1.0));
  CHECK(real_expectation(number_operator(space, Mode::A), f) == doctest::Approx(2.0));
  CHECK(real_expectation(number_operator(space, Mode::B), f) == doctest::Approx(3.0));

  const auto noon = noon_state(space, 5);
  CHECK(std::abs(noon.amplitudes()(space.index_of(5, 0))) == doctest::Approx(M_SQRT1_2));
  CHECK(std::abs(noon.amplitudes()(space.index_of(0, 5))) == doctest::Approx(M_SQRT1_2));
  CHECK(real_expectation(total_number_operator(space), noon) == doctest::Approx(5.0));
  CHECK(variance(total_number_operator(space), noon) == doctest::Approx(0.0).epsilon(1e-12));

  CHECK_THROWS_AS(noon_state(space, 0), UsageError);
}

TEST_CASE("relative phase eigenstates") {
  SUBCASE("parameter validation") {
    CHECK_THROWS_AS(RelativePhaseSpec(3, 0), UsageError);   // odd
    CHECK_THROWS_AS(RelativePhaseSpec(-2, 0), UsageError);  // non-positive
    CHECK_THROWS_AS(RelativePhaseSpec(4, 3), UsageError);   // p out of range
    CHECK_NOTHROW(RelativePhaseSpec(4, -2));
    CHECK(RelativePhaseSpec(4, 1).theta() == doctest::Approx(2.0 * M_PI / 5.0));
  }

  SUBCASE("flat modulus and linear phase") {
    const RelativePhaseSpec spec(6, 2);
    const auto s = relative_phase_sector(spec);
    REQUIRE(s.total_n() == 6);
    const double mod = 1.0 / std::sqrt(7.0);
    for (int j = 0; j <= 6; ++j) {
      CHECK(std::abs(s.amplitudes()(j)) == doctest::Approx(mod));
    }
    // ratio of consecutive amplitudes is a constant phase e^{i theta}
    const cplx step = std::exp(cplx(0.0, spec.theta()));
    for (int j = 0; j < 6; ++j) {
      CHECK(std::abs(s.amplitudes()(j + 1) / s.amplitudes()(j) - step) < 1e-12);
    }
  }

  SUBCASE("sector and dense embeddings agree") {
    const auto space = build_space(8);
    const RelativePhaseSpec spec(8, -3);
    const auto dense = relative_phase_state(space, spec);
    const auto embedded = embed_sector(space, relative_phase_sector(spec));
    CHECK((dense.amplitudes() - embedded.amplitudes()).norm() < 1e-14);
  }

  SUBCASE("known mode correlation at n=2, p=0") {
    const auto s = relative_phase_sector(RelativePhaseSpec(2, 0));
    const cplx moment = correlation_moment(s, 1, 1);
    CHECK(moment.real() == doctest::Approx(2.0 * M_SQRT2 / 3.0).epsilon(1e-12));
    CHECK(std::abs(moment.imag()) < 1e-14);
  }
}

TEST_CASE("coherent spin states") {
  // CSS is the highest-weight state along its Bloch direction: the mean is
  // (n/2) * direction, the variance along the mean vanishes and each
  // transverse variance is n/4.
  const std::int64_t n = 14;
  const double theta = 1.1, phi = -0.7;
  const auto s = css_sector(n, theta, phi);
  const auto m = spin_moments(s);

  const Eigen::Vector3d dir(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                            std::cos(theta));
  CHECK((m.means - 0.5 * static_cast<double>(n) * dir).norm() < 1e-10);
  CHECK(rotated_variance(m, dir) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(m.covariance.trace() == doctest::Approx(0.5 * static_cast<double>(n)));
  CHECK(m.mean_number == doctest::Approx(static_cast<double>(n)));

  SUBCASE("polar special cases hit single occupations") {
    const auto north = css_sector(4, 0.0, 0.3);
    CHECK(std::abs(north.amplitudes()(4)) == doctest::Approx(1.0));  // all spins up: mode b
    const auto south = css_sector(4, M_PI, 0.0);
    CHECK(std::abs(south.amplitudes()(0)) == doctest::Approx(1.0));  // all spins down: mode a
  }

  SUBCASE("dense embedding matches") {
    const auto space = build_space(6);
    const auto dense = css_state(space, 5, 2.0, 0.4);
    const auto embedded = embed_sector(space, css_sector(5, 2.0, 0.4));
    CHECK((dense.amplitudes() - embedded.amplitudes()).norm() < 1e-13);
  }
}

TEST_CASE("coherent products") {
  const auto space = build_space(24);
  const cplx alpha(0.9, -0.2), beta(0.0, 0.6);
  const auto [rho, dropped] = coherent_product(space, alpha, beta);

  CHECK(rho.matrix().trace().real() == doctest::Approx(1.0));
  CHECK(dropped >= 0.0);
  CHECK(dropped < kWeightTol);
  CHECK(real_expectation(number_operator(space, Mode::A), rho) ==
        doctest::Approx(std::norm(alpha)).epsilon(1e-9));
  CHECK(real_expectation(number_operator(space, Mode::B), rho) ==
        doctest::Approx(std::norm(beta)).epsilon(1e-9));
  // <a> = alpha survives the truncation-safe evaluation
  const cplx mean_a = expectation(annihilator(space, Mode::A), rho);
  CHECK(std::abs(mean_a - alpha) < 1e-9);

  // coherent states break both SSR flavors
  CHECK_FALSE(global_ssr_check(rho).compliant);
  CHECK_FALSE(local_ssr_check(partial_trace(rho, Mode::A)).compliant);

  // too much amplitude outside the truncation is an error, not a silent drop
  CHECK_THROWS_AS(coherent_product(build_space(3), cplx(3.0, 0.0), cplx(0.0, 0.0)),
                  ValidationError);
}

TEST_CASE("one-axis twisting") {
  const std::int64_t n = 9;
  const auto base = css_sector(n, 0.5 * M_PI, 0.0);

  SUBCASE("unitary and trivial at chi_t = 0") {
    const auto t = one_axis_twist(base, 0.37);
    CHECK(t.amplitudes().norm() == doctest::Approx(1.0));
    const auto id = one_axis_twist(base, 0.0);
    CHECK((id.amplitudes() - base.amplitudes()).norm() < 1e-15);
  }

  SUBCASE("sector and dense paths agree") {
    const auto space = build_space(n);
    const auto dense = one_axis_twist(embed_sector(space, base), 0.37);
    const auto sector = embed_sector(space, one_axis_twist(base, 0.37));
    CHECK((dense.amplitudes() - sector.amplitudes()).norm() < 1e-13);
  }

  SUBCASE("twisting shears the transverse variances") {
    const auto m0 = spin_moments(base);
    const auto mt = spin_moments(one_axis_twist(base, 0.2));
    CHECK(mt.covariance(2, 2) == doctest::Approx(m0.covariance(2, 2)));  // [S_z, S_z^2] = 0
    CHECK(mt.covariance(1, 1) > m0.covariance(1, 1));
  }
}

TEST_CASE("separable ensembles") {
  const auto space = build_space(8);

  SUBCASE("weights must form a distribution") {
    auto ra = random_local_ssr_density(2, 1);
    auto rb = random_local_ssr_density(2, 2);
    CHECK_THROWS_AS(SeparableEnsemble({{0.7, ra, rb}}, SsrMode::local_ssr), ValidationError);
    CHECK_THROWS_AS(SeparableEnsemble({{-0.2, ra, rb}, {1.2, ra, rb}}, SsrMode::local_ssr),
                    ValidationError);
    CHECK_THROWS_AS(SeparableEnsemble({}, SsrMode::local_ssr), UsageError);
  }

  SUBCASE("local SSR rejects coherent factors") {
    Eigen::MatrixXcd coh(2, 2);
    coh << 0.5, 0.5, 0.5, 0.5;  // |+><+|, off-diagonal in the number basis
    SingleModeDensity off(coh);
    auto diag = random_local_ssr_density(1, 7);
    CHECK_THROWS_AS(SeparableEnsemble({{1.0, off, diag}}, SsrMode::local_ssr), ValidationError);
    CHECK_NOTHROW(SeparableEnsemble({{1.0, off, diag}}, SsrMode::unrestricted));
  }

  SUBCASE("assembly embeds the product mixture") {
    auto ra = random_local_ssr_density(3, 11);
    auto rb = random_local_ssr_density(3, 12);
    auto rc = random_local_ssr_density(2, 13);
    auto rd = random_local_ssr_density(2, 14);
    SeparableEnsemble ens({{0.25, ra, rb}, {0.75, rc, rd}}, SsrMode::local_ssr);
    const auto rho = assemble_separable(ens, space);
    CHECK(rho.matrix().trace().real() == doctest::Approx(1.0));
    CHECK(global_ssr_check(rho).compliant);
    // diagonal factors give a diagonal product state
    Eigen::MatrixXcd diag_only = rho.matrix().diagonal().asDiagonal();
    CHECK(frobenius_diff(rho.matrix(), diag_only) < 1e-14);
    // the reduced occupations mix with the term weights
    const double na = real_expectation(number_operator(space, Mode::A), rho);
    double expect_na = 0.0;
    for (const auto& t : ens.terms()) {
      for (std::int64_t k = 0; k <= t.rho_a.max_n(); ++k) {
        expect_na += t.weight * static_cast<double>(k) * t.rho_a.matrix()(k, k).real();
      }
    }
    CHECK(na == doctest::Approx(expect_na).epsilon(1e-12));
  }

  SUBCASE("products that spill past the truncation are rejected") {
    auto big = random_local_ssr_density(5, 21);
    SeparableEnsemble ens({{1.0, big, big}}, SsrMode::local_ssr);
    CHECK_THROWS_AS(assemble_separable(ens, build_space(4)), ValidationError);
  }
}

TEST_CASE("SSR checks and dephasing") {
  const auto space = build_space(16);

  SUBCASE("sector states are globally compliant") {
    const auto rho = make_density(noon_state(space, 4));
    const auto check = global_ssr_check(rho);
    CHECK(check.compliant);
    CHECK(check.residual == doctest::Approx(0.0));
    // dephasing is then the identity
    CHECK(frobenius_diff(ssr_dephase_global(rho).matrix(), rho.matrix()) < 1e-15);
  }

  SUBCASE("global dephasing projects onto the compliant set") {
    const auto rho = coherent_product(space, cplx(0.7, 0.1), cplx(0.3, 0.0)).rho;
    const auto deph = ssr_dephase_global(rho);
    CHECK(global_ssr_check(deph).compliant);
    CHECK(deph.matrix().trace().real() == doctest::Approx(1.0));
    // idempotent projector
    CHECK(frobenius_diff(ssr_dephase_global(deph).matrix(), deph.matrix()) < 1e-15);
    // diagonal (hence the occupation statistics) is untouched
    CHECK((deph.matrix().diagonal() - rho.matrix().diagonal()).norm() < 1e-15);
  }

  SUBCASE("local dephasing leaves only occupation populations") {
    const auto rho = coherent_product(space, cplx(0.5, 0.5), cplx(0.2, -0.4)).rho;
    const auto deph = ssr_dephase_local(rho);
    CHECK(local_ssr_check(partial_trace(deph, Mode::A)).compliant);
    CHECK(local_ssr_check(partial_trace(deph, Mode::B)).compliant);
    CHECK(global_ssr_check(deph).compliant);
    CHECK(frobenius_diff(ssr_dephase_local(deph).matrix(), deph.matrix()) < 1e-15);
    CHECK((deph.matrix().diagonal() - rho.matrix().diagonal()).norm() < 1e-15);
  }
}

TEST_CASE("random state generators are deterministic") {
  SUBCASE("local SSR densities") {
    const auto a = random_local_ssr_density(4, 99);
    const auto b = random_local_ssr_density(4, 99);
    const auto c = random_local_ssr_density(4, 100);
    CHECK(frobenius_diff(a.matrix(), b.matrix()) == 0.0);
    CHECK(frobenius_diff(a.matrix(), c.matrix()) > 1e-3);
    CHECK(a.matrix().trace().real() == doctest::Approx(1.0));
    CHECK(local_ssr_check(a).compliant);
  }

  SUBCASE("separable ensembles fit the space exactly") {
    const auto space = build_space(6);
    for (const auto mode : {SsrMode::local_ssr, SsrMode::unrestricted}) {
      const auto ens = random_separable(space, 5, 1234, mode);
      REQUIRE(ens.terms().size() == 5);
      for (const auto& t : ens.terms()) {
        CHECK(t.rho_a.max_n() == 3);  // floor(n_max/2)
        CHECK(t.rho_b.max_n() == 3);
      }
      // factors capped at n_max/2 embed without any dropped weight
      CHECK_NOTHROW(assemble_separable(ens, space));
    }
  }

  SUBCASE("unrestricted factors are pure") {
    const auto space = build_space(6);
    const auto ens = random_separable(space, 3, 777, SsrMode::unrestricted);
    for (const auto& t : ens.terms()) {
      const auto& m = t.rho_a.matrix();
      CHECK((m * m - m).norm() < 1e-12);
    }
  }
}
