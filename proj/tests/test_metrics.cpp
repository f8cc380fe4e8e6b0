#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>

#include "doctest.h"
#include "masim/channel.hpp"
#include "masim/metrics.hpp"
#include "masim/rng.hpp"

using namespace masim;

namespace {

Vec random_vec(int n, Rng& rng) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.cnormal(1.0);
  return v;
}

}  // namespace

TEST_CASE("received_snr: zero beamformer gives zero") {
  Vec h0(3);
  h0 << cplx(1, 1), cplx(0, 2), cplx(-1, 0);
  Beamformer w(Vec::Zero(3), 1.0);
  CHECK(received_snr(w, h0, 1e-3) == 0.0);
}

TEST_CASE("received_snr: scalar case equals p_max") {
  const double p_max = 0.2;
  Vec h0(1), wv(1);
  h0 << cplx(1, 0);
  wv << cplx(std::sqrt(p_max), 0);
  CHECK(received_snr(Beamformer(wv, p_max), h0, 1.0) ==
        doctest::Approx(p_max));
}

TEST_CASE("received_snr and interference_power: match a manual dot product") {
  Rng rng(7, 0);
  for (int rep = 0; rep < 50; ++rep) {
    const Vec h = random_vec(4, rng);
    const Vec wv = random_vec(4, rng);
    Beamformer w(wv, wv.squaredNorm());
    cplx dot(0, 0);
    for (int i = 0; i < 4; ++i) dot += std::conj(h(i)) * wv(i);
    const double want = std::norm(dot);
    CHECK(interference_power(w, h) == doctest::Approx(want).epsilon(1e-12));
    CHECK(received_snr(w, h, 2.5) ==
          doctest::Approx(want / 2.5).epsilon(1e-12));
  }
}

TEST_CASE("interference_power: zero for orthogonal vectors") {
  Vec hk(2), wv(2);
  hk << cplx(1, 0), cplx(0, 1);
  wv << cplx(0, 1), cplx(1, 0);  // hk^H w = -i + i = 0
  CHECK(interference_power(Beamformer(wv, 2.0), hk) < 1e-15);
}

TEST_CASE("interference_power: aligned case gives p ||h||^2") {
  Rng rng(8, 0);
  const Vec h = random_vec(4, rng);
  const double p = 0.2;
  const Vec wv = std::sqrt(p) * h / h.norm();
  CHECK(interference_power(Beamformer(wv, p), h) ==
        doctest::Approx(p * h.squaredNorm()).epsilon(1e-12));
}

TEST_CASE("metrics: invariant under a global phase on w") {
  Rng rng(9, 0);
  const Vec h = random_vec(4, rng);
  const Vec wv = random_vec(4, rng);
  const cplx ph = std::polar(1.0, 1.234);
  Beamformer w1(wv, wv.squaredNorm());
  Beamformer w2(Vec(ph * wv), wv.squaredNorm() * (1 + 1e-12));
  CHECK(interference_power(w1, h) ==
        doctest::Approx(interference_power(w2, h)).epsilon(1e-12));
  CHECK(received_snr(w1, h, 1e-3) ==
        doctest::Approx(received_snr(w2, h, 1e-3)).epsilon(1e-12));
}

TEST_CASE("interference_power: quadratic in a real scaling of w") {
  Rng rng(10, 0);
  const Vec h = random_vec(3, rng);
  const Vec wv = random_vec(3, rng);
  const double base = interference_power(Beamformer(wv, wv.squaredNorm()), h);
  const double c = 0.37;
  const double scaled =
      interference_power(Beamformer(Vec(c * wv), wv.squaredNorm()), h);
  CHECK(scaled == doctest::Approx(c * c * base).epsilon(1e-12));
}

TEST_CASE("metrics: dimension mismatches rejected") {
  Vec h(3);
  h.setOnes();
  Beamformer w(Vec::Zero(2), 1.0);
  CHECK_THROWS_AS(received_snr(w, h, 1.0), DimensionError);
  CHECK_THROWS_AS(interference_power(w, h), DimensionError);
}

TEST_CASE("check_feasible: zero beamformer on a valid APV is feasible") {
  ScenarioConfig cfg;
  Rng rng(1, 0);
  const Scenario sc = generate_scenario(cfg, rng);
  Apv apv({{0.0, 0.0}, {0.0, 0.1}, {0.1, 0.0}, {0.1, 0.1}}, cfg.region_size,
          cfg.min_spacing);
  const FeasibilityReport rep =
      check_feasible(Beamformer(Vec::Zero(4), cfg.p_max), apv, sc, cfg);
  CHECK(rep.feasible);
  CHECK(rep.violations.empty());
}

TEST_CASE("check_feasible: spacing violation reported with margin") {
  ScenarioConfig cfg;
  Rng rng(2, 0);
  cfg.n_antennas = 2;
  const Scenario sc = generate_scenario(cfg, rng);
  // Construct with a permissive spacing, then check against the strict cfg.
  Apv apv({{0.0, 0.0}, {0.0, 0.01}}, cfg.region_size, 0.0);
  const FeasibilityReport rep =
      check_feasible(Beamformer(Vec::Zero(2), cfg.p_max), apv, sc, cfg);
  CHECK_FALSE(rep.feasible);
  REQUIRE(rep.violations.size() == 1);
  CHECK(rep.violations[0].kind == ConstraintViolation::Kind::Spacing);
  CHECK(rep.violations[0].margin == doctest::Approx(cfg.min_spacing - 0.01));
  CHECK_FALSE(rep.violations[0].describe().empty());
}

TEST_CASE("check_feasible: region violation reported") {
  ScenarioConfig cfg;
  cfg.n_antennas = 1;
  cfg.k_prs = 0;
  Rng rng(3, 0);
  const Scenario sc = generate_scenario(cfg, rng);
  Apv apv({{0.3, 0.0}}, 1.0, 0.0);  // valid for A=1, outside cfg's A=0.4
  const FeasibilityReport rep =
      check_feasible(Beamformer(Vec::Zero(1), cfg.p_max), apv, sc, cfg);
  CHECK_FALSE(rep.feasible);
  REQUIRE(rep.violations.size() == 1);
  CHECK(rep.violations[0].kind == ConstraintViolation::Kind::Region);
}

TEST_CASE("check_feasible: power violation margin is the excess") {
  ScenarioConfig cfg;
  cfg.n_antennas = 1;
  cfg.k_prs = 0;
  Rng rng(4, 0);
  const Scenario sc = generate_scenario(cfg, rng);
  Apv apv({{0.0, 0.0}}, cfg.region_size, cfg.min_spacing);
  Vec wv(1);
  wv << cplx(std::sqrt(2.0 * cfg.p_max), 0.0);
  const FeasibilityReport rep =
      check_feasible(Beamformer(wv, 2.0 * cfg.p_max), apv, sc, cfg);
  CHECK_FALSE(rep.feasible);
  REQUIRE(rep.violations.size() == 1);
  CHECK(rep.violations[0].kind == ConstraintViolation::Kind::Power);
  CHECK(rep.violations[0].margin == doctest::Approx(cfg.p_max).epsilon(1e-9));
}

TEST_CASE("check_feasible: interference violations list the PR index") {
  ScenarioConfig cfg;
  cfg.it_threshold = 1e-30;  // effectively zero
  Rng rng(5, 0);
  const Scenario sc = generate_scenario(cfg, rng);
  Apv apv({{0.0, 0.0}, {0.0, 0.1}, {0.1, 0.0}, {0.1, 0.1}}, cfg.region_size,
          cfg.min_spacing);
  Vec wv = Vec::Constant(4, cplx(std::sqrt(cfg.p_max / 4), 0));
  const FeasibilityReport rep =
      check_feasible(Beamformer(wv, cfg.p_max), apv, sc, cfg);
  CHECK_FALSE(rep.feasible);
  CHECK(rep.violations.size() == 3);
  for (size_t k = 0; k < rep.violations.size(); ++k) {
    CHECK(rep.violations[k].kind == ConstraintViolation::Kind::Interference);
    CHECK(rep.violations[k].index == static_cast<int>(k) + 1);
    CHECK(rep.violations[k].margin > 0.0);
  }
}

TEST_CASE("check_feasible: boundary interference accepted within eps_it") {
  ScenarioConfig cfg;
  cfg.n_antennas = 1;
  cfg.k_prs = 1;
  // Small enough that the boundary-scaled w below stays within the budget.
  cfg.it_threshold = 1e-14;
  Rng rng(6, 0);
  const Scenario sc = generate_scenario(cfg, rng);
  Apv apv({{0.0, 0.0}}, cfg.region_size, cfg.min_spacing);
  const Vec h1 = channel_vector(apv, sc.pr_paths[0], cfg.wavelength);
  // Scale w so |h1^H w|^2 sits exactly at Gamma.
  Vec wv(1);
  wv << cplx(std::sqrt(cfg.it_threshold) / std::abs(h1(0)), 0.0);
  const FeasibilityReport rep =
      check_feasible(Beamformer(wv, cfg.p_max), apv, sc, cfg);
  CHECK(rep.feasible);
}
