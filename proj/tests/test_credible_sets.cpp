#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "seqcred/credible_sets.hpp"
#include "seqcred/harness.hpp"

using namespace seqcred;

namespace {

PosteriorState state_with_variances(std::vector<double> variances) {
  PosteriorState state;
  state.means.assign(variances.size(), 0.0);
  state.variances = std::move(variances);
  state.alpha = 1.0;
  state.n = 100.0;
  return state;
}

PosteriorState model_state(double alpha, double n, std::size_t n_trunc) {
  const ModelConfig model(n, KappaSpec::direct(), n_trunc);
  return posterior_update(CoefficientSequence::zeros(n_trunc), PriorSpec{alpha}, model);
}

}  // namespace

TEST_CASE("argument validation") {
  const auto state = state_with_variances({1.0, 0.1});
  const Grid g(64);
  CHECK_THROWS_AS(sup_radius(state, 0.5, g, 100, RandomStream(1)), std::invalid_argument);
  CHECK_THROWS_AS(sup_radius(state, 0.6, g, 20000, RandomStream(1)), std::invalid_argument);
  CHECK_THROWS_AS(sup_radius(state, 0.0, g, 20000, RandomStream(1)), std::invalid_argument);
  CHECK_THROWS_AS(l2_radius(state, -0.1, 20000, RandomStream(1)), std::invalid_argument);
}

TEST_CASE("single active coordinate gives the half-normal quantile") {
  const auto state = state_with_variances({1.0, 1e-30, 1e-30});
  const Grid g(64);
  const double expected_median = oracles::normal_quantile(0.75);  // median of |N(0,1)|

  const auto sup = sup_radius_detail(state, 0.5, g, 40000, RandomStream(7));
  CHECK(sup.radius == doctest::Approx(expected_median).epsilon(0.02));
  CHECK(std::abs(sup.radius - expected_median) <= 3.0 * sup.mc_se);

  const auto ball = l2_radius_detail(state, 0.5, 40000, RandomStream(8));
  CHECK(std::abs(ball.radius - expected_median) <= 3.0 * ball.mc_se);

  // the variance cutoff kept only the first coordinate
  CHECK(sup.meta.effective_coords == 1);
}

TEST_CASE("flat variances reproduce chi-square quantiles") {
  for (std::size_t k : {1u, 5u, 50u}) {
    const double v = 0.04;
    const auto state = state_with_variances(std::vector<double>(k, v));
    for (double gamma : {0.5, 0.25}) {
      const auto est = l2_radius_detail(state, gamma, 60000, RandomStream(17 + k));
      const double expected = std::sqrt(v * oracles::chi_square_quantile(k, 1.0 - gamma));
      CHECK(std::abs(est.radius - expected) <= 3.0 * est.mc_se);
    }
  }
}

TEST_CASE("radius scales exactly with the coordinate scale under a shared stream") {
  const std::vector<double> base{0.5, 0.25, 0.05, 0.01, 0.002};
  std::vector<double> quadrupled = base;
  for (double& v : quadrupled) v *= 4.0;

  const Grid g(32);
  const RandomStream rng(23, 5);
  const double r1 = sup_radius(state_with_variances(base), 0.5, g, 20000, rng);
  const double r2 = sup_radius(state_with_variances(quadrupled), 0.5, g, 20000, rng);
  CHECK(r2 == 2.0 * r1);  // exact: power-of-two scaling, common draws

  const double b1 = l2_radius(state_with_variances(base), 0.25, 20000, rng);
  const double b2 = l2_radius(state_with_variances(quadrupled), 0.25, 20000, rng);
  CHECK(b2 == 2.0 * b1);

  // non-dyadic scaling agrees to rounding
  std::vector<double> scaled = base;
  const double c = 1.7;
  for (double& v : scaled) v *= c * c;
  const double r3 = sup_radius(state_with_variances(scaled), 0.5, g, 20000, rng);
  CHECK(r3 == doctest::Approx(c * r1).epsilon(1e-12));
}

TEST_CASE("radius is nonincreasing in gamma") {
  const auto state = model_state(1.0, 500.0, 128);
  const Grid g(128);
  const RandomStream rng(29);
  double prev = 1e300;
  for (double gamma : {0.05, 0.1, 0.25, 0.5}) {
    const double r = sup_radius(state, gamma, g, 20000, rng);
    CHECK(r <= prev);
    prev = r;
  }
}

TEST_CASE("sup radius ignores the data: bit-identical across datasets") {
  const ModelConfig model(200.0, KappaSpec::direct(), 64);
  const auto y1 = sample_data(CoefficientSequence::zeros(64), model, RandomStream(1));
  const auto y2 = sample_data(CoefficientSequence::unit(3), model, RandomStream(2));
  const auto s1 = posterior_update(y1, PriorSpec{1.0}, model);
  const auto s2 = posterior_update(y2, PriorSpec{1.0}, model);
  REQUIRE(s1.means != s2.means);

  const Grid g(128);
  const RandomStream rng(31, 9);
  CHECK(sup_radius(s1, 0.5, g, 10000, rng) == sup_radius(s2, 0.5, g, 10000, rng));
  CHECK(l2_radius(s1, 0.5, 10000, rng) == l2_radius(s2, 0.5, 10000, rng));
}

TEST_CASE("radius is identical for any worker count") {
  const auto state = model_state(0.75, 300.0, 96);
  const Grid g(64);
  const RandomStream rng(37);
  const double serial = sup_radius(state, 0.25, g, 12000, rng, 1);
  const double threaded = sup_radius(state, 0.25, g, 12000, rng, 3);
  CHECK(serial == threaded);
}

TEST_CASE("inflate") {
  auto state = state_with_variances({0.04});
  CredibleSet set = make_credible_set(state, 0.5, NormKind::kL2, std::nullopt, 10000,
                                      RandomStream(5));
  CHECK(set.radius > 0.0);
  CHECK(set.inflation == 1.0);

  const CredibleSet same = inflate(set, 1.0);
  CHECK(same.radius == set.radius);
  CHECK(same.effective_radius() == set.radius);

  set.radius = 0.2;
  const CredibleSet tripled = inflate(set, 3.0);
  CHECK(tripled.effective_radius() == doctest::Approx(0.6).epsilon(1e-15));
  CHECK_THROWS_AS(inflate(set, 0.99), std::invalid_argument);
}

TEST_CASE("membership: center, boundary, nesting in M") {
  CredibleSet set{CoefficientSequence::zeros(4)};
  set.norm_kind = NormKind::kL2;
  set.radius = 0.25;
  set.credibility = 0.5;

  CHECK(contains_truth(set, CoefficientSequence::zeros(4)));
  // boundary inclusive: truth e1 * r at effective radius r
  std::vector<double> boundary{0.25};
  CHECK(contains_truth(set, CoefficientSequence(boundary)));
  std::vector<double> outside{0.25 + 1e-12};
  CHECK_FALSE(contains_truth(set, CoefficientSequence(outside)));

  // anything covered at M = 1 stays covered at M = 3
  CHECK(contains_truth(inflate(set, 3.0), CoefficientSequence(boundary)));
  CHECK(contains_truth(inflate(set, 3.0), CoefficientSequence(outside)));
}

TEST_CASE("sup membership matches a dense-grid evaluation") {
  CredibleSet set{CoefficientSequence::zeros(4)};
  set.norm_kind = NormKind::kSupGrid;
  set.grid = Grid(8);
  set.radius = 0.9;

  // truth = t * e2: sup over grid of sqrt2 t |cos| with max |cos| = 1 at x=0
  for (double t : {0.1, 0.63, 0.64, 1.0}) {
    std::vector<double> coeffs(2, 0.0);
    coeffs[1] = t;
    const CoefficientSequence truth(coeffs);
    const bool expected = std::sqrt(2.0) * t <= set.radius;
    CHECK(contains_truth(set, truth) == expected);
    // dense-grid oracle
    double dense = 0.0;
    for (int j = 0; j < 4096; ++j) {
      dense = std::max(dense, std::abs(std::sqrt(2.0) * t *
                                       std::cos(2.0 * M_PI * j / 4096.0)));
    }
    CHECK(norm_distance(set, truth) == doctest::Approx(dense).epsilon(1e-9));
  }
}

TEST_CASE("credibility calibration: fresh draws land inside at rate 1 - gamma") {
  const auto state = model_state(1.0, 100.0, 128);
  const Grid g(128);
  for (double gamma : {0.5, 0.25}) {
    for (NormKind kind : {NormKind::kSupGrid, NormKind::kL2}) {
      const std::optional<Grid> grid =
          kind == NormKind::kSupGrid ? std::optional<Grid>(g) : std::nullopt;
      const CredibleSet set =
          make_credible_set(state, gamma, kind, grid, 40000, RandomStream(43));
      const double frac = calibration_fraction(state, set, 20000, RandomStream(44));
      CHECK(std::abs(frac - (1.0 - gamma)) <= 3.0 * calibration_se(gamma, 20000, 40000));
    }
  }
}

TEST_CASE("borell envelope dominates the sup radius") {
  RandomStream maker(47);
  const Grid g(64);
  for (int rep = 0; rep < 6; ++rep) {
    std::vector<double> variances(32);
    for (double& v : variances) v = std::exp(-4.0 * maker.uniform());
    const auto state = state_with_variances(variances);
    for (double gamma : {0.5, 0.25}) {
      const auto est = sup_radius_detail(state, gamma, g, 20000, RandomStream(100 + rep));
      const double bound = borell_radius_bound(state, gamma, g, 20000, RandomStream(100 + rep));
      CHECK(bound >= est.radius - 3.0 * est.mc_se);
    }
  }
  // gamma monotonicity of the bound
  const auto state = state_with_variances({0.3, 0.2, 0.1});
  const double loose = borell_radius_bound(state, 0.5, g, 20000, RandomStream(1));
  const double tight = borell_radius_bound(state, 0.1, g, 20000, RandomStream(1));
  CHECK(tight > loose);
}

TEST_CASE("slepian probe: pointwise domination and decay in n") {
  const Grid g(256);
  const auto probe_at = [&](double n) {
    return slepian_lower_probe(model_state(1.0, n, 256), 1.0, n, g, 20000, RandomStream(53));
  };
  const auto p3 = probe_at(1e3);
  const auto p4 = probe_at(1e4);

  // the sup dominates any single grid point
  const auto state = model_state(1.0, 1e3, 256);
  double vmax = 0.0;
  for (double v : state.variances) vmax = std::max(vmax, v);
  CHECK(p3.e_sup >= std::sqrt(vmax) * std::sqrt(2.0 / M_PI) * 0.98);

  // common random numbers across n: strictly smaller sup at larger n
  CHECK(p4.e_sup < p3.e_sup);
  CHECK(p3.rate_ratio > 0.0);
}
