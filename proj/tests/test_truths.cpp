#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "seqcred/fourier.hpp"
#include "seqcred/sequence_model.hpp"
#include "seqcred/truths.hpp"

using namespace seqcred;

TEST_CASE("poly decay profiles") {
  TruthSpec zero{PolyDecay{1.0, 0.0}, 64};
  const auto zeros = generate_truth(zero);
  for (double v : zeros.coeffs()) CHECK(v == 0.0);

  TruthSpec unitc{PolyDecay{1.0, 1.0}, 64};
  const auto theta = generate_truth(unitc);
  CHECK(theta.coeff(4) == doctest::Approx(0.125).epsilon(1e-15));  // 4^{-1.5}
  CHECK(theta.coeff(1) == 1.0);

  TruthSpec alt{AlternatingDecay{1.0, 1.0}, 64};
  const auto flip = generate_truth(alt);
  CHECK(flip.coeff(1) == -1.0);
  CHECK(flip.coeff(2) == doctest::Approx(std::pow(2.0, -1.5)).epsilon(1e-15));
  CHECK(std::abs(flip.coeff(3)) == doctest::Approx(std::abs(theta.coeff(3))).epsilon(1e-15));
}

TEST_CASE("random holder members sit exactly on the ball boundary") {
  for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
    TruthSpec spec{RandomHolder{1.0, 1.0, seed}, 256};
    const auto theta = generate_truth(spec);
    CHECK(holder_norm(theta, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(classify_truth(theta, 1.0, 1.0));
    // determinism in the seed
    const auto again = generate_truth(spec);
    CHECK(theta.coeffs() == again.coeffs());
  }
  TruthSpec big{RandomHolder{0.5, 7.5, 3}, 128};
  CHECK(holder_norm(generate_truth(big), 0.5) == doctest::Approx(7.5).epsilon(1e-12));
}

TEST_CASE("classify_truth") {
  CHECK(classify_truth(CoefficientSequence::zeros(8), 1.0, 0.1));
  const double r = 0.7;
  std::vector<double> bad{r + 1e-9};
  CHECK_FALSE(classify_truth(CoefficientSequence(bad), 2.0, r));
  std::vector<double> good{r};
  CHECK(classify_truth(CoefficientSequence(good), 2.0, r));  // boundary inclusive
}

TEST_CASE("poly decay straddles the Hoelder threshold alpha - 1/2") {
  // theta_i = i^{-2} (PolyDecay alpha = 1.5): in B(alpha') iff alpha' < 1.0
  TruthSpec spec{PolyDecay{1.5, 1.0}, 4096};
  const auto theta = generate_truth(spec);
  // direct summation oracle for the truncated norms
  double conv = 0.0, div = 0.0;
  for (std::size_t i = 1; i <= 4096; ++i) {
    conv += std::pow(static_cast<double>(i), 0.75 - 2.0);
    div += std::pow(static_cast<double>(i), 1.25 - 2.0);
  }
  CHECK(holder_norm(theta, 0.75) == doctest::Approx(conv).epsilon(1e-12));
  CHECK(holder_norm(theta, 1.25) == doctest::Approx(div).epsilon(1e-12));
  const double r = 6.0;  // above zeta(1.25) ~ 4.6, far below the divergent partial sum ~ 31
  CHECK(classify_truth(theta, 0.75, r));
  CHECK_FALSE(classify_truth(theta, 1.25, r));
}

TEST_CASE("local bump parameters are validated") {
  CHECK_THROWS_AS(generate_truth(TruthSpec{LocalBump{0.5, 0.0, 1.0}, 64}), std::invalid_argument);
  CHECK_THROWS_AS(generate_truth(TruthSpec{LocalBump{0.05, 0.1, 1.0}, 64}), std::invalid_argument);
  CHECK_THROWS_AS(generate_truth(TruthSpec{LocalBump{0.97, 0.1, 1.0}, 64}), std::invalid_argument);
}

TEST_CASE("local bump projection reconstructs the bump") {
  const LocalBump bump{0.5, 0.15, 2.0};
  TruthSpec spec{bump, 1024};
  const auto theta = generate_truth(spec);

  const Grid g(8192);
  const auto values = synthesize(theta, g);
  const double w2 = bump.width * bump.width;
  double worst = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double d = g.point(j) - bump.center;
    const double r2 = w2 - d * d;
    const double f = r2 > 0.0 ? bump.height * std::exp(-w2 / r2) : 0.0;
    worst = std::max(worst, std::abs(values[j] - f));
  }
  CHECK(worst < 1e-3 * bump.height);

  // peak value height/e at the center
  const auto mid = synthesize(theta, Grid(2));  // x = 0.5 is grid point 1
  CHECK(mid[1] == doctest::Approx(bump.height / std::exp(1.0)).epsilon(1e-3));
}
