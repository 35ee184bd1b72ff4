#include <doctest.h>

#include <cmath>
#include <random>

#include "support/oracles.hpp"
#include "wits/core.hpp"
#include "wits/gaussian_info.hpp"

using namespace wits;

namespace {

template <class F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected wits::Error");
  return Errc::InvalidArgument;
}

}  // namespace

TEST_CASE("validate_params accepts positive variances") {
  const auto p = validate_params(0.1, 0.01);
  CHECK(p.Q() == 0.1);
  CHECK(p.N() == 0.01);
  CHECK_NOTHROW(validate_params(1.0, 1.0));
}

TEST_CASE("validate_params rejects nonpositive or non-finite variances") {
  CHECK(code_of([] { validate_params(0.0, 0.01); }) == Errc::NonPositiveVariance);
  CHECK(code_of([] { validate_params(0.1, -1.0); }) == Errc::NonPositiveVariance);
  CHECK(code_of([] { validate_params(NAN, 1.0); }) == Errc::NonPositiveVariance);
  CHECK(code_of([] { validate_params(INFINITY, 1.0); }) == Errc::NonPositiveVariance);
}

TEST_CASE("error messages carry the code name") {
  try {
    validate_params(0.0, 1.0);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("NonPositiveVariance") == 0);
  }
}

TEST_CASE("CorrelationTriple bounds and PSD tolerance") {
  CHECK(code_of([] { CorrelationTriple::make(1.1, 0, 0); }) == Errc::InvalidCorrelation);
  CHECK(code_of([] { CorrelationTriple::make(0, NAN, 0); }) == Errc::InvalidCorrelation);
  // Pairwise fine, jointly impossible.
  CHECK(code_of([] { CorrelationTriple::make(0.9, 0.9, -0.9); }) == Errc::InvalidCorrelation);

  SUBCASE("slightly negative margin is clamped to zero") {
    // r1^2 + r2^2 = 1 up to rounding: margin of order -1e-16.
    const double r1 = 0.6, r2 = std::sqrt(1.0 - 0.36) + 1e-15;
    REQUIRE(correlation_psd_margin(r1, r2, 0.0) < 0.0);
    const auto t = CorrelationTriple::make(r1, r2, 0.0);
    CHECK(t.psd_margin() == 0.0);
  }
  SUBCASE("margin just beyond the tolerance is rejected") {
    const double r2 = std::sqrt(1.0 - 0.36 + 1e-10);
    CHECK(code_of([&] { CorrelationTriple::make(0.6, r2, 0.0); }) == Errc::InvalidCorrelation);
  }
}

TEST_CASE("accepted triples give a PSD covariance for any scales") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0), pos(0.01, 5.0);
  int accepted = 0;
  for (int i = 0; i < 2000; ++i) {
    const double r1 = u(gen), r2 = u(gen), r3 = u(gen);
    if (correlation_psd_margin(r1, r2, r3) < 0.0) continue;
    ++accepted;
    const auto t = CorrelationTriple::make(r1, r2, r3);
    const auto params = ProblemParams::make(pos(gen), pos(gen));
    const double P = pos(gen), V = pos(gen);
    const auto K = covariance_x0_w2_u1(t, P, params, V);
    Eigen::MatrixXd m(3, 3);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) m(a, b) = K(a, b);
    const double scale = params.Q() * V * P;
    CHECK(K.det() >= -1e-12 * scale);
    CHECK(K.det() == doctest::Approx(oracle::lu_det(m)).epsilon(1e-9).scale(scale));
    CHECK(K.det() == doctest::Approx(scale * t.psd_margin()).epsilon(1e-9).scale(scale));
  }
  CHECK(accepted > 500);
}

TEST_CASE("strategy names round-trip") {
  for (Strategy s : {Strategy::Linear, Strategy::Gaussian, Strategy::TwoPoint, Strategy::Dpc,
                     Strategy::LinDpc, Strategy::Coord}) {
    CHECK(parse_strategy(to_string(s)) == s);
  }
  CHECK(parse_strategy("lin+dpc") == Strategy::LinDpc);
  CHECK(code_of([] { parse_strategy("bogus"); }) == Errc::UnknownStrategy);
}
