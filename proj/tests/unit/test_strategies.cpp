#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support/oracles.hpp"
#include "wits/gaussian_info.hpp"
#include "wits/strategies.hpp"

using namespace wits;

namespace {
const auto kParams = ProblemParams::make(0.1, 0.01);
const auto kUnit = ProblemParams::make(1.0, 1.0);

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

TEST_CASE("mmse_linear") {
  CHECK(mmse_linear(0.1, kParams) == 0.0);
  CHECK(mmse_linear(0.3, kParams) == 0.0);
  CHECK(mmse_linear(0.0, kParams) == doctest::Approx(0.1 * 0.01 / 0.11).epsilon(1e-14));
  CHECK(mmse_linear(0.0, kParams) == doctest::Approx(0.0090909).epsilon(1e-5));
  const double d2 = std::pow(std::sqrt(0.1) - std::sqrt(0.04), 2);
  CHECK(mmse_linear(0.04, kParams) == doctest::Approx(d2 * 0.01 / (d2 + 0.01)).epsilon(1e-14));
  CHECK(mmse_linear(0.04, kParams) == doctest::Approx(0.00575).epsilon(1e-3));
  CHECK(code_of([] { mmse_linear(-1.0, kParams); }) == Errc::InvalidArgument);
}

TEST_CASE("linear_policy_for_power") {
  auto p = linear_policy_for_power(0.0, kParams);
  CHECK(p.a == 0.0);
  CHECK(p.b == 0.0);
  p = linear_policy_for_power(0.1, kParams);
  CHECK(p.a == -1.0);
  CHECK(p.b == 0.0);
  p = linear_policy_for_power(0.2, kParams);
  CHECK(p.a == -1.0);
  CHECK(p.b == doctest::Approx(std::sqrt(0.1)));
  for (double P : linspace(0.0, 0.3, 31)) {
    p = linear_policy_for_power(P, kParams);
    CHECK(p.a * p.a * 0.1 + p.b * p.b == doctest::Approx(P).epsilon(1e-12).scale(1e-12));
  }
}

TEST_CASE("p1_p2") {
  const auto b = p1_p2(kParams);
  // Extended-precision values.
  CHECK(b.P1 == doctest::Approx(0.0012701665379258311482).epsilon(1e-12));
  CHECK(b.P2 == doctest::Approx(0.078729833462074168852).epsilon(1e-12));
  CHECK(code_of([] { p1_p2(ProblemParams::make(0.04, 0.01)); }) == Errc::RegimeNotApplicable);
  const auto lim = p1_p2(ProblemParams::make(1.0, 1e-9));
  CHECK(lim.P1 == doctest::Approx(0.0).scale(1e-8));
  CHECK(lim.P2 == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("mmse_gaussian") {
  CHECK(mmse_gaussian(0.04, kParams) == doctest::Approx(0.005).epsilon(1e-12));
  const auto b = p1_p2(kParams);
  CHECK(std::abs(mmse_gaussian(b.P1, kParams) - mmse_linear(b.P1, kParams)) <= 1e-9);
  CHECK(std::abs(mmse_gaussian(b.P2, kParams) - mmse_linear(b.P2, kParams)) <= 1e-9);
  for (double P : linspace(0.0, 1.0, 21)) CHECK(mmse_gaussian(P, kUnit) == mmse_linear(P, kUnit));
}

TEST_CASE("Gaussian optimum is the chord between the tangent linear points") {
  const auto b = p1_p2(kParams);
  const double s1 = mmse_linear(b.P1, kParams), s2 = mmse_linear(b.P2, kParams);
  for (double P : linspace(b.P1, b.P2, 101)) {
    const double chord = s1 + (s2 - s1) * (P - b.P1) / (b.P2 - b.P1);
    CHECK(std::abs(mmse_gaussian(P, kParams) - chord) <= 1e-9);
  }
}

TEST_CASE("global ordering of the costs") {
  for (auto params : {kParams, kUnit, ProblemParams::make(2.0, 0.1)}) {
    for (double P : linspace(0.0, 1.5 * params.Q(), 61)) {
      CAPTURE(P);
      const double lin = mmse_linear(P, params);
      const double gau = mmse_gaussian(P, params);
      const double dpc = mmse_dpc(P, params);
      const double ld = mmse_lin_dpc(P, params).mmse;
      CHECK(gau <= lin + 1e-15);
      CHECK(ld <= dpc + 1e-15);
      CHECK(ld <= lin + 1e-15);
      for (double v : {lin, gau, dpc, ld}) CHECK(v >= 0.0);
    }
  }
}

TEST_CASE("two_point_costs") {
  const double Q = 0.1;
  auto c = two_point_costs({0.0}, kParams);
  CHECK(c.P == Q);
  CHECK(c.S == 0.0);
  const double amin = std::sqrt(2 * Q / std::numbers::pi);
  c = two_point_costs({amin}, kParams);
  CHECK(std::abs(c.P - Q * (1 - 2 / std::numbers::pi)) <= 1e-12);
  CHECK(c.P == doctest::Approx(0.0363380).epsilon(1e-6));
  // Extended-precision values.
  CHECK(two_point_costs({std::sqrt(Q)}, kParams).S == doctest::Approx(0.00024113147354122573302).epsilon(1e-9));
  CHECK(two_point_costs({0.05}, kParams).S == doctest::Approx(0.0019898643359162492186).epsilon(1e-9));
  CHECK(code_of([] { two_point_costs({-0.1}, kParams); }) == Errc::InvalidArgument);
}

TEST_CASE("two_point_costs survives tiny noise") {
  // a / N far above the cosh overflow threshold.
  const auto p = ProblemParams::make(1.0, 1e-4);
  const auto c = two_point_costs({1.0}, p);
  CHECK(std::isfinite(c.S));
  CHECK(c.S >= 0.0);
  CHECK(c.S < 1e-100);
}

TEST_CASE("two_point power is decreasing then increasing") {
  const double amin = std::sqrt(2 * 0.1 / std::numbers::pi);
  double prev = INFINITY;
  for (double a : linspace(0.0, amin, 50)) {
    const double P = two_point_costs({a}, kParams).P;
    CHECK(P < prev);
    prev = P;
  }
  for (double a : linspace(amin, 1.0, 50)) {
    const double P = two_point_costs({a}, kParams).P;
    CHECK(P >= prev);
    prev = P;
  }
}

TEST_CASE("two_point_decoder") {
  CHECK(two_point_decoder(0.0, 0.3, 0.01) == 0.0);
  CHECK(two_point_decoder(1e3, 0.3, 0.01) == 0.3);
  for (double y : linspace(-2, 2, 41)) CHECK(two_point_decoder(-y, 0.3, 0.01) == -two_point_decoder(y, 0.3, 0.01));
}

TEST_CASE("two_point_a_for_power inverts the power on the increasing branch") {
  const double amin = std::sqrt(2 * 0.1 / std::numbers::pi);
  const double pmin = two_point_min_power(kParams);
  for (double P : linspace(pmin, 0.5, 40)) {
    const double a = two_point_a_for_power(P, kParams);
    CHECK(a >= amin);
    CHECK(two_point_costs({a}, kParams).P == doctest::Approx(P).epsilon(1e-12));
    CHECK(a == doctest::Approx(amin + std::sqrt(P - pmin)).epsilon(1e-12));
  }
  CHECK(code_of([&] { two_point_a_for_power(pmin * 0.99, kParams); }) == Errc::EmptyFeasibleSet);
}

TEST_CASE("p_star") {
  const double ps = p_star(kParams);
  CHECK(std::abs(ps * ps * (ps + 0.11) - 1e-5) <= 1e-12);
  auto cubic = [](double P) { return P * P * (P + 0.11) - 1e-5; };
  CHECK(ps == doctest::Approx(oracle::bisection(cubic, 0, 1)).epsilon(1e-12));
  CHECK(ps == doctest::Approx(0.0091607978309961604257).epsilon(1e-12));
  CHECK(detail::p_star_raw(0.1, 0.0) == 0.0);
  CHECK(detail::p_star_raw(0.0, 0.01) == 0.0);
}

TEST_CASE("mmse_dpc") {
  const double Q = 0.1, N = 0.01;
  CHECK(mmse_dpc(0.0, kParams) == doctest::Approx(Q * N / (Q + N)).epsilon(1e-12));
  CHECK(mmse_dpc(0.0, kParams) == doctest::Approx(mmse_linear(0.0, kParams)).epsilon(1e-12));
  CHECK(mmse_dpc(p_star(kParams), kParams) <= 1e-10);
  for (double P : linspace(p_star(kParams) * 1.0001, 1.0, 20)) CHECK(mmse_dpc(P, kParams) == 0.0);
  for (double P : linspace(0.0, 0.5, 50)) {
    CHECK(std::abs(dpc_constraint_residual(P, dpc_alpha_star(P, kParams), kParams)) <= 1e-10);
  }
}

TEST_CASE("mmse_lin_dpc") {
  const double Q = 0.1, N = 0.01;
  CHECK(mmse_lin_dpc(0.0, kParams).mmse == doctest::Approx(Q * N / (Q + N)).epsilon(1e-12));
  // The rho = -1 end of the objective is the linear scheme.
  for (double P : linspace(0.0, Q, 11)) {
    const double amp = std::sqrt(Q) - std::sqrt(P);
    CHECK(detail::mmse_dpc_raw(0.0, amp * amp, N) == doctest::Approx(mmse_linear(P, kParams)).epsilon(1e-12));
  }
  for (double P : linspace(0.0, 0.2, 41)) {
    const auto r = mmse_lin_dpc(P, kParams);
    CHECK(r.mmse <= std::min(mmse_dpc(P, kParams), mmse_linear(P, kParams)) + 1e-15);
    CHECK(std::abs(r.rho_star) <= 1.0);
  }
  const auto s = mmse_lin_dpc(0.004, kParams, Execution::Serial);
  const auto p = mmse_lin_dpc(0.004, kParams, Execution::Parallel);
  CHECK(s.mmse == p.mmse);
  CHECK(s.rho_star == p.rho_star);
}

TEST_CASE("curve") {
  const auto grid = linspace(0.0, 0.1, 50);
  SUBCASE("linear is nonincreasing") {
    const auto c = curve(Strategy::Linear, kParams, grid);
    REQUIRE(c.points.size() == 50);
    for (std::size_t i = 1; i < c.points.size(); ++i) {
      CHECK(c.points[i].P > c.points[i - 1].P);
      CHECK(*c.points[i].S <= *c.points[i - 1].S);
    }
  }
  SUBCASE("gaussian is affine on [P1, P2]") {
    const auto b = p1_p2(kParams);
    const auto g = linspace(0.0, 0.1, 101);
    const auto c = curve(Strategy::Gaussian, kParams, g);
    for (const auto& pt : c.points) {
      if (pt.P >= b.P1 && pt.P <= b.P2) CHECK(*pt.S == doctest::Approx(0.01 * (0.09 - pt.P) / 0.1).epsilon(1e-12));
    }
  }
  SUBCASE("gaussian and coord are absent above Q") {
    const std::vector<double> g{0.05, 0.2};
    for (Strategy s : {Strategy::Gaussian, Strategy::Coord}) {
      const auto c = curve(s, kParams, g);
      CHECK(c.points[0].feasible);
      CHECK_FALSE(c.points[1].feasible);
      CHECK_FALSE(c.points[1].S.has_value());
      CHECK_FALSE(c.points[1].reason.empty());
    }
    const auto lin = curve(Strategy::Linear, kParams, g);
    CHECK(lin.points[1].feasible);
  }
  SUBCASE("coord infeasible points are flagged, not thrown") {
    const auto c = curve(Strategy::Coord, kParams, linspace(0.0, 0.01, 3));
    for (const auto& pt : c.points) CHECK_FALSE(pt.feasible);
  }
  SUBCASE("bad grids") {
    const std::vector<double> unsorted{0.1, 0.05};
    const std::vector<double> negative{-0.1, 0.05};
    CHECK(code_of([&] { curve(Strategy::Linear, kParams, unsorted); }) == Errc::InvalidArgument);
    CHECK(code_of([&] { curve(Strategy::Linear, kParams, negative); }) == Errc::InvalidArgument);
  }
  SUBCASE("serial and parallel curves are identical") {
    for (Strategy s : {Strategy::Linear, Strategy::Gaussian, Strategy::TwoPoint, Strategy::Dpc, Strategy::LinDpc}) {
      const auto a = curve(s, kParams, grid, {}, Execution::Serial);
      const auto b = curve(s, kParams, grid, {}, Execution::Parallel);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(a.points[i].S == b.points[i].S);
        CHECK(a.points[i].aux1 == b.points[i].aux1);
      }
    }
  }
}

TEST_CASE("two_point_locus is ordered by amplitude") {
  const auto a = linspace(0.0, 3 * std::sqrt(0.1), 61);
  const auto c = two_point_locus(kParams, a);
  CHECK(c.sweep == SweepParameter::Amplitude);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(c.points[i].sweep == a[i]);
    CHECK(*c.points[i].aux1 == a[i]);
    CHECK(c.points[i].P == two_point_costs({a[i]}, kParams).P);
  }
}

TEST_CASE("compare") {
  const auto grid = linspace(0.0, 0.1, 11);
  const auto t = compare(kUnit, grid);
  REQUIRE(t.columns.size() == 6);
  const auto& lin = t.columns[0];
  const auto& gau = t.columns[1];
  CHECK(lin.strategy == Strategy::Linear);
  CHECK(gau.strategy == Strategy::Gaussian);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(*lin.points[i].S == *gau.points[i].S);
}
