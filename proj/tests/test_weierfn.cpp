#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "weierdim/error.hpp"
#include "weierdim/series.hpp"
#include "weierdim/theory.hpp"

using namespace weierdim;

namespace {

constexpr double kLn2 = std::numbers::ln2;

SequenceSpec single_term(double a, double b, double theta = 0.0) {
  return SequenceSpec(ExplicitTable{{std::log(a)}, {std::log(b)}, {theta}});
}

// a_n = 2^-n, b_n = 2^n: every frequency up to 2^50 is representable.
SequenceSpec dyadic_family(int terms) {
  ExplicitTable t;
  for (int n = 1; n <= terms; ++n) {
    t.log_a.push_back(-n * kLn2);
    t.log_b.push_back(n * kLn2);
  }
  return SequenceSpec(t);
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Io;
}

double log_ratio_slope(const HolderRow& a, const HolderRow& b) {
  return std::log(b.sup_V / a.sup_V) / std::log(b.r / a.r);
}

}  // namespace

TEST_CASE("base function examples") {
  const auto saw = make_sawtooth();
  CHECK(saw(0.0) == 0.0);
  CHECK(saw(0.5) == 0.5);
  CHECK(saw(0.75) == 0.25);
  CHECK(saw(-0.25) == 0.25);
  CHECK(saw(7.125) == 0.125);
  CHECK(saw.lipschitz() == 1.0);
  CHECK(saw.sup_abs() == 0.5);
  CHECK(saw.interval_lo() == 0.0);
  CHECK(saw.interval_hi() == 0.5);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 0.5);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng), y = u(rng);
    CHECK(std::abs(saw(x) - saw(y)) == doctest::Approx(std::abs(x - y)).epsilon(1e-12));
  }

  const auto sine = make_sine();
  CHECK(sine(0.25) == doctest::Approx(1.0));
  CHECK(sine.lipschitz() == doctest::Approx(2.0 * std::numbers::pi));
  CHECK(sine.slope_floor() == doctest::Approx(2.0 * std::numbers::pi * std::cos(0.4 * std::numbers::pi)));

  CHECK(certify_base(saw).empty());
  CHECK(certify_base(sine).empty());
  CHECK(certify_base(make_skewed_triangle(0.8)).empty());
}

TEST_CASE("custom base validation") {
  const auto tri = make_custom_base({{0.0, 0.0}, {0.25, 1.0}, {1.0, 0.0}});
  CHECK(tri(0.125) == doctest::Approx(0.5));
  CHECK(tri.interval_lo() == 0.0);
  CHECK(tri.interval_hi() == 0.25);
  CHECK(tri.lipschitz() == doctest::Approx(4.0));
  CHECK(certify_base(tri).empty());
  CHECK_THROWS_AS(make_custom_base({{0.0, 0.0}, {0.5, 1.0}, {1.0, 0.5}}), Error);  // not periodic
  CHECK_THROWS_AS(make_custom_base({{0.0, 0.0}, {0.5, 1.0}, {0.4, 0.0}}), Error);  // x not increasing
  CHECK_THROWS_AS(make_custom_base({{0.1, 0.0}, {1.0, 0.0}}), Error);
  CHECK_THROWS_AS(base_from_tag("square"), Error);
  CHECK(base_from_tag("skew:0.9").interval_hi() == doctest::Approx(0.9));
}

TEST_CASE("truncation by accuracy") {
  const auto saw = make_sawtooth();
  SUBCASE("Wingren family: least index and the frequency cap") {
    // Geometric tail with eta = 1/2: sup|g| a_{N+1} / (1 - eta) = 2^-(N+1).
    int least = 0;
    while (std::ldexp(1.0, -(least + 1)) > 1e-6) ++least;
    CHECK(least == 19);
    // b_6 = 2^64 exceeds 2^50 long before N = 19.
    CHECK(kind_of([&] { truncate_accuracy(wingren_family(40), saw, 1e-6); }) == ErrorKind::Infeasible);
  }
  SUBCASE("representable frequencies") {
    const auto s = truncate_accuracy(dyadic_family(60), saw, 1e-6);
    int least = 0;
    while (std::ldexp(1.0, -(least + 1)) > 1e-6) ++least;
    CHECK(s.depth == least);
    CHECK(s.tail_bound_value <= 1e-6);
    CHECK(tail_bound(dyadic_family(60), saw, s.depth - 1, s.eta) > 1e-6);
    CHECK(s.eta == doctest::Approx(0.5));
  }
}

TEST_CASE("truncation by depth") {
  const auto saw = make_sawtooth();
  const auto s = truncate_depth(wingren_family(40), saw, 3);
  CHECK(s.terms.size() == 3);
  CHECK(s.tail_bound_value == tail_bound(wingren_family(40), saw, 3, s.eta));
  CHECK(s.terms[2].b == 256.0);
  CHECK(s.terms[2].a == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(kind_of([&] { truncate_depth(SequenceSpec(SuperTower{0.5, 0.0, 0.0}), saw, 5); }) ==
        ErrorKind::Infeasible);
  CHECK(kind_of([&] { truncate_depth(wingren_family(40), saw, 6); }) == ErrorKind::Infeasible);
  for (const auto& t : truncate_depth(SequenceSpec(PowerTower{0.5, 0.0}), saw, 10).terms)
    CHECK(t.b <= kMaxNativeFrequency);
  SUBCASE("explicit eta is validated") {
    CHECK_THROWS_AS(truncate_depth(wingren_family(40), saw, 3, 0.3), Error);
    CHECK(truncate_depth(wingren_family(40), saw, 3, 0.6).eta == 0.6);
  }
}

TEST_CASE("native snapping") {
  CHECK(native_value(std::log(27.0)) == 27.0);
  CHECK(native_value(3125.0 * 0.0 + 5.0 * std::log(5.0)) == 3125.0);
  CHECK(native_value(std::log(2.5)) == doctest::Approx(2.5));
  CHECK(native_frequency(SequenceSpec(PowerTower{0.5, 0.0}), 7) == 823543.0);
}

TEST_CASE("eval examples") {
  const auto saw = make_sawtooth();
  CHECK(eval(truncate_depth(wingren_family(40), saw, 5), 0.0).value == 0.0);
  const auto one = truncate_depth(single_term(1.0, 3.0), saw, 1);
  CHECK(eval(one, 0.1).value == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(eval(one, 0.1).error_bound == 0.0);
  CHECK(eval(one, 0.1 + 1.0 / 3.0).value == doctest::Approx(eval(one, 0.1).value).epsilon(1e-14));
  const auto w = truncate_depth(wingren_family(40), saw, 4);
  CHECK(eval(w, 0.3).error_bound == w.tail_bound_value);
}

TEST_CASE("reduced phase") {
  CHECK(reduced_phase(3.0, 0.1, 0.0) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(reduced_phase(1024.0, -0.25, 0.0) == 0.0);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int i = 0; i < 1000; ++i) {
    const double b = std::ldexp(1.0, 1 + static_cast<int>(rng() % 49));
    const double x = u(rng);
    const double p = reduced_phase(b, x, 0.25);
    CHECK(p >= 0.0);
    CHECK(p < 1.0);
    // b is a power of two, so b x is exact and the oracle is exact as well.
    const double expect = (b * x + 0.25) - std::floor(b * x + 0.25);
    CHECK(std::abs(p - expect) <= 1e-15);
  }
}

TEST_CASE("evaluation error against a deeper truncation") {
  const auto saw = make_sawtooth();
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& spec : {SequenceSpec(PowerTower{0.5, 0.0}), dyadic_family(60), lipschitz_family(12)}) {
    const auto shallow = truncate_depth(spec, saw, 3);
    const auto deep = truncate_depth(spec, saw, 8, shallow.eta);
    for (int i = 0; i < 1000; ++i) {
      const double x = u(rng);
      CHECK(std::abs(eval(shallow, x).value - eval(deep, x).value) <= shallow.tail_bound_value * (1 + 1e-12));
    }
  }
}

TEST_CASE("periodicity with integer frequencies") {
  const auto saw = make_sawtooth();
  const auto s = truncate_depth(wingren_family(40), saw, 4);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    CHECK(std::abs(eval(s, x).value - eval(s, x + 3.0).value) <= 1e-9);
  }
}

TEST_CASE("oscillation examples") {
  const auto saw = make_sawtooth();
  const auto empty = truncate_depth(wingren_family(40), saw, 0);
  CHECK(oscillation(empty, 0.2, 0.1).V == 0.0);
  const auto one = truncate_depth(single_term(1.0, 1.0), saw, 1);
  const auto o = oscillation(one, 0.0, 1.0);
  CHECK(o.V == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(o.samples_used >= 64);
  // Linear piece: V = a b r exactly.
  CHECK(oscillation(one, 0.1, 0.2).V == doctest::Approx(0.2).epsilon(1e-12));
  const auto deep = truncate_depth(wingren_family(40), saw, 5);  // b_5 = 2^32
  CHECK(kind_of([&] { oscillation(deep, 0.0, 1.0); }) == ErrorKind::Infeasible);
  CHECK_THROWS_AS(oscillation(one, 0.0, 0.0), Error);
}

TEST_CASE("oscillation sample density") {
  const auto s = truncate_depth(wingren_family(40), make_sawtooth(), 4);  // b_4 = 65536
  const auto o = oscillation(s, 0.1, 1e-3);
  CHECK(o.samples_used >= std::max<long long>(64, 8 * static_cast<long long>(std::ceil(65536 * 1e-3))));
  CHECK(o.bias_bound > 0.0);
  CHECK(o.V >= 0.0);
  CHECK(o.sup - o.inf == doctest::Approx(o.V));
}

TEST_CASE("upper oscillation bound") {
  const auto saw = make_sawtooth();
  for (const auto& spec : {wingren_family(40), SequenceSpec(PowerTower{0.5, 0.0})}) {
    const auto s = truncate_depth(spec, saw, 4);
    const double cap = 4.0 * std::max(saw.lipschitz(), 2.0 * saw.sup_abs() / (1.0 - s.eta));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double c0 = 0.0;
    for (int k = 1; k < 4; ++k) {
      double d_k = 0.0;
      for (int i = 0; i < k; ++i) d_k += s.terms[i].a * s.terms[i].b;
      const double lo = std::log(1.0 / s.terms[k].b), hi = std::log(1.0 / s.terms[k - 1].b);
      for (int i = 0; i < 60; ++i) {
        const double r = std::exp(lo + (hi - lo) * u(rng));
        const double V = oscillation(s, u(rng), r).V;
        c0 = std::max(c0, V / (d_k * r + s.a_after(k)));
      }
    }
    CHECK(c0 > 0.0);
    CHECK(c0 <= cap);
  }
}

TEST_CASE("holder estimate examples") {
  const auto saw = make_sawtooth();
  SUBCASE("a_n = b_n^-1/2, b_n = n^n at depth 6") {
    const auto s = truncate_depth(SequenceSpec(PowerTower{0.5, 0.0}), saw, 6);
    std::vector<double> scales;
    for (int n = 2; n <= 5; ++n) scales.push_back(1.0 / s.terms[n - 1].b);
    const auto est = holder_estimate(s, scales, 128);
    CHECK(est.alpha_hat == doctest::Approx(0.5).epsilon(0.2));
    // Two-sidedness between consecutive generation scales.
    for (std::size_t i = 1; i < est.rows.size(); ++i) {
      const double slope = log_ratio_slope(est.rows[i - 1], est.rows[i]);
      CHECK(slope >= 0.35);
      CHECK(slope <= 0.65);
    }
  }
  SUBCASE("Lipschitz family") {
    const auto s = truncate_depth(lipschitz_family(12), saw, 5);
    const auto [lo, hi] = validity_window(s);
    std::vector<double> scales;
    for (double r = hi; r >= lo * (1.0 - 1e-12); r /= 2.0) scales.push_back(r);
    const auto est = holder_estimate(s, scales, 64);
    CHECK(std::abs(est.alpha_hat - 1.0) <= 0.05);
  }
  SUBCASE("single term: V is linear below the wavelength") {
    const auto one = truncate_depth(single_term(1.0, 4.0), saw, 1);
    std::vector<HolderRow> rows;
    for (double r = 1.0 / 16; r >= 1.0 / 4096; r /= 2) rows.push_back({r, oscillation(one, 0.01, r).V});
    for (std::size_t i = 1; i < rows.size(); ++i)
      CHECK(log_ratio_slope(rows[i - 1], rows[i]) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(kind_of([&] { holder_estimate(one, {1.0 / 16, 1.0 / 32}); }) == ErrorKind::Validity);
  }
  SUBCASE("scales outside the validity window") {
    const auto s = truncate_depth(wingren_family(40), saw, 3);
    CHECK(kind_of([&] { holder_estimate(s, {1e-3, 1e-4}); }) == ErrorKind::Validity);
    CHECK(kind_of([&] { holder_estimate(s, {0.9, 0.1}); }) == ErrorKind::Validity);
  }
}
