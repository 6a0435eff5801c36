#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "weierdim/error.hpp"
#include "weierdim/theory.hpp"

using namespace weierdim;

namespace {

constexpr double kLn2 = std::numbers::ln2;

// Random table with d_{k+1} < b_{k+1} and moderate frequency ratios so that
// m_k stays within exhaustive reach.
SequenceSpec random_spec(std::mt19937_64& rng, int terms = 8) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ExplicitTable t;
  double lb = std::log(2.0 + 10.0 * u(rng));
  double la = -lb * (0.2 + 0.7 * u(rng));
  for (int n = 1; n <= terms; ++n) {
    t.log_a.push_back(la);
    t.log_b.push_back(lb);
    const double step = std::log(3.0 + 2e5 * u(rng) * u(rng));
    lb += step;
    la -= step * (0.2 + 0.7 * u(rng));
  }
  return SequenceSpec(t);
}

double rel_diff(double x, double y) { return std::abs(x - y) / std::max(std::abs(y), 1e-300); }

}  // namespace

TEST_CASE("alpha_beta_dims examples") {
  auto [h, b] = alpha_beta_dims(0.5, 3.0);
  CHECK(h == doctest::Approx(1.25));
  CHECK(b == doctest::Approx(1.5));
  std::tie(h, b) = alpha_beta_dims(1.0, 7.0);
  CHECK(h == 1.0);
  CHECK(b == 1.0);
  std::tie(h, b) = alpha_beta_dims(0.5, std::numeric_limits<double>::infinity());
  CHECK(h == 1.0);
  CHECK(b == 1.5);
  CHECK_THROWS_AS(alpha_beta_dims(0.0, 2.0), Error);
  CHECK_THROWS_AS(alpha_beta_dims(1.5, 2.0), Error);
  CHECK_THROWS_AS(alpha_beta_dims(0.5, 0.5), Error);
}

TEST_CASE("besicovitch_ursell_beta") {
  CHECK(besicovitch_ursell_beta(0.5, 1.25) == doctest::Approx(3.0));
  CHECK(alpha_beta_dims(0.5, besicovitch_ursell_beta(0.5, 1.25)).first == doctest::Approx(1.25));
  CHECK(besicovitch_ursell_beta(0.3, 1.7 - 1e-9) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(besicovitch_ursell_beta(0.5, 1.5), Error);
  CHECK_THROWS_AS(besicovitch_ursell_beta(0.5, 1.0), Error);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int i = 0; i < 100; ++i) {
    const double alpha = u(rng);
    const double H = 1.0 + (1.0 - alpha) * u(rng);
    double beta = 0.0;
    try {
      beta = besicovitch_ursell_beta(alpha, H);
    } catch (const Error&) {
      continue;
    }
    CHECK(alpha_beta_dims(alpha, beta).first == doctest::Approx(H).epsilon(1e-12));
  }
}

TEST_CASE("dimension_report examples") {
  SUBCASE("alpha = 1/2, beta = 2") {
    const auto rep = dimension_report(SequenceSpec(GeometricExponent{2.0, 2.0, 0.5}), 1, 30);
    CHECK(rep.hausdorff_dim_estimate == doctest::Approx(4.0 / 3.0).epsilon(1e-9));
    CHECK(rep.upperbox_dim_estimate == doctest::Approx(1.5).epsilon(1e-9));
    REQUIRE(rep.closed_form.has_value());
    CHECK(rep.closed_form->first == doctest::Approx(4.0 / 3.0));
    CHECK(rep.hausdorff_ratio.entries.size() == 30);
    CHECK(rep.log_d.size() == 30);
    CHECK_FALSE(rep.degenerate);
  }
  SUBCASE("bounded d_n gives dimension 1") {
    const auto rep = dimension_report(lipschitz_family(40), 1, 38);
    CHECK(rep.hausdorff_dim_estimate == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(rep.upperbox_dim_estimate == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(rep.gamma_bar < 1e-3);
  }
  SUBCASE("b_n = n^n, a_n = b_n^-1/2 approaches 2 - alpha") {
    const SequenceSpec spec(PowerTower{0.5, 0.0});
    const auto coarse = dimension_report(spec, 2, 10);
    const auto fine = dimension_report(spec, 2, 100);
    CHECK(std::abs(fine.upperbox_dim_estimate - 1.5) < std::abs(coarse.upperbox_dim_estimate - 1.5) + 1e-12);
    CHECK(fine.upperbox_dim_estimate == doctest::Approx(1.5).epsilon(0.01));
    CHECK(fine.hausdorff_dim_estimate == doctest::Approx(1.5).epsilon(0.01));
  }
  SUBCASE("window errors") {
    CHECK_THROWS_AS(dimension_report(SequenceSpec(GeometricExponent{}), 1, 2), Error);
    CHECK_THROWS_AS(dimension_report(wingren_family(10), 1, 10), Error);
  }
}

TEST_CASE("closed-form convergence at n = 30") {
  for (double alpha : {0.25, 0.5, 0.75})
    for (double beta : {2.0, 3.0}) {
      const auto rep = dimension_report(SequenceSpec(GeometricExponent{2.0, beta, alpha}), 1, 30);
      const auto [h, b] = alpha_beta_dims(alpha, beta);
      CHECK(std::abs(rep.hausdorff_ratio.final_value + 1.0 - h) <= 1e-6);
      CHECK(std::abs(rep.upperbox_ratio.final_value + 1.0 - b) <= 1e-6);
    }
}

TEST_CASE("report ordering and ratio sanity") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 100; ++i) {
    const auto rep = dimension_report(random_spec(rng, 10), 1, 9);
    CHECK(1.0 <= rep.hausdorff_dim_estimate);
    CHECK(rep.hausdorff_dim_estimate == rep.lowerbox_dim_estimate);
    CHECK(rep.hausdorff_dim_estimate <= rep.upperbox_dim_estimate);
    CHECK(rep.upperbox_dim_estimate <= 2.0);
    for (const auto& e : rep.hausdorff_ratio.entries) CHECK((std::isfinite(e.value) && e.value >= 0.0));
    for (const auto& e : rep.upperbox_ratio.entries) CHECK((std::isfinite(e.value) && e.value >= 0.0));
  }
}

TEST_CASE("synthesize examples") {
  SUBCASE("H = 1.5, B = 1.75 gives beta = 3") {
    const auto s = synthesize(1.5, 1.75);
    const auto* g = std::get_if<GeometricExponent>(&s.spec.kind());
    REQUIRE(g != nullptr);
    CHECK(g->beta == doctest::Approx(3.0));
    CHECK(g->alpha == doctest::Approx(0.25));
    CHECK(s.spec.log_b(2) == doctest::Approx(9.0 * kLn2));
    CHECK(s.spec.log_a(2) == doctest::Approx(-0.25 * 9.0 * kLn2));
  }
  SUBCASE("H = B = 1.5 gives n^-(n/2), n^n") {
    const auto s = synthesize(1.5, 1.5);
    CHECK(s.spec == SequenceSpec(PowerTower{0.5, 0.0}));
    CHECK(s.spec.log_a(4) == doctest::Approx(-2.0 * std::log(4.0)));
  }
  SUBCASE("H = B = 2 gives n^-sqrt(n), n^n") {
    const auto s = synthesize(2.0, 2.0);
    CHECK(s.spec.log_a(9) == doctest::Approx(-3.0 * std::log(9.0)));
    CHECK(s.spec.log_b(9) == doctest::Approx(9.0 * std::log(9.0)));
  }
  SUBCASE("tower branches") {
    CHECK(synthesize(1.0, 1.5).spec == SequenceSpec(SuperTower{0.5, 0.0, 0.0}));
    CHECK(synthesize(1.0, 2.0).spec == SequenceSpec(SuperTower{0.0, 1.0, 0.0}));
    const auto s = synthesize(1.5, 2.0);
    const auto* t = std::get_if<SuperTower>(&s.spec.kind());
    REQUIRE(t != nullptr);
    CHECK(t->shifted == doctest::Approx(0.5 / (0.5 * std::numbers::e)));
  }
  SUBCASE("rejections") {
    CHECK_THROWS_AS(synthesize(1.8, 1.5), Error);
    CHECK_THROWS_AS(synthesize(0.9, 1.5), Error);
    CHECK_THROWS_AS(synthesize(1.5, 2.1), Error);
  }
  SUBCASE("closed forms match the request") {
    for (auto [H, B] : {std::pair{1.5, 1.5}, {1.3, 1.7}, {1.0, 1.5}, {2.0, 2.0}, {1.5, 2.0}, {1.0, 2.0}}) {
      const auto cf = closed_form_dims(synthesize(H, B).spec);
      REQUIRE(cf.has_value());
      CHECK(cf->first == doctest::Approx(H).epsilon(1e-12));
      CHECK(cf->second == doctest::Approx(B).epsilon(1e-12));
    }
  }
}

TEST_CASE("synthesis round trip, geometric case") {
  const auto rep = dimension_report(synthesize(1.3, 1.7).spec, 1, 25);
  CHECK(std::abs(rep.hausdorff_dim_estimate - 1.3) <= 1e-3);
  CHECK(std::abs(rep.upperbox_dim_estimate - 1.7) <= 1e-3);
}

TEST_CASE("scale decomposition brackets") {
  const SequenceSpec spec(PowerTower{0.5, 0.0});  // b = 1, 4, 27, 256, ...
  SUBCASE("r = 1/b_{k+1} gives m = 1") {
    for (int k = 1; k <= 6; ++k) {
      const auto sd = scale_decomposition_log(spec, -spec.log_b(k + 1));
      CHECK(sd.k == k);
      REQUIRE(sd.m.exact.has_value());
      CHECK(*sd.m.exact == 1.0);
    }
  }
  SUBCASE("k, m, l bracket r") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(spec.log_b(2), spec.log_b(7));
    for (int i = 0; i < 200; ++i) {
      const double log_r = -u(rng);
      const auto sd = scale_decomposition_log(spec, log_r);
      CHECK(-spec.log_b(sd.k + 1) <= log_r + 1e-12);
      CHECK(log_r < -spec.log_b(sd.k));
      REQUIRE(sd.m.exact.has_value());
      const double m = *sd.m.exact;
      CHECK(m >= 1.0);
      CHECK(m <= sd.m_k.value());
      CHECK(std::log(m) - spec.log_b(sd.k + 1) <= log_r + 1e-9);
      CHECK(log_r < std::log(m + 1.0) - spec.log_b(sd.k + 1));
      if (sd.l) {
        CHECK(spec.log_a(*sd.l + 1) <= log_r);
        CHECK(log_r < spec.log_a(*sd.l));
      }
    }
  }
  SUBCASE("out of range") {
    CHECK_THROWS_AS(scale_decomposition(spec, 2.0), Error);
    CHECK_THROWS_AS(scale_decomposition(wingren_family(4), std::ldexp(1.0, -40)), Error);
    CHECK_THROWS_AS(scale_decomposition(spec, 0.0), Error);
  }
}

TEST_CASE("m_k follows the two-case definition") {
  // b_2 / b_1 = 8 exactly: m_k = 7; ratio 8.5: m_k = 8.
  const SequenceSpec integral(ExplicitTable{{-1.0, -2.0}, {std::log(2.0), std::log(16.0)}, {}});
  CHECK(m_cap(integral, 1).value() == 7.0);
  const SequenceSpec fractional(ExplicitTable{{-1.0, -2.0}, {std::log(2.0), std::log(17.0)}, {}});
  CHECK(m_cap(fractional, 1).value() == 8.0);
}

TEST_CASE("mk_bruteforce examples") {
  SUBCASE("d_{k+1}/d_k = 5.5") {
    // d_1 = 0.1 * 100 = 10, d_2 = 10 + 45 = 55.
    const SequenceSpec spec(ExplicitTable{{std::log(0.1), std::log(45e-6)}, {std::log(100.0), std::log(1e6)}, {}});
    const auto bf = mk_bruteforce(spec, 1);
    CHECK(bf.exhaustive);
    CHECK((bf.argmin == 5.0 || bf.argmin == 6.0));
    const auto [mk, arg] = mk_closed_form(spec, 1);
    CHECK(rel_diff(mk, bf.M_k) <= 1e-12);
    CHECK((arg.value() == 5.0 || arg.value() == 6.0));
  }
  SUBCASE("m_k = 1 leaves the single candidate Y_k(1)") {
    // b_2/b_1 = 2 exactly, so m_k = 1.
    const SequenceSpec spec(ExplicitTable{{std::log(0.5), std::log(0.2)}, {std::log(4.0), std::log(8.0)}, {}});
    CHECK(m_cap(spec, 1).value() == 1.0);
    const auto bf = mk_bruteforce(spec, 1);
    CHECK(bf.argmin == 1.0);
    CHECK(bf.M_k == doctest::Approx(Y_k(spec, 1, 0.0)));
    CHECK(X_k(spec, 1, 0.0) < Y_k(spec, 1, 0.0));
  }
  SUBCASE("slow growth of d gives min(Y(1), X(2))") {
    const SequenceSpec spec(PowerTower{0.9, 0.0});
    for (int k = 2; k < 8; ++k) {
      const double expect = std::min(Y_k(spec, k, 0.0), X_k(spec, k, std::log(2.0)));
      CHECK(mk_closed_form(spec, k).first == doctest::Approx(expect).epsilon(1e-14));
    }
  }
}

TEST_CASE("M_k closed form equals brute force") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 100; ++i) {
    const auto spec = random_spec(rng);
    for (int k = 1; k <= 5; ++k) {
      const auto bf = mk_bruteforce(spec, k);
      const auto cf = mk_closed_form(spec, k);
      CHECK(rel_diff(cf.first, bf.M_k) <= 1e-12);
    }
  }
  SUBCASE("ternary search agrees with enumeration") {
    for (int i = 0; i < 30; ++i) {
      const auto spec = random_spec(rng);
      const auto full = mk_bruteforce(spec, 2, 1e9);
      const auto fast = mk_bruteforce(spec, 2, 10.0);
      CHECK(rel_diff(fast.M_k, full.M_k) <= 1e-12);
    }
  }
  SUBCASE("log-domain regime of a tower family") {
    const SequenceSpec spec(SuperTower{0.5, 0.0, 0.0});
    const auto cf = mk_closed_form(spec, 4);
    const auto bf = mk_bruteforce(spec, 4);
    CHECK(rel_diff(cf.first, bf.M_k) <= 1e-9);
  }
}

TEST_CASE("X_k increases and Y_k decreases in m") {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 100; ++i) {
    const auto spec = random_spec(rng);
    for (int k = 1; k <= 4; ++k) {
      const double cap = m_cap(spec, k).value();
      std::uniform_real_distribution<double> u(0.0, std::log(cap));
      std::vector<double> ms = {0.0, std::log(cap)};
      for (int s = 0; s < 10; ++s) ms.push_back(std::log(std::floor(std::exp(u(rng)))));
      std::sort(ms.begin(), ms.end());
      for (std::size_t j = 1; j < ms.size(); ++j) {
        CHECK(X_k(spec, k, ms[j]) >= X_k(spec, k, ms[j - 1]));
        CHECK(Y_k(spec, k, ms[j]) <= Y_k(spec, k, ms[j - 1]));
      }
    }
  }
}
