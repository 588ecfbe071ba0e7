#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "iqlab/dioph.hpp"
#include "iqlab/errors.hpp"

using namespace iqlab;

TEST_CASE("gintner search finds the textbook pair") {
  FieldCtx f = make_field(-1);
  Alpha a = make_alpha(f, "sqrt2_sqrt3");
  auto pairs = gintner_search(f, a, 2);
  bool found = false;
  for (const Approximation& p : pairs) {
    CHECK(norm(f, p.q) >= 2);  // q = 1 would make a/q integral
    if (p.q == RingElt{1, 1} && p.a == RingElt{0, 3}) {
      found = true;
      double gamma = std::sqrt(static_cast<double>(p.gamma_abs_sq));
      CHECK(gamma == doctest::Approx(0.2476).epsilon(2e-3));
      // |q alpha - a| = |gamma| sqrt(N(q))
      CHECK(gamma * std::sqrt(2.0) == doctest::Approx(0.3501).epsilon(2e-3));
      CHECK(gamma <= p.C / 2);
      CHECK(p.C == doctest::Approx(0.7796968).epsilon(1e-6));
    }
  }
  CHECK(found);
}

TEST_CASE("gintner search output is sorted, reduced and admissible") {
  for (int d : {-1, -7, -163}) {
    FieldCtx f = make_field(d);
    Alpha a = make_alpha(f, "e_pi");
    auto pairs = gintner_search(f, a, 300);
    long long prev = 0;
    for (const Approximation& p : pairs) {
      long long nq = norm(f, p.q);
      CHECK(nq >= prev);
      prev = nq;
      CHECK(is_canonical(f, p.q));
      CHECK(norm(f, gcd(f, p.a, p.q)) == 1);
      // admissibility |gamma| <= C/N(q) with a hair of slack for the
      // final-bit rounding of gamma itself
      double lhs = static_cast<double>(p.gamma_abs_sq) * nq * nq;
      CHECK(lhs <= p.C * p.C * (1 + 1e-12));
    }
    // C override admits more pairs
    auto wide = gintner_search(f, a, 300, 3 * f.gintner_c_d());
    CHECK(wide.size() >= pairs.size());
  }
}

TEST_CASE("rational alpha is detected") {
  FieldCtx f = make_field(-1);
  // (1+2i)/(3+i) = (1+i)/2: omega coordinates (1/2, 1/2)
  Alpha a = make_alpha(
      f,
      "0.50000000000000000000000000000000000000000000000000,"
      "0.50000000000000000000000000000000000000000000000000");
  CHECK_THROWS_AS(gintner_search(f, a, 10), AlphaLooksRational);
}

TEST_CASE("static fraction gap holds for all nine fields") {
  for (int d : kHeegnerD) {
    FieldCtx f = make_field(d);
    CHECK(check_lower_bound_static(f, 300).empty());
  }
}

TEST_CASE("perturbed gap holds for sample approximations") {
  for (int d : kHeegnerD) {
    FieldCtx f = make_field(d);
    Alpha a = make_alpha(f, "e_pi");
    auto pairs = gintner_search(f, a, 1000);
    REQUIRE(!pairs.empty());
    std::size_t take = std::min<std::size_t>(pairs.size(), 3);
    for (std::size_t k = 0; k < take; ++k)
      CHECK(check_lower_bound_perturbed(f, a, pairs[pairs.size() - 1 - k], 5000).empty());
  }
}

TEST_CASE("near-lattice counting") {
  FieldCtx f = make_field(-1);
  Alpha a = make_alpha(f, "sqrt2_sqrt3");
  CHECK(h_alpha_count(f, a, 10, Fx128::half()) == 36);
  CHECK(h_alpha_count(f, a, 0, Fx128::half()) == 0);

  // monotone in x and in delta
  long long prev = -1;
  for (long long x : {5LL, 10LL, 20LL, 50LL, 200LL}) {
    long long c = h_alpha_count(f, a, x, Fx128::from_ratio(BigInt(1), BigInt(5)));
    CHECK(c >= prev);
    prev = c;
  }
  prev = -1;
  for (int num : {1, 2, 3, 4, 5}) {
    long long c = h_alpha_count(f, a, 100, Fx128::from_ratio(BigInt(num), BigInt(10)));
    CHECK(c >= prev);
    prev = c;
  }

  auto pairs = gintner_search(f, a, 100);
  REQUIRE(!pairs.empty());
  auto [count, rep] = h_alpha_count_report(f, a, 100, Fx128::from_ratio(BigInt(1), BigInt(4)),
                                           pairs.back());
  CHECK(count == h_alpha_count(f, a, 100, Fx128::from_ratio(BigInt(1), BigInt(4))));
  CHECK(rep.rhs > 0);
  CHECK(rep.ratio >= 0);
}

TEST_CASE("vanishing instances produce empty counts") {
  int nontrivial = 0;
  for (int d : kHeegnerD) {
    FieldCtx f = make_field(d);
    Alpha a = make_alpha(f, "e_pi");
    auto pairs = gintner_search(f, a, 3000, 3 * f.gintner_c_d());
    std::size_t take = std::min<std::size_t>(pairs.size(), 10);
    for (std::size_t i = pairs.size() - take; i < pairs.size(); ++i) {
      Approximation ap = pairs[i];
      // the pair-tight constant, padded one ulp, clipped below by the field
      // constant so the vanishing hypothesis applies
      double tight = std::sqrt(static_cast<double>(ap.gamma_abs_sq)) * norm(f, ap.q);
      ap.C = std::max(f.gintner_c_d(), tight * (1 + std::ldexp(1.0, -40)));
      VanishingInstance v = vanishing_instance(f, ap);
      if (v.x >= 1) {
        ++nontrivial;
        CHECK(h_alpha_count(f, a, v.x, v.delta) == 0);
      }
    }
  }
  CHECK(nontrivial > 0);

  FieldCtx f1 = make_field(-1);
  Alpha a1 = make_alpha(f1, "e_pi");
  auto ps = gintner_search(f1, a1, 100);
  REQUIRE(!ps.empty());
  Approximation bad = ps.back();
  bad.C = 1e-3;  // below 1/(12 N(omega)); the clause cannot hold there
  CHECK_THROWS_AS(vanishing_instance(f1, bad), ParamError);
}

TEST_CASE("square spacing bound") {
  std::mt19937_64 g(99);
  for (int d : kHeegnerD) {
    FieldCtx f = make_field(d);
    Alpha a = make_alpha(f, "log2_gamma");
    auto pairs = gintner_search(f, a, 500);
    REQUIRE(!pairs.empty());
    const Approximation& ap = pairs.back();
    for (int i = 0; i < 20; ++i) {
      double cx = std::ldexp(static_cast<double>(g() >> 11), -53) * 10 - 5;
      double cy = std::ldexp(static_cast<double>(g() >> 11), -53) * 10 - 5;
      Fx128 delta = Fx128::from_ratio(BigInt(1 + static_cast<long long>(g() % 500)),
                                      BigInt(1000));
      auto [count, bound] = spacing_square_count(f, a, ap, cx, cy, delta);
      CHECK(static_cast<double>(count) <= bound);
    }
  }
}
