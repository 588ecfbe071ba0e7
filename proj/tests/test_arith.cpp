#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "iqlab/arith.hpp"
#include "iqlab/errors.hpp"

using namespace iqlab;

namespace {

RingElt reassemble(const FieldCtx& f, const Factorization& fac) {
  RingElt acc = fac.unit;
  for (const auto& [p, e] : fac.factors)
    for (int i = 0; i < e; ++i) acc = ring_mul(f, acc, p);
  return acc;
}

// A prime element has no divisor with norm in [2, N(p)/2]; checking
// candidates up to sqrt(N(p)) covers one factor of any proper splitting.
bool prime_by_trial(const FieldCtx& f, const RingElt& p) {
  long long np = norm(f, p);
  if (np < 2) return false;
  long long lim = isqrt_ll(np);
  for (const RingElt& c : enumerate_by_norm(f, lim)) {
    if (norm(f, c) < 2) continue;
    if (try_div(f, p, c).has_value()) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("canonical associates") {
  FieldCtx f1 = make_field(-1);
  CHECK(canonical_associate(f1, {-3, 0}) == RingElt{3, 0});
  CHECK(canonical_associate(f1, {1, -1}) == RingElt{1, 1});
  CHECK(canonical_associate(f1, {0, 3}) == RingElt{3, 0});  // boundary arg 0 inclusive
  FieldCtx f3 = make_field(-3);
  CHECK(canonical_associate(f3, {0, 1}) == RingElt{1, 0});
  CHECK_THROWS_AS(canonical_associate(f1, {0, 0}), ZeroElement);

  // exactly one associate in each class is canonical, and the map is idempotent
  for (int d : kHeegnerD) {
    FieldCtx f = make_field(d);
    for (const RingElt& n : enumerate_by_norm(f, 50)) {
      CHECK(is_canonical(f, n));
      CHECK(canonical_associate(f, n) == n);
      int hits = 0;
      for (int k = 0; k < f.unit_count; ++k)
        if (is_canonical(f, ring_mul(f, f.units[k], n))) ++hits;
      CHECK(hits == 1);
    }
  }
}

TEST_CASE("enumeration by norm") {
  FieldCtx f = make_field(-1);
  auto v2 = enumerate_by_norm(f, 2);
  REQUIRE(v2.size() == 2);
  CHECK(v2[0] == RingElt{1, 0});
  CHECK(v2[1] == RingElt{1, 1});

  auto v10 = enumerate_by_norm(f, 10);
  std::vector<long long> norms;
  for (const RingElt& n : v10) norms.push_back(norm(f, n));
  CHECK(norms == std::vector<long long>{1, 2, 4, 5, 5, 8, 9, 10, 10});
  CHECK(std::is_sorted(norms.begin(), norms.end()));

  CHECK(enumerate_by_norm(f, 0).empty());

  // row bounds describe exactly the norm ellipse
  for (int d : {-1, -7}) {
    FieldCtx fd = make_field(d);
    for (long long n2 = -8; n2 <= 8; ++n2) {
      RowBounds rb = norm_row_range(fd, 60, n2);
      for (long long n1 = -20; n1 <= 20; ++n1) {
        bool inside = norm(fd, {n1, n2}) <= 60;
        bool claimed = !rb.empty && n1 >= rb.lo && n1 <= rb.hi;
        CHECK(inside == claimed);
      }
    }
  }
}

TEST_CASE("element counts and the area asymptotic") {
  for (int d : kHeegnerD) {
    FieldCtx f = make_field(d);
    long long canon = static_cast<long long>(enumerate_by_norm(f, 10000).size());
    CHECK(count_elements_up_to(f, 10000) == canon * f.unit_count);
    CHECK(canon <= 4 * 10000);

    long long all6 = count_elements_up_to(f, 1000000);
    double ratio =
        static_cast<double>(all6) * static_cast<double>(f.im_omega()) / (M_PI * 1e6);
    CHECK(std::abs(ratio - 1.0) <= 0.05);
  }
}

TEST_CASE("prime sieve") {
  FieldCtx f1 = make_field(-1);
  PrimeTable t = sieve_primes(f1, 30);
  CHECK(t.prime_norms ==
        std::vector<long long>{2, 5, 5, 9, 13, 13, 17, 17, 29, 29});

  PrimeTable t2 = sieve_primes(f1, 2);
  REQUIRE(t2.primes.size() == 1);
  CHECK(t2.primes[0] == RingElt{1, 1});

  FieldCtx f3 = make_field(-3);
  PrimeTable t3 = sieve_primes(f3, 3);
  REQUIRE(t3.primes.size() == 1);
  CHECK(t3.prime_norms[0] == 3);

  CHECK_THROWS_AS(sieve_primes(f1, (1LL << 34) + 1), BoundTooLarge);

  // membership queries work on arbitrary associates
  CHECK(t.is_prime(f1, {-1, 1}));       // associate of 1+i
  CHECK(t.is_prime(f1, {-1, -2}));      // associate of 2-i, norm 5
  CHECK(!t.is_prime(f1, {2, 0}));       // 2 is ramified, not prime
  CHECK(t.prime_classes_up_to(9) == 4);
  CHECK(t.prime_classes_up_to(1) == 0);
}

TEST_CASE("factorization") {
  FieldCtx f = make_field(-1);
  Factorization ten = factor(f, {10, 0});
  CHECK(norm(f, ten.unit) == 1);
  long long nprod = 1;
  for (const auto& [p, e] : ten.factors) {
    CHECK(is_canonical(f, p));
    for (int i = 0; i < e; ++i) nprod *= norm(f, p);
  }
  CHECK(nprod == 100);
  CHECK(reassemble(f, ten) == RingElt{10, 0});

  Factorization unit = factor(f, {0, -1});
  CHECK(unit.factors.empty());
  CHECK(unit.unit == RingElt{0, -1});

  Factorization three = factor(f, {3, 0});
  REQUIRE(three.factors.size() == 1);
  CHECK(three.factors[0].first == RingElt{3, 0});
  CHECK(three.factors[0].second == 1);
  CHECK(three.unit == RingElt{1, 0});

  CHECK_THROWS_AS(factor(f, {0, 0}), ZeroElement);
}

TEST_CASE("factor reassembles and primes verify, all fields") {
  for (int d : kHeegnerD) {
    FieldCtx f = make_field(d);
    std::set<std::pair<long long, long long>> verified;
    for (const RingElt& n : enumerate_by_norm(f, 10000)) {
      if (norm(f, n) < 2) continue;
      Factorization fac = factor(f, n);
      CHECK(reassemble(f, fac) == n);
      for (const auto& [p, e] : fac.factors) {
        CHECK(e >= 1);
        if (verified.insert({p.n1, p.n2}).second) CHECK(prime_by_trial(f, p));
      }
    }
  }
}

TEST_CASE("sieve agrees with factor") {
  for (int d : kHeegnerD) {
    FieldCtx f = make_field(d);
    PrimeTable t = sieve_primes(f, 10000);
    std::set<std::pair<long long, long long>> sieved;
    for (const RingElt& p : t.primes) sieved.insert({p.n1, p.n2});
    std::set<std::pair<long long, long long>> via_factor;
    for (const RingElt& n : enumerate_by_norm(f, 10000)) {
      if (norm(f, n) < 2) continue;
      Factorization fac = factor(f, n);
      if (fac.factors.size() == 1 && fac.factors[0].second == 1 &&
          fac.factors[0].first == n && norm(f, fac.unit) == 1 &&
          fac.unit == RingElt{1, 0})
        via_factor.insert({n.n1, n.n2});
    }
    CHECK(sieved == via_factor);
  }
}

TEST_CASE("moebius and divisor counts") {
  FieldCtx f = make_field(-1);
  CHECK(moebius(f, {0, 1}) == 1);
  CHECK(moebius(f, {1, 1}) == -1);
  CHECK(moebius(f, {2, 0}) == 0);
  CHECK(moebius(f, {10, 0}) == 0);
  CHECK(moebius(f, ring_mul(f, {1, 1}, {2, 1})) == 1);
  CHECK_THROWS_AS(moebius(f, {0, 0}), ZeroElement);

  RingElt two{2, 0};  // (1+i)^2 times a unit
  CHECK(d_k(f, two, 2) == 3);
  CHECK(d_k(f, {2, 1}, 4) == 4);
  CHECK(d_k(f, {1, 0}, 7) == 1);
  CHECK(d_k(f, {10, 0}, 2) == 12);  // exponents (2,1,1): 3*2*2
  CHECK_THROWS_AS(d_k(f, {0, 0}, 2), ZeroElement);
}

TEST_CASE("gcd") {
  FieldCtx f = make_field(-1);
  CHECK(gcd(f, {1, 3}, {1, -3}) == RingElt{1, 1});
  CHECK(gcd(f, {-7, 0}, {0, 0}) == RingElt{7, 0});
  CHECK(gcd(f, {0, 0}, {-7, 0}) == RingElt{7, 0});
  CHECK(gcd(f, {1, 1}, {2, 1}) == RingElt{1, 0});
  CHECK_THROWS_AS(gcd(f, {0, 0}, {0, 0}), ParamError);

  // gcd divides both arguments and is canonical
  for (int d : {-1, -3, -43}) {
    FieldCtx fd = make_field(d);
    auto elems = enumerate_by_norm(fd, 300);
    for (std::size_t i = 0; i < elems.size(); i += 7) {
      for (std::size_t j = 1; j < elems.size(); j += 11) {
        RingElt g = gcd(fd, elems[i], elems[j]);
        CHECK(is_canonical(fd, g));
        CHECK(try_div(fd, elems[i], g).has_value());
        CHECK(try_div(fd, elems[j], g).has_value());
      }
    }
  }
}

TEST_CASE("prime ideal counting") {
  FieldCtx f = make_field(-1);
  CHECK(prime_ideal_count(f, 30) == 10);
  CHECK(prime_ideal_count(f, 2) == 1);
  FieldCtx f7 = make_field(-7);
  CHECK(prime_ideal_count(f7, 1) == 0);
}

TEST_CASE("divisor average stays bounded") {
  FieldCtx f = make_field(-1);
  double ratios[3];
  int idx = 0;
  for (long long x : {1000LL, 10000LL, 100000LL}) {
    long long total = 0;
    for (const RingElt& n : enumerate_by_norm(f, x)) total += d_k(f, n, 2);
    ratios[idx++] = static_cast<double>(total) /
                    (static_cast<double>(x) * std::log(static_cast<double>(x)));
  }
  double lo = std::min({ratios[0], ratios[1], ratios[2]});
  double hi = std::max({ratios[0], ratios[1], ratios[2]});
  CHECK(hi <= 3 * lo);
}

TEST_CASE("integer helpers") {
  CHECK(is_prime_int64(2));
  CHECK(is_prime_int64(1000003));
  CHECK(!is_prime_int64(1));
  CHECK(!is_prime_int64(1000001));  // 101 * 9901
  auto fac = factor_int64(6860);    // 2^2 * 5 * 7^3
  CHECK(fac == std::vector<std::pair<long long, int>>{{2, 2}, {5, 1}, {7, 3}});
  CHECK(isqrt_ll(0) == 0);
  CHECK(isqrt_ll(15) == 3);
  CHECK(isqrt_ll(16) == 4);
  CHECK(isqrt_ll((1LL << 62) - 1) == 2147483647LL);
}
