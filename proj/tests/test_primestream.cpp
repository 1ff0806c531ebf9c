#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "polyblock/error.hpp"
#include "polyblock/primestream.hpp"

using namespace polyblock;

TEST_CASE("logarithmic integral") {
  // Li(x) - Li(2) reference values
  CHECK(log_integral(1e6) == doctest::Approx(78626.504).epsilon(1e-6));
  CHECK(log_integral(1000) == doctest::Approx(176.564).epsilon(1e-5));
  CHECK(log_integral(2) == 0.0);
}

TEST_CASE("P_f examples") {
  const auto r = enumerate_pf(IntPoly{1, 0, 1}, 20, true);
  CHECK(r.primes == std::vector<u64>{2, 5, 13, 17});
  CHECK(r.count == 4);
  CHECK(r.prime_count == 8);
  const auto lin = enumerate_pf(IntPoly{0, 1}, 20);
  CHECK(lin.count == 8);
  CHECK(lin.delta == 1);
  CHECK_THROWS_AS(enumerate_pf(IntPoly{1, 0, 1}, 1), Error);
}

TEST_CASE("P_f membership agrees with a brute-force divisibility check") {
  for (const IntPoly& f : {IntPoly{1, 0, 1}, IntPoly{1, -3, 0, 1}, IntPoly{1, -1, 0, 1}, IntPoly{3, 1, 6}}) {
    const auto r = enumerate_pf(f, 1000, mpq_class(1), true);
    std::vector<u64> brute;
    const oracle::Coeffs c(f.coeffs().begin(), f.coeffs().end());
    for (u64 p = 2; p <= 1000; ++p) {
      if (!oracle::is_prime(p)) continue;
      bool hit = false;
      for (u64 n = 1; n <= p && !hit; ++n) {
        mpz_class v = oracle::eval(c, mpz_class(static_cast<unsigned long>(n)));
        hit = mpz_divisible_ui_p(v.get_mpz_t(), p);
      }
      if (hit) brute.push_back(p);
    }
    CHECK(r.primes == brute);
    CHECK(r.count <= r.prime_count);
  }
}

TEST_CASE("density of P_f at 10^5") {
  for (auto [f, delta] : {std::pair{IntPoly{1, 0, 1}, 0.5}, std::pair{IntPoly{1, -3, 0, 1}, 1.0 / 3},
                          std::pair{IntPoly{1, -1, 0, 1}, 2.0 / 3}}) {
    CHECK(std::fabs(enumerate_pf(f, 100'000).observed_density() - delta) < 0.02);
  }
}

TEST_CASE("companion densities: equal for S2 and A3, 1/6 for S3") {
  // The companion's roots are the differences of roots of f; Frobenius
  // fixes such a difference only when it fixes both roots, so for an S3
  // cubic only the identity class contributes.
  const u64 x = 200'000;
  for (const IntPoly& f : {IntPoly{1, 0, 1}, IntPoly{1, -3, 0, 1}}) {
    const auto a = enumerate_pf(f, x), b = enumerate_pf(companion(f).poly, x, mpq_class(0));
    CHECK(std::fabs(static_cast<double>(a.count) - static_cast<double>(b.count)) / a.prime_count <= 0.02);
  }
  const auto s3 = enumerate_pf(companion(IntPoly{1, -1, 0, 1}).poly, x, mpq_class(0));
  CHECK(std::fabs(s3.observed_density() - 1.0 / 6) <= 0.02);
}

TEST_CASE("S_N examples") {
  const auto h8 = harvest_sn(IntPoly{1, 0, 1}, 8);
  REQUIRE(h8.pairs.size() == 2);
  CHECK(h8.pairs[0].p == 5);
  CHECK(h8.pairs[0].r == 1);
  CHECK(h8.pairs[0].z_minus == 2);
  CHECK(h8.pairs[0].z_plus == 3);
  CHECK(h8.pairs[1].p == 13);
  CHECK(h8.pairs[1].r == 3);
  CHECK(h8.pairs[1].z_minus == 5);
  CHECK(h8.pairs[1].z_plus == 8);
  CHECK(h8.count_ratio() == 0.25);
  const auto h4 = harvest_sn(IntPoly{1, 0, 1}, 4);
  REQUIRE(h4.pairs.size() == 1);
  CHECK(h4.pairs[0].p == 5);
  CHECK(sn_ratio_scan(IntPoly{1, 0, 1}, {}).empty());
  const auto scan = sn_ratio_scan(IntPoly{1, 0, 1}, {8});
  REQUIRE(scan.size() == 1);
  CHECK(scan[0].ratio == 0.25);
}

TEST_CASE("S_N entries recheck independently") {
  for (const IntPoly& f : {IntPoly{1, 0, 1}, IntPoly{1, -1, 0, 1}, IntPoly{7, 3, 2}}) {
    const u64 N = 400;
    const IntPoly ft = companion(f).poly;
    const auto h = harvest_sn(f, N);
    CHECK(h.warnings.empty());
    std::vector<u64> seen;
    for (const auto& pr : h.pairs) {
      CHECK(pr.p > N / 2);
      CHECK(oracle::is_prime(pr.p));
      CHECK(pr.r >= 1);
      CHECK(pr.r <= N / 2);
      CHECK(ft.eval_mod(pr.r, pr.p) == 0);
      CHECK(f.eval_mod(pr.z_minus, pr.p) == 0);
      CHECK(f.eval_mod(pr.z_plus % pr.p, pr.p) == 0);
      CHECK(pr.z_plus - pr.z_minus == pr.r);
      // smallest r kept
      for (u64 r = 1; r < pr.r; ++r) CHECK(ft.eval_mod(r, pr.p) != 0);
      seen.push_back(pr.p);
    }
    CHECK(std::is_sorted(seen.begin(), seen.end()));
    CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
    // completeness: primes > N/2 dividing some f~(r) are all present
    std::size_t expected = 0;
    std::vector<u64> all;
    for (u64 r = 1; r <= N / 2; ++r) {
      const FactorResult fr = factor(abs(ft(r)));
      for (const auto& [q, e] : fr.factors) {
        if (q > N / 2 && mod_u64(f.leading(), to_u64(q)) != 0) all.push_back(to_u64(q));
      }
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    expected = all.size();
    CHECK(h.pairs.size() == expected);
  }
}

TEST_CASE("harvest is independent of thread count") {
  HarvestOptions one, four;
  four.threads = 4;
  const auto a = harvest_sn(IntPoly{1, 0, 1}, 600, one), b = harvest_sn(IntPoly{1, 0, 1}, 600, four);
  REQUIRE(a.pairs.size() == b.pairs.size());
  for (std::size_t i = 0; i < a.pairs.size(); ++i) {
    CHECK(a.pairs[i].p == b.pairs[i].p);
    CHECK(a.pairs[i].r == b.pairs[i].r);
  }
}

TEST_CASE("valuation examples") {
  const auto v = valuation_qn(IntPoly{1, 0, 1}, 5, 25);
  CHECK(v.nu == 12);
  CHECK(v.main_term == mpq_class(25, 2));
  CHECK(valuation_qn(IntPoly{1, 0, 1}, 3, 100).nu == 0);
  const auto lin = valuation_qn(IntPoly{0, 1}, 2, 4);
  CHECK(lin.nu == 3);
  CHECK(lin.main_term == 4);
  CHECK_THROWS_AS(valuation_qn(IntPoly{1, 0, 1}, 2, 10), Error);
  CHECK_THROWS_AS(valuation_qn(IntPoly{-4, 1}, 3, 10), Error);
}

TEST_CASE("valuation agrees with the literal product") {
  std::mt19937_64 rng(61);
  for (int i = 0; i < 8; ++i) {
    const auto c = oracle::random_poly(rng, 2 + i % 2, 30);
    const IntPoly f(c);
    const mpz_class disc = discriminant(f);
    if (disc == 0) continue;
    for (u64 p : primes_up_to(50)) {
      if (mod_u64(f.leading(), p) == 0 || mod_u64(disc, p) == 0) continue;
      for (u64 N : {37UL, 200UL, 500UL}) {
        try {
          CHECK(valuation_qn(f, p, N).nu == oracle::literal_valuation(c, p, N));
        } catch (const Error& e) {
          CHECK(e.code() == ErrorCode::RootInRange);
        }
      }
    }
  }
}

TEST_CASE("valuation stays within the error bound") {
  for (const IntPoly& f : {IntPoly{1, 0, 1}, IntPoly{1, -3, 0, 1}, IntPoly{1, -1, 0, 1}, IntPoly{3, 5, 2}}) {
    const mpz_class disc = discriminant(f);
    for (u64 p : primes_up_to(50)) {
      if (mod_u64(f.leading(), p) == 0 || mod_u64(disc, p) == 0) continue;
      for (u64 N : {100UL, 1000UL, 10'000UL}) {
        try {
          CHECK(valuation_qn(f, p, N).within_bound());
        } catch (const Error& e) {
          CHECK(e.code() == ErrorCode::RootInRange);
        }
      }
    }
  }
}
