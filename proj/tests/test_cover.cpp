#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "polyblock/cover.hpp"
#include "polyblock/error.hpp"

using namespace polyblock;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::Unsupported;
}

mpz_class partner_modulus(const BlockWitness& w) {
  mpz_class m = 1;
  for (const auto& p : w.partners) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), m.get_mpz_t(), p.prime.get_mpz_t());
    m = m / g * p.prime;
  }
  return m;
}

}  // namespace

TEST_CASE("verify examples") {
  const IntPoly x{0, 1};
  const BlockWitness w = verify_block(x, 2183, 17);
  REQUIRE(w.partners.size() == 17);
  CHECK(w.partners[1].partner == 7);
  CHECK(w.partners[1].prime == 5);
  CHECK(w.partners[5].partner == 17);
  CHECK(w.partners[5].prime == 11);
  CHECK(check_witness(x, w));

  try {
    verify_block(x, 0, 17);
    FAIL("expected an isolated offset");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IsolatedOffset);
    CHECK(e.offset() == 1);
  }
  const IntPoly sq{1, 60, 900};
  std::mt19937_64 rng(1);
  for (int i = 0; i < 20; ++i) {
    const mpz_class n = static_cast<unsigned long>(rng() % 1'000'000'000);
    CHECK(code_of([&] { verify_block(sq, n, 3); }) == ErrorCode::IsolatedOffset);
  }
  CHECK(code_of([&] { verify_block(IntPoly{-5, 1}, 0, 6); }) == ErrorCode::ZeroValue);
  CHECK(code_of([&] { verify_block(x, 5, 1); }) == ErrorCode::PreconditionFailed);
}

TEST_CASE("verify agrees with the pairwise gcd oracle") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 6; ++t) {
    const auto c = oracle::random_poly(rng, 1 + t % 3, 20);
    const IntPoly f(c);
    for (unsigned k : {2u, 3u, 5u, 8u}) {
      for (long n = -40; n <= 400; ++n) {
        bool ok;
        try {
          const BlockWitness w = verify_block(f, n, k);
          CHECK(check_witness(f, w));
          ok = true;
        } catch (const Error& e) {
          CHECK((e.code() == ErrorCode::IsolatedOffset || e.code() == ErrorCode::ZeroValue));
          ok = false;
        }
        CHECK(ok == oracle::is_block(c, n, k));
      }
    }
  }
}

TEST_CASE("verify falls back to gcds for shared primes above the sieve bound") {
  // f(1) = 1000003 * 2 and f(2) = 1000003 * 3 share a large prime only.
  const IntPoly f{-1'000'003, 2'000'006};
  VerifyOptions vo;
  vo.sieve_bound = 100;
  const BlockWitness w = verify_block(f, 0, 2, vo);
  CHECK(w.partners[0].prime == 1'000'003);
  CHECK(w.partners[0].prime_certified);
}

TEST_CASE("witnesses are periodic in the product of their primes") {
  const IntPoly f{1, 0, 1};
  for (long n = 0; n < 3000; ++n) {
    BlockWitness w;
    try {
      w = verify_block(f, n, 6);
    } catch (const Error&) {
      continue;
    }
    const mpz_class m = partner_modulus(w);
    BlockWitness shifted = w;
    shifted.n += m;
    CHECK(check_witness(f, shifted));
    CHECK(verify_block(f, w.n + m, 6).partners.size() == 6);
  }
}

TEST_CASE("CRT") {
  std::vector<Congruence> a{{2, 5}, {1, 3}};
  auto s = solve_crt(a);
  CHECK(s.n0 == 7);
  CHECK(s.modulus == 15);
  std::vector<Congruence> b{{0, 2}};
  s = solve_crt(b);
  CHECK(s.n0 == 0);
  CHECK(s.modulus == 2);
  std::vector<Congruence> c{{2, 5}, {5, 13}, {1, 3}};
  s = solve_crt(c);
  CHECK(s.modulus == 195);
  CHECK(s.n0 >= 0);
  CHECK(s.n0 < 195);
  for (const auto& cg : c) CHECK(mod_u64(s.n0 - cg.residue, cg.modulus) == 0);
  std::vector<Congruence> neg{{-1, 7}, {mpz_class("123456789012345678901234567890"), 11}};
  s = solve_crt(neg);
  for (const auto& cg : neg) CHECK(mod_u64(s.n0 - cg.residue, cg.modulus) == 0);
  std::vector<Congruence> dup{{1, 7}, {2, 7}};
  CHECK(code_of([&] { solve_crt(dup); }) == ErrorCode::DuplicateModulus);
}

TEST_CASE("cover construction") {
  const IntPoly f{1, 0, 1};
  CHECK(code_of([&] { build_cover(f, 4); }) == ErrorCode::InsufficientHarvest);
  CHECK(code_of([&] { build_cover(IntPoly{-1, 0, 1}, 100); }) == ErrorCode::PreconditionFailed);
  for (unsigned N : {100u, 300u, 1000u}) {
    const CoverPlan plan = build_cover(f, N);
    CHECK_NOTHROW(check_plan(plan));
    const oracle::Coeffs c(f.coeffs().begin(), f.coeffs().end());
    for (int shift = 0; shift < 3; ++shift) {
      const BlockWitness w = verify_block(f, plan.n0 + plan.modulus * shift, N, {1 << 10, plan.primes()});
      CHECK(check_witness(f, w));
    }
    if (N == 100) CHECK(oracle::is_block(c, plan.n0, N));
  }
  for (const IntPoly& g : {IntPoly{1, -1, 0, 1}, IntPoly{1, -3, 0, 1}, IntPoly{3, 1, 2}}) {
    const CoverPlan plan = build_cover(g, 400);
    CHECK_NOTHROW(check_plan(plan));
  }
}

TEST_CASE("check_plan rejects tampering") {
  CoverPlan plan = build_cover(IntPoly{1, 0, 1}, 200);
  CoverPlan bad = plan;
  bad.n0 += 1;
  CHECK_THROWS_AS(check_plan(bad), Error);
  bad = plan;
  bad.holes.pop_back();
  CHECK_THROWS_AS(check_plan(bad), Error);
  bad = plan;
  std::swap(bad.holes.front().target, bad.holes.front().z_plus);
  CHECK_THROWS_AS(check_plan(bad), Error);
}

TEST_CASE("window scans") {
  auto least = [](const std::vector<ScanHit>& hits, unsigned k) {
    for (const auto& h : hits) {
      if (h.k == k) return static_cast<long>(h.n);
    }
    return -1L;
  };
  const auto hits = window_scan(IntPoly{0, 1}, 17, 3000);
  for (unsigned k = 2; k <= 17; ++k) CHECK(least(hits, k) == oracle::least_block({0, 1}, k, 3000));
  CHECK(least(hits, 17) == 2183);

  const oracle::Coeffs c{1, -1, 0, 1};
  const auto cubic = window_scan(IntPoly{1, -1, 0, 1}, 9, 5000);
  for (unsigned k = 2; k <= 9; ++k) CHECK(least(cubic, k) == oracle::least_block(c, k, 5000));

  const auto r1 = random_window_scan(IntPoly{1, 0, 1}, 2, 1'000'000, 2000, 99);
  const auto r2 = random_window_scan(IntPoly{1, 0, 1}, 2, 1'000'000, 2000, 99);
  CHECK(r1.blocks_found == r2.blocks_found);
  CHECK(r1.first_block_n == r2.first_block_n);
  CHECK(r1.blocks_found > 0);
  CHECK(random_window_scan(IntPoly{1, 60, 900}, 3, 1'000'000, 2000, 5).blocks_found == 0);
}
