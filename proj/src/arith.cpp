#include "polyblock/arith.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "polyblock/error.hpp"

namespace polyblock {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidPolynomial: return "InvalidPolynomial";
    case ErrorCode::CompanionUndefined: return "CompanionUndefined";
    case ErrorCode::SquarefulReduction: return "SquarefulReduction";
    case ErrorCode::LemmaViolation: return "LemmaViolation";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::RamifiedPrime: return "RamifiedPrime";
    case ErrorCode::RootInRange: return "RootInRange";
    case ErrorCode::IsolatedOffset: return "IsolatedOffset";
    case ErrorCode::ZeroValue: return "ZeroValue";
    case ErrorCode::InsufficientHarvest: return "InsufficientHarvest";
    case ErrorCode::NoBasePrimes: return "NoBasePrimes";
    case ErrorCode::DuplicateModulus: return "DuplicateModulus";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::Unsupported: return "Unsupported";
  }
  return "Unknown";
}

u64 powmod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

u64 invmod(u64 a, u64 m) {
  // extended Euclid on signed 128-bit to avoid overflow
  __int128 old_r = a % m, r = m, old_s = 1, s = 0;
  while (r != 0) {
    __int128 q = old_r / r;
    __int128 t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) throw Error(ErrorCode::PreconditionFailed, "invmod: argument not invertible");
  __int128 res = old_s % static_cast<__int128>(m);
  if (res < 0) res += m;
  return static_cast<u64>(res);
}

u64 mod_u64(const mpz_class& x, u64 m) {
  mpz_class r;
  mpz_class mm = to_mpz(m);
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), mm.get_mpz_t());
  u64 lo = 0;
  mpz_export(&lo, nullptr, -1, sizeof(lo), 0, 0, r.get_mpz_t());
  return lo;
}

u64 to_u64(const mpz_class& x) {
  u64 lo = 0;
  mpz_export(&lo, nullptr, -1, sizeof(lo), 0, 0, x.get_mpz_t());
  return lo;
}

mpz_class to_mpz(u64 v) {
  mpz_class r;
  mpz_import(r.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return r;
}

mpz_class to_mpz(u128 v) {
  u64 words[2] = {static_cast<u64>(v), static_cast<u64>(v >> 64)};
  mpz_class r;
  mpz_import(r.get_mpz_t(), 2, -1, sizeof(u64), 0, 0, words);
  return r;
}

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  static constexpr u64 small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 p : small) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : small) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

bool is_prime(const mpz_class& n) {
  if (n < 2) return false;
  if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 64) return is_prime_u64(to_u64(n));
  return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

int legendre(u64 a, u64 p) {
  a %= p;
  if (a == 0) return 0;
  return powmod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

std::vector<u64> primes_up_to(u64 limit) {
  std::vector<u64> out;
  if (limit < 2) return out;
  SegmentedSieve sieve(2, limit + 1);
  std::vector<u64> seg;
  while (sieve.next_segment(seg)) out.insert(out.end(), seg.begin(), seg.end());
  return out;
}

namespace {

std::vector<u64> simple_sieve(u64 limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<u64> primes;
  for (u64 i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

}  // namespace

SegmentedSieve::SegmentedSieve(u64 lo, u64 hi, u64 segment_size)
    : lo_(std::max<u64>(lo, 2)), hi_(hi), segment_size_(segment_size) {
  u64 root = static_cast<u64>(std::sqrt(static_cast<long double>(hi))) + 1;
  while (root * root > hi && root > 0) --root;
  base_ = simple_sieve(root + 1);
}

bool SegmentedSieve::next_segment(std::vector<u64>& out) {
  out.clear();
  if (lo_ >= hi_) return false;
  u64 end = std::min(hi_, lo_ + segment_size_);
  mark_.assign(end - lo_, 0);
  for (u64 p : base_) {
    if (p * p >= end) break;
    u64 start = std::max(p * p, (lo_ + p - 1) / p * p);
    for (u64 j = start; j < end; j += p) mark_[j - lo_] = 1;
  }
  for (u64 i = 0; i < end - lo_; ++i) {
    if (!mark_[i]) out.push_back(lo_ + i);
  }
  lo_ = end;
  return true;
}

namespace {

u64 rho_u64(u64 n) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
    u64 r = 1;
    constexpr u64 m = 128;
    auto step = [&](u64 v) { return addmod(mulmod(v, v, n), c, n); };
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = step(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = step(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r <<= 1;
    } while (g == 1);
    if (g == n) {
      do {
        ys = step(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_u64_into(u64 n, std::map<u64, unsigned>& acc) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    ++acc[n];
    return;
  }
  u64 d = rho_u64(n);
  factor_u64_into(d, acc);
  factor_u64_into(n / d, acc);
}

}  // namespace

std::vector<std::pair<u64, unsigned>> factor_u64(u64 n) {
  std::map<u64, unsigned> acc;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
    while (n > 1 && n % p == 0) {
      ++acc[p];
      n /= p;
    }
  }
  factor_u64_into(n, acc);
  return {acc.begin(), acc.end()};
}

mpz_class pollard_rho(const mpz_class& n, unsigned long max_iterations) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1; c < 16; ++c) {
    mpz_class x = 2, y = 2, ys = 2, q = 1, g = 1, t;
    unsigned long r = 1, spent = 0;
    constexpr unsigned long m = 64;
    auto step = [&](mpz_class& v) {
      v = v * v + c;
      mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
    };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) step(y);
      unsigned long k = 0;
      do {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          step(y);
          t = abs(x - y);
          q = q * t % n;
        }
        g = gcd(q, n);
        k += m;
        spent += m;
      } while (k < r && g == 1);
      r <<= 1;
      if (spent > max_iterations) return 0;
    } while (g == 1);
    if (g == n) {
      do {
        step(ys);
        g = gcd(abs(x - ys), n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
  return 0;
}

namespace {

bool fits_u64(const mpz_class& n) { return mpz_sizeinbase(n.get_mpz_t(), 2) <= 64; }

void factor_into(const mpz_class& n, std::map<mpz_class, unsigned>& acc, mpz_class& unfactored,
                 unsigned max_bits) {
  if (n == 1) return;
  if (fits_u64(n)) {
    for (auto [p, e] : factor_u64(to_u64(n))) acc[to_mpz(p)] += e;
    return;
  }
  if (is_prime(n)) {
    ++acc[n];
    return;
  }
  if (mpz_sizeinbase(n.get_mpz_t(), 2) > max_bits) {
    unfactored *= n;
    return;
  }
  mpz_class d = pollard_rho(n, 1UL << 26);
  if (d == 0) {
    unfactored *= n;
    return;
  }
  factor_into(d, acc, unfactored, max_bits);
  factor_into(n / d, acc, unfactored, max_bits);
}

}  // namespace

FactorResult factor(const mpz_class& n_in, unsigned max_cofactor_bits) {
  if (n_in == 0) throw Error(ErrorCode::PreconditionFailed, "factor: zero has no factorization");
  mpz_class n = abs(n_in);
  std::map<mpz_class, unsigned> acc;
  static const std::vector<u64> small = primes_up_to(1 << 12);
  for (u64 p : small) {
    if (n == 1) break;
    unsigned e = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
      ++e;
    }
    if (e) acc[to_mpz(p)] += e;
  }
  FactorResult result;
  factor_into(n, acc, result.unfactored, max_cofactor_bits);
  result.factors.assign(acc.begin(), acc.end());
  return result;
}

}  // namespace polyblock
