#pragma once

// Machine-width and multiprecision integer helpers shared by all modules:
// modular arithmetic, primality, sieving and factorization.

#include <cstdint>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace polyblock {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

inline u64 addmod(u64 a, u64 b, u64 m) {
  u64 s = a + b;
  return (s >= m || s < a) ? s - m : s;
}

inline u64 submod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + (m - b); }

u64 powmod(u64 base, u64 exp, u64 m);

/// Inverse of a modulo m; requires gcd(a, m) = 1.
u64 invmod(u64 a, u64 m);

/// Least nonnegative residue of x modulo m.
u64 mod_u64(const mpz_class& x, u64 m);

/// Requires 0 <= x < 2^64.
u64 to_u64(const mpz_class& x);

mpz_class to_mpz(u64 v);
mpz_class to_mpz(u128 v);

/// Deterministic for all 64-bit inputs (witnesses 2..37).
bool is_prime_u64(u64 n);

/// Primality for multiprecision n; exact below 2^64, BPSW above.
bool is_prime(const mpz_class& n);

/// Legendre symbol (a | p) for an odd prime p: -1, 0 or 1.
int legendre(u64 a, u64 p);

/// All primes <= limit, by a segmented sieve of Eratosthenes.
std::vector<u64> primes_up_to(u64 limit);

/// Segmented sieve over [lo, hi). Base primes up to sqrt(hi) are computed
/// once; `next_segment` yields the primes of consecutive windows.
class SegmentedSieve {
 public:
  SegmentedSieve(u64 lo, u64 hi, u64 segment_size = 1 << 18);

  /// Appends the primes of the next window to `out` (cleared first).
  /// Returns false once the range is exhausted.
  bool next_segment(std::vector<u64>& out);

 private:
  u64 lo_;
  u64 hi_;
  u64 segment_size_;
  std::vector<u64> base_;
  std::vector<unsigned char> mark_;
};

using Factorization = std::vector<std::pair<mpz_class, unsigned>>;

struct FactorResult {
  Factorization factors;  // ascending primes with multiplicity
  mpz_class unfactored = 1;  // cofactor left when it exceeded the size limit
  bool complete() const { return unfactored == 1; }
};

/// Full factorization of a 64-bit integer, ascending.
std::vector<std::pair<u64, unsigned>> factor_u64(u64 n);

/// Factorization of |n| (n != 0). Small primes are removed by trial
/// division, the remainder by Pollard-Brent rho. A composite cofactor above
/// `max_cofactor_bits` is left in `unfactored`.
FactorResult factor(const mpz_class& n, unsigned max_cofactor_bits = 128);

/// One nontrivial factor of composite n by Pollard-Brent rho, or 0 when the
/// iteration budget runs out.
mpz_class pollard_rho(const mpz_class& n, unsigned long max_iterations);

}  // namespace polyblock
