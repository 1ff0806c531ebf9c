#pragma once

// Blocks f(n+1), ..., f(n+k) in which every value shares a prime with some
// other value: verification, CRT cover construction, exact existence
// decision for small k, and the g_f / G_f searches built on it.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "polyblock/arith.hpp"
#include "polyblock/intpoly.hpp"
#include "polyblock/modpoly.hpp"

namespace polyblock {

// ---------------------------------------------------------------------------
// Block verification

struct Partner {
  unsigned offset;   // h in [1, k]
  unsigned partner;  // h' != h in [1, k]
  mpz_class prime;   // shared divisor of f(n+h) and f(n+h'); prime unless
                     // factoring the gcd failed (then `prime_certified` = false)
  bool prime_certified = true;
};

struct BlockWitness {
  mpz_class n;
  unsigned k;
  std::vector<Partner> partners;  // one entry per offset, ascending
};

struct VerifyOptions {
  /// Primes up to this bound (capped at max(256, 16 k^2)) are sieved over
  /// the window before any gcd.
  u64 sieve_bound = 1 << 16;
  /// Extra primes tried in the sieve pass (for example those of a plan).
  std::vector<u64> hint_primes;
};

/// Finds a partner for every offset or throws IsolatedOffset naming the
/// first offset coprime to all others; ZeroValue if some f(n+h) = 0.
BlockWitness verify_block(const IntPoly& f, const mpz_class& n, unsigned k, const VerifyOptions& options = {});

/// Rechecks every claim of a witness against f at its own n by direct
/// modular evaluation. Returns false on the first failed claim.
bool check_witness(const IntPoly& f, const BlockWitness& w);

// ---------------------------------------------------------------------------
// CRT

struct Congruence {
  mpz_class residue;
  u64 modulus;  // prime
};

struct CrtSolution {
  mpz_class n0;       // least nonnegative solution
  mpz_class modulus;  // product of moduli
};

/// Throws DuplicateModulus when a modulus repeats.
CrtSolution solve_crt(std::span<const Congruence> congruences);

// ---------------------------------------------------------------------------
// Cover construction

struct BasePrime {
  u64 p;
  u64 anchor;  // f(anchor) = 0 mod p
};

struct Hole {
  unsigned h;
  u64 q;
  u64 z_minus;
  u64 z_plus;
  u64 target;  // r_j: z_minus for h <= N/2, z_plus otherwise
};

struct CoverPlan {
  IntPoly f;
  unsigned N;
  std::vector<BasePrime> base_primes;
  std::vector<Hole> holes;
  mpz_class modulus;
  mpz_class n0;
  u64 harvested;            // #S_N
  double predicted_holes;   // N prod(1 - 1/p_i) + 2^s at the chosen s

  std::vector<u64> primes() const;
};

struct CoverOptions {
  /// Base primes are added until oversample * predicted holes < budget.
  double sn_oversample = 1.0;
  unsigned harvest_threads = 1;
};

/// Builds and self-verifies a plan: n0, n0 + M and n0 + 2M must all pass
/// verify_block. Throws InsufficientHarvest or NoBasePrimes.
CoverPlan build_cover(const IntPoly& f, unsigned N, const CoverOptions& options = {});

/// Checks the structural invariants of a plan (moduli, residues of n0,
/// hole list) without re-verifying the block.
void check_plan(const CoverPlan& plan);

// ---------------------------------------------------------------------------
// Exact existence decision

inline constexpr unsigned kMaxBlockLength = 256;

struct ResidueChoice {
  u64 p;
  u64 c;  // n = c mod p
  std::vector<unsigned> offsets;  // H_p(c), size >= 2
};

struct DecideOptions {
  std::uint64_t max_nodes = 1'000'000;
  std::size_t max_primes = 10'000;
  /// Enumerate every solution leaf and report the least witness n.
  bool minimal_witness = false;
};

struct ExistenceCertificate {
  unsigned k;
  bool exists;
  std::vector<ResidueChoice> choices;  // when exists
  std::vector<u64> relevant_primes;
  std::optional<mpz_class> witness_n;  // reconstructed block start
  mpz_class modulus;                   // product of chosen primes
  std::uint64_t nodes;
};

/// Decides whether some n >= 0 makes f(n+1..n+k) a block. Throws
/// BudgetExceeded when the search limits are hit.
ExistenceCertificate decide_block(const IntPoly& f, unsigned k, const DecideOptions& options = {});

/// Relevant primes for length k: prime divisors of a_k and of
/// Res_X(f(X), f(X+d)) for 1 <= d < k.
std::vector<u64> relevant_primes(const IntPoly& f, unsigned k, std::size_t max_primes = 10'000);

enum class Decision { Exists, Absent, Unknown };

std::string_view to_string(Decision d);

struct GfResult {
  std::optional<unsigned> gf;  // nullopt: not found up to kmax or unknown
  bool unknown = false;        // a budget was exceeded before any success
  std::optional<unsigned> upper_bound;  // first success after an unknown k
  std::vector<std::pair<unsigned, Decision>> table;
};

GfResult gf_search(const IntPoly& f, unsigned kmax, const DecideOptions& options = {});

struct GScanResult {
  std::vector<std::pair<unsigned, Decision>> table;
  std::vector<unsigned> cover_fallbacks;  // k decided by build_cover
  std::optional<unsigned> tail_start;     // least K0 with success on [K0, kmax]
  std::vector<unsigned> gaps;             // failures after the first success
  std::string note;
};

GScanResult gf_estimate_scan(const IntPoly& f, unsigned kmax, const DecideOptions& options = {});

// ---------------------------------------------------------------------------
// Brute-force window scans (independent of the prime reduction)

struct ScanHit {
  unsigned k;
  u64 n;  // least n in the scanned range with a block of length k
};

/// For every k in [2, kmax], the least n in [0, n_max] such that
/// f(n+1..n+k) is a block, decided by pairwise gcds of exact values.
/// Requires |f(m)| < 2^126 on the range.
std::vector<ScanHit> window_scan(const IntPoly& f, unsigned kmax, u64 n_max);

struct RandomScan {
  std::uint64_t samples;
  std::uint64_t blocks_found;
  std::optional<u64> first_block_n;
};

/// Samples n uniformly from [0, n_max] with a seeded generator and counts
/// windows of length k with the block property.
RandomScan random_window_scan(const IntPoly& f, unsigned k, u64 n_max, std::uint64_t samples, std::uint64_t seed);

}  // namespace polyblock
