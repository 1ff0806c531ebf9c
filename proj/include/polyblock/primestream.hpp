#pragma once

// Prime harvesting: the prime divisors P_f of polynomial values and their
// density, the large close-root primes S_N, and p-adic valuations of
// products of consecutive values.

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "polyblock/arith.hpp"
#include "polyblock/intpoly.hpp"
#include "polyblock/modpoly.hpp"

namespace polyblock {

/// Logarithmic integral Li(x) = integral from 2 to x of dt / ln t, by
/// adaptive Simpson quadrature to the given relative tolerance.
double log_integral(double x, double rel_tol = 1e-6);

struct PrimeSetReport {
  u64 x;
  u64 count;        // #P_f(x)
  u64 prime_count;  // pi(x)
  double expected;  // delta * Li(x)
  mpq_class delta;
  double relative_error;  // (count - expected) / expected
  std::vector<u64> primes;  // filled only when requested

  double observed_density() const { return static_cast<double>(count) / static_cast<double>(prime_count); }
};

/// Counts primes p <= x dividing some value f(n). `delta` defaults to the
/// closed-form density of f; pass it explicitly for polynomials outside
/// degree <= 3.
PrimeSetReport enumerate_pf(const IntPoly& f, u64 x, bool keep_primes = false);
PrimeSetReport enumerate_pf(const IntPoly& f, u64 x, const mpq_class& delta, bool keep_primes = false);

struct HarvestOptions {
  unsigned threads = 1;
  unsigned max_cofactor_bits = 128;
};

struct SNHarvest {
  u64 N;
  std::vector<CloseRootPair> pairs;  // ascending by prime, one per prime
  std::vector<std::string> warnings;  // skipped r values and primes

  double count_ratio() const { return static_cast<double>(pairs.size()) / static_cast<double>(N); }
};

/// Primes p > N/2 dividing f~(r) for some 1 <= r <= N/2, with p not
/// dividing 2 a_k, each paired with roots z, z + r of f mod p (smallest r
/// kept per prime).
SNHarvest harvest_sn(const IntPoly& f, u64 N, const HarvestOptions& options = {});

struct ValuationReport {
  u64 p;
  u64 N;
  u64 nu;            // exact p-adic valuation of f(1) f(2) ... f(N)
  unsigned tf;       // p-adic root count
  mpq_class main_term;  // tf N / (p - 1)
  double error_bound;   // 4 k (log N / log p + 1)

  bool within_bound() const;
};

/// Valuation of Q_N = prod f(n), n = 1..N, counted level by level from
/// Hensel-lifted roots. Throws RamifiedPrime or RootInRange.
ValuationReport valuation_qn(const IntPoly& f, u64 p, u64 N);

struct RatioPoint {
  u64 N;
  u64 count;
  double ratio;
};

std::vector<RatioPoint> sn_ratio_scan(const IntPoly& f, const std::vector<u64>& Ns,
                                      const HarvestOptions& options = {});

}  // namespace polyblock
