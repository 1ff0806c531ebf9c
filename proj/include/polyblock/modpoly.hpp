#pragma once

// Arithmetic of an integer polynomial modulo a machine-width prime: roots,
// factor-count parity, close-root pairs and Hensel lifting.

#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "polyblock/arith.hpp"
#include "polyblock/intpoly.hpp"

namespace polyblock {

/// Below this bound roots are found by scanning every residue.
inline constexpr u64 kExhaustiveRootBound = 10'000;

/// Dense polynomial over F_p, constant term first, trimmed (zero = empty).
struct PolyModP {
  u64 p;
  std::vector<u64> c;

  int degree() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  u64 operator()(u64 x) const;
};

PolyModP reduce(const IntPoly& f, u64 p);

struct RootsModP {
  u64 p;
  std::vector<u64> roots;  // ascending, distinct, in [0, p)
  bool degenerate;         // p divides the leading coefficient
};

/// Every residue z in [0, p) with f(z) = 0 mod p. When f vanishes
/// identically mod p (p divides the content) all residues are roots; that
/// case requires p <= 2^24.
RootsModP roots_mod_p(const IntPoly& f, u64 p);

/// Same, forcing the slow O(p) scan. Used to cross-check the fast path.
RootsModP roots_mod_p_exhaustive(const IntPoly& f, u64 p);

/// Same, forcing the gcd(X^p - X, f) and equal-degree splitting route for
/// every odd p.
RootsModP roots_mod_p_split(const IntPoly& f, u64 p);

/// True iff f has a root mod p; cheaper than listing roots for large p.
bool has_root_mod_p(const IntPoly& f, u64 p);

/// Degrees of the irreducible factors of squarefree `f` mod p, from the
/// distinct-degree factorization; ascending with multiplicity.
std::vector<int> factor_degrees(const IntPoly& f, u64 p);

/// Parity of the number of irreducible factors of f mod p (true = odd).
/// Requires p not dividing 2 a_k disc(f); throws SquarefulReduction.
bool factor_parity_odd(const IntPoly& f, u64 p);

struct CloseRootPair {
  u64 p;
  u64 r;        // gap, 0 < r < p
  u64 z_minus;  // in [0, p)
  u64 z_plus;   // z_minus + r, may exceed p
};

/// Two roots of f mod p at distance exactly r. Preconditions: degree 2 or 3,
/// p odd and not dividing a_k, p | f~(r), 0 < r < p (PreconditionFailed).
/// A cubic irreducible mod 3 can have 3 | f~(r) without any root in F_3
/// (f = a(X^3 - X + b) mod 3); that case is PreconditionFailed too.
/// A missing pair under valid preconditions raises LemmaViolation.
CloseRootPair close_root_pair(const IntPoly& f, u64 p, u64 r);

/// Same, reusing a precomputed companion polynomial.
CloseRootPair close_root_pair(const CompanionPoly& comp, u64 p, u64 r);

/// Number of p-adic integer roots; p must not divide a_k disc(f)
/// (RamifiedPrime otherwise).
unsigned padic_root_count(const IntPoly& f, u64 p);

/// Lift a simple root z of f mod p to the unique root mod p^levels.
mpz_class hensel_lift(const IntPoly& f, u64 p, u64 z, unsigned levels);

}  // namespace polyblock
