#pragma once

// Exact integer polynomials: evaluation, resultants, discriminants, the
// root-difference companion polynomial and Galois classification for
// degrees 2 and 3.

#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace polyblock {

/// Polynomial with integer coefficients, constant term first. The leading
/// coefficient is nonzero and the degree is at least 1.
class IntPoly {
 public:
  explicit IntPoly(std::vector<mpz_class> coeffs);
  IntPoly(std::initializer_list<long> coeffs);

  /// Canonical text form "a0,a1,...,ak". Trailing zeros are rejected.
  static IntPoly parse(std::string_view text);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const mpz_class& coeff(int i) const { return coeffs_[static_cast<std::size_t>(i)]; }
  const mpz_class& leading() const { return coeffs_.back(); }
  std::span<const mpz_class> coeffs() const { return coeffs_; }

  /// Horner evaluation.
  mpz_class operator()(const mpz_class& x) const;

  /// Value at x reduced into [0, m).
  unsigned long long eval_mod(unsigned long long x, unsigned long long m) const;

  IntPoly derivative() const;

  /// The polynomial f(X + t).
  IntPoly shifted(const mpz_class& t) const;

  /// Content (gcd of coefficients, positive) and primitive part.
  mpz_class content() const;
  IntPoly primitive_part() const;

  std::string to_string() const;

  friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.coeffs_ == b.coeffs_; }

 private:
  std::vector<mpz_class> coeffs_;
};

/// Resultant of two nonzero coefficient vectors (constant first, no trailing
/// zeros, constants allowed) by the subresultant PRS. Sign follows the
/// Sylvester determinant with rows of `f` first.
mpz_class resultant(std::span<const mpz_class> f, std::span<const mpz_class> g);
mpz_class resultant(const IntPoly& f, const IntPoly& g);

/// (-1)^(k(k-1)/2) Res(f, f') / a_k. Degree 1 polynomials get 1.
mpz_class discriminant(const IntPoly& f);

struct CompanionPoly {
  IntPoly poly;    // f~, degree k(k-1)
  IntPoly source;  // f
  bool in_theorem_scope;  // source degree is 2 or 3
};

/// Res_X(f(X), f(X+Y)) as a polynomial in Y (coefficients, constant first),
/// recovered exactly by interpolation at Y = 0..k^2.
std::vector<mpz_class> shift_resultant(const IntPoly& f);

/// f~ obtained from Res_X(f(X), f(X+Y)) = a_k^2 Y^k f~(Y). Throws
/// CompanionUndefined for degree < 2.
CompanionPoly companion(const IntPoly& f);

/// Closed forms: a2^2 X^2 - D for quadratics and
/// (a3^2 X^2 + 3 a1 a3 - a2^2)^2 X^2 - D for cubics.
IntPoly companion_closed_form(const IntPoly& f);

enum class GaloisGroup { S2, S3, A3, NotApplicable };

std::string_view to_string(GaloisGroup g);

struct GaloisReport {
  bool reducible;
  GaloisGroup group;
  mpq_class delta;  // density of primes dividing some value of f
  mpz_class discriminant;
  mpz_class content;
};

/// Reducibility (rational-root test on the primitive part) and Galois group
/// for degree 2 or 3. Reducible inputs report delta = 1 (they have a
/// rational linear factor).
GaloisReport classify(const IntPoly& f);

/// Density of P_f when it is known in closed form: 1 for linear f, the
/// classify() value for degrees 2 and 3. Throws Unsupported otherwise.
mpq_class prime_density(const IntPoly& f);

}  // namespace polyblock
