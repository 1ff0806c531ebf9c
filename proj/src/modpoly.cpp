#include "polyblock/modpoly.hpp"

#include <algorithm>
#include <random>
#include <utility>

#include "polyblock/error.hpp"

namespace polyblock {

namespace {

using Vec = std::vector<u64>;

void trim(Vec& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

int deg(const Vec& v) { return static_cast<int>(v.size()) - 1; }

Vec make_monic(Vec v, u64 p) {
  if (v.empty() || v.back() == 1) return v;
  const u64 inv = invmod(v.back(), p);
  for (auto& x : v) x = mulmod(x, inv, p);
  return v;
}

// a mod m, m monic and nonzero.
Vec rem(Vec a, const Vec& m, u64 p) {
  const int dm = deg(m);
  while (deg(a) >= dm) {
    const u64 lead = a.back();
    const int shift = deg(a) - dm;
    if (lead != 0) {
      for (int i = 0; i < dm; ++i) {
        auto& slot = a[static_cast<std::size_t>(i + shift)];
        slot = submod(slot, mulmod(lead, m[static_cast<std::size_t>(i)], p), p);
      }
    }
    a.pop_back();
  }
  trim(a);
  return a;
}

// a / m exactly, m monic.
Vec quotient(Vec a, const Vec& m, u64 p) {
  const int dm = deg(m);
  if (deg(a) < dm) return {};
  Vec q(static_cast<std::size_t>(deg(a) - dm + 1), 0);
  while (deg(a) >= dm) {
    const u64 lead = a.back();
    const int shift = deg(a) - dm;
    q[static_cast<std::size_t>(shift)] = lead;
    for (int i = 0; i < dm; ++i) {
      auto& slot = a[static_cast<std::size_t>(i + shift)];
      slot = submod(slot, mulmod(lead, m[static_cast<std::size_t>(i)], p), p);
    }
    a.pop_back();
  }
  return q;
}

Vec mulrem(const Vec& a, const Vec& b, const Vec& m, u64 p) {
  if (a.empty() || b.empty()) return {};
  Vec prod(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      prod[i + j] = addmod(prod[i + j], mulmod(a[i], b[j], p), p);
    }
  }
  return rem(std::move(prod), m, p);
}

Vec powrem(Vec base, u64 e, const Vec& m, u64 p) {
  Vec result = rem(Vec{1}, m, p);
  base = rem(std::move(base), m, p);
  while (e) {
    if (e & 1) result = mulrem(result, base, m, p);
    e >>= 1;
    if (e) base = mulrem(base, base, m, p);
  }
  return result;
}

// Monic gcd.
Vec gcd(Vec a, Vec b, u64 p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    b = make_monic(std::move(b), p);
    Vec r = rem(std::move(a), b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(std::move(a), p);
}

Vec sub(Vec a, const Vec& b, u64 p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = submod(a[i], b[i], p);
  trim(a);
  return a;
}

// gcd(X^p - X, f): the product of the distinct linear factors of monic f.
Vec linear_part(const Vec& f, u64 p) {
  Vec xp = powrem(Vec{0, 1}, p, f, p);
  return gcd(f, sub(std::move(xp), Vec{0, 1}, p), p);
}

// Roots of a monic squarefree product of distinct linear factors, p odd.
void split_linear(const Vec& g, u64 p, std::mt19937_64& rng, Vec& out) {
  if (deg(g) <= 0) return;
  if (deg(g) == 1) {
    out.push_back(g[0] == 0 ? 0 : p - g[0]);
    return;
  }
  std::uniform_int_distribution<u64> pick(0, p - 1);
  while (true) {
    Vec h = powrem(Vec{pick(rng), 1}, (p - 1) / 2, g, p);
    h = sub(std::move(h), Vec{1}, p);
    Vec d = gcd(g, h, p);
    if (deg(d) > 0 && deg(d) < deg(g)) {
      split_linear(d, p, rng, out);
      split_linear(quotient(g, d, p), p, rng, out);
      return;
    }
  }
}

}  // namespace

u64 PolyModP::operator()(u64 x) const {
  u64 acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = addmod(mulmod(acc, x, p), *it, p);
  return acc;
}

PolyModP reduce(const IntPoly& f, u64 p) {
  PolyModP out{p, {}};
  out.c.reserve(f.coeffs().size());
  for (const auto& a : f.coeffs()) out.c.push_back(mod_u64(a, p));
  trim(out.c);
  return out;
}

namespace {

RootsModP all_residues(u64 p, bool degenerate) {
  if (p > (1u << 24)) throw Error(ErrorCode::Unsupported, "polynomial vanishes identically modulo a large prime");
  RootsModP out{p, {}, degenerate};
  out.roots.resize(p);
  for (u64 i = 0; i < p; ++i) out.roots[i] = i;
  return out;
}

}  // namespace

RootsModP roots_mod_p_exhaustive(const IntPoly& f, u64 p) {
  const PolyModP g = reduce(f, p);
  const bool degenerate = mod_u64(f.leading(), p) == 0;
  if (g.is_zero()) return all_residues(p, degenerate);
  RootsModP out{p, {}, degenerate};
  for (u64 z = 0; z < p; ++z) {
    if (g(z) == 0) out.roots.push_back(z);
  }
  return out;
}

RootsModP roots_mod_p(const IntPoly& f, u64 p) {
  if (p < 2) throw Error(ErrorCode::PreconditionFailed, "modulus must be prime");
  if (p < kExhaustiveRootBound) return roots_mod_p_exhaustive(f, p);
  return roots_mod_p_split(f, p);
}

RootsModP roots_mod_p_split(const IntPoly& f, u64 p) {
  if (p < 2) throw Error(ErrorCode::PreconditionFailed, "modulus must be prime");
  if (p == 2) return roots_mod_p_exhaustive(f, p);
  const PolyModP g = reduce(f, p);
  const bool degenerate = mod_u64(f.leading(), p) == 0;
  if (g.is_zero()) return all_residues(p, degenerate);
  RootsModP out{p, {}, degenerate};
  if (g.degree() <= 0) return out;
  const Vec lin = linear_part(make_monic(g.c, p), p);
  std::mt19937_64 rng(p);
  split_linear(lin, p, rng, out.roots);
  std::sort(out.roots.begin(), out.roots.end());
  return out;
}

bool has_root_mod_p(const IntPoly& f, u64 p) {
  if (p < 64) return !roots_mod_p_exhaustive(f, p).roots.empty();
  const PolyModP g = reduce(f, p);
  if (g.is_zero()) return true;
  if (g.degree() <= 0) return false;
  if (g.degree() == 1) return true;
  return deg(linear_part(make_monic(g.c, p), p)) > 0;
}

std::vector<int> factor_degrees(const IntPoly& f, u64 p) {
  Vec rest = make_monic(reduce(f, p).c, p);
  std::vector<int> degrees;
  if (deg(rest) <= 0) return degrees;
  Vec h{0, 1};
  for (int d = 1; 2 * d <= deg(rest); ++d) {
    h = powrem(std::move(h), p, rest, p);
    Vec g = gcd(rest, sub(h, Vec{0, 1}, p), p);
    if (deg(g) > 0) {
      for (int i = 0; i < deg(g) / d; ++i) degrees.push_back(d);
      rest = quotient(rest, g, p);
      h = rem(std::move(h), rest, p);
    }
  }
  if (deg(rest) > 0) degrees.push_back(deg(rest));
  std::sort(degrees.begin(), degrees.end());
  return degrees;
}

bool factor_parity_odd(const IntPoly& f, u64 p) {
  if (p == 2 || mod_u64(f.leading(), p) == 0 || mod_u64(discriminant(f), p) == 0) {
    throw Error(ErrorCode::SquarefulReduction,
                "prime " + std::to_string(p) + " divides 2 a_k disc(f); reduction is not squarefree of full degree");
  }
  return factor_degrees(f, p).size() % 2 == 1;
}

CloseRootPair close_root_pair(const IntPoly& f, u64 p, u64 r) {
  if (f.degree() != 2 && f.degree() != 3) {
    throw Error(ErrorCode::PreconditionFailed, "close root pairs are guaranteed only for degree 2 or 3");
  }
  return close_root_pair(companion(f), p, r);
}

CloseRootPair close_root_pair(const CompanionPoly& comp, u64 p, u64 r) {
  const IntPoly& f = comp.source;
  if (f.degree() != 2 && f.degree() != 3) {
    throw Error(ErrorCode::PreconditionFailed, "close root pairs are guaranteed only for degree 2 or 3");
  }
  if (p == 2 || !is_prime_u64(p) || mod_u64(f.leading(), p) == 0) {
    throw Error(ErrorCode::PreconditionFailed, "prime must be odd and must not divide the leading coefficient");
  }
  if (r == 0 || r >= p) throw Error(ErrorCode::PreconditionFailed, "gap must satisfy 0 < r < p");
  if (comp.poly.eval_mod(r, p) != 0) {
    throw Error(ErrorCode::PreconditionFailed, "prime does not divide the companion polynomial at r");
  }
  const RootsModP rts = roots_mod_p_split(f, p);
  for (u64 z : rts.roots) {
    const u64 partner = addmod(z, r, p);
    if (std::binary_search(rts.roots.begin(), rts.roots.end(), partner)) {
      return CloseRootPair{p, r, z, z + r};
    }
  }
  if (p == 3 && f.degree() == 3 && rts.roots.empty()) {
    // f = a(X^3 - X + b) mod 3: roots alpha, alpha+1, alpha+2 lie outside F_3
    throw Error(ErrorCode::PreconditionFailed, "cubic is irreducible of Artin-Schreier type modulo 3; no close roots in F_3");
  }
  throw Error(ErrorCode::LemmaViolation, "no roots at distance " + std::to_string(r) + " modulo " + std::to_string(p));
}

unsigned padic_root_count(const IntPoly& f, u64 p) {
  if (mod_u64(f.leading(), p) == 0 || mod_u64(discriminant(f), p) == 0) {
    throw Error(ErrorCode::RamifiedPrime, "prime " + std::to_string(p) + " divides a_k disc(f)");
  }
  return static_cast<unsigned>(roots_mod_p(f, p).roots.size());
}

mpz_class hensel_lift(const IntPoly& f, u64 p, u64 z, unsigned levels) {
  auto derivative_at = [&f](const mpz_class& x) {
    mpz_class acc = 0;
    for (int i = f.degree(); i >= 1; --i) acc = acc * x + f.coeff(i) * i;
    return acc;
  };
  const mpz_class pp = to_mpz(p);
  mpz_class root = to_mpz(z);
  mpz_class modulus = pp;
  for (unsigned level = 1; level < levels; ++level) {
    modulus *= pp;
    mpz_class deriv = derivative_at(root);
    mpz_class inv;
    if (mpz_invert(inv.get_mpz_t(), deriv.get_mpz_t(), modulus.get_mpz_t()) == 0) {
      throw Error(ErrorCode::RamifiedPrime, "root is not simple; Hensel lift is not unique");
    }
    root -= f(root) * inv;
    mpz_fdiv_r(root.get_mpz_t(), root.get_mpz_t(), modulus.get_mpz_t());
  }
  return root;
}

}  // namespace polyblock
