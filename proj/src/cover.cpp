#include "polyblock/cover.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "polyblock/error.hpp"
#include "polyblock/primestream.hpp"

namespace polyblock {

// ---------------------------------------------------------------------------
// verify_block

namespace {

// Smallest prime factor we can certify, or the number itself when factoring
// stalls.
std::pair<mpz_class, bool> shared_prime(const mpz_class& g) {
  FactorResult fr = factor(g, 160);
  if (!fr.factors.empty()) return {fr.factors.front().first, true};
  if (is_prime(g)) return {g, true};
  mpz_class d = pollard_rho(g, 1UL << 22);
  if (d != 0 && is_prime(d)) return {d, true};
  return {g, false};
}

}  // namespace

BlockWitness verify_block(const IntPoly& f, const mpz_class& n, unsigned k, const VerifyOptions& options) {
  if (k < 2) throw Error(ErrorCode::PreconditionFailed, "block length must be at least 2");
  std::vector<mpz_class> values(k + 1);
  for (unsigned h = 1; h <= k; ++h) {
    values[h] = f(n + h);
    if (values[h] == 0) {
      throw Error(ErrorCode::ZeroValue, "f(n + " + std::to_string(h) + ") = 0", static_cast<long>(h));
    }
  }

  // Short windows are cheaper to settle by gcds than by a long sieve.
  const u64 bound = std::min<u64>(options.sieve_bound, std::max<u64>(256, 16ULL * k * k));
  std::vector<u64> primes = primes_up_to(bound);
  for (u64 q : options.hint_primes) {
    if (q > bound) primes.push_back(q);
  }
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());

  // Sieve pass: for each prime, the offsets whose value it divides.
  std::vector<std::vector<u64>> divisors_of(k + 1);
  std::map<u64, std::vector<unsigned>> offsets_of;
  std::vector<unsigned> hits;
  for (u64 p : primes) {
    const PolyModP fp = reduce(f, p);
    const u64 start = mod_u64(n, p);
    hits.clear();
    if (fp.is_zero()) {
      for (unsigned h = 1; h <= k; ++h) hits.push_back(h);
    } else if (p <= k) {
      for (u64 c = 0; c < p; ++c) {
        if (fp(c) != 0) continue;
        // offsets h with start + h = c mod p
        u64 first = (c + p - start % p) % p;
        if (first == 0) first = p;
        for (u64 h = first; h <= k; h += p) hits.push_back(static_cast<unsigned>(h));
      }
      std::sort(hits.begin(), hits.end());
    } else {
      for (unsigned h = 1; h <= k; ++h) {
        if (fp(addmod(start, h % p, p)) == 0) hits.push_back(h);
      }
    }
    if (hits.size() < 2) continue;
    for (unsigned h : hits) divisors_of[h].push_back(p);
    offsets_of[p] = hits;
  }

  BlockWitness w{n, k, {}};
  for (unsigned h = 1; h <= k; ++h) {
    if (!divisors_of[h].empty()) {
      const u64 p = divisors_of[h].front();
      const auto& hs = offsets_of[p];
      unsigned best = 0;
      for (unsigned other : hs) {
        if (other == h) continue;
        const unsigned d_other = other > h ? other - h : h - other;
        const unsigned d_best = best > h ? best - h : h - best;
        if (best == 0 || d_other < d_best) best = other;
      }
      w.partners.push_back({h, best, to_mpz(p), true});
      continue;
    }
    // Fallback: exact gcds, nearest offsets first.
    bool found = false;
    for (unsigned dist = 1; dist < k && !found; ++dist) {
      for (int sign : {-1, 1}) {
        const long other = static_cast<long>(h) + sign * static_cast<long>(dist);
        if (other < 1 || other > static_cast<long>(k)) continue;
        mpz_class g = gcd(values[h], values[static_cast<std::size_t>(other)]);
        if (g == 1) continue;
        auto [prime, certified] = shared_prime(g);
        w.partners.push_back({h, static_cast<unsigned>(other), prime, certified});
        found = true;
        break;
      }
    }
    if (!found) {
      throw Error(ErrorCode::IsolatedOffset,
                  "f(n + " + std::to_string(h) + ") is coprime to every other value of the block",
                  static_cast<long>(h));
    }
  }
  return w;
}

bool check_witness(const IntPoly& f, const BlockWitness& w) {
  if (w.k < 2 || w.partners.size() != w.k) return false;
  for (unsigned i = 0; i < w.k; ++i) {
    const Partner& e = w.partners[i];
    if (e.offset != i + 1 || e.partner == e.offset || e.partner < 1 || e.partner > w.k) return false;
    if (e.prime < 2) return false;
    mpz_class a = f(w.n + e.offset), b = f(w.n + e.partner);
    if (a == 0 || b == 0) return false;
    if (!mpz_divisible_p(a.get_mpz_t(), e.prime.get_mpz_t())) return false;
    if (!mpz_divisible_p(b.get_mpz_t(), e.prime.get_mpz_t())) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// CRT

CrtSolution solve_crt(std::span<const Congruence> congruences) {
  std::set<u64> seen;
  CrtSolution sol{0, 1};
  for (const auto& cg : congruences) {
    if (!seen.insert(cg.modulus).second) {
      throw Error(ErrorCode::DuplicateModulus, "modulus " + std::to_string(cg.modulus) + " appears twice");
    }
    const u64 p = cg.modulus;
    const u64 target = mod_u64(cg.residue, p);
    const u64 current = mod_u64(sol.n0, p);
    const u64 m_mod = mod_u64(sol.modulus, p);
    // n0 + M t = target (mod p)
    const u64 t = mulmod(submod(target, current, p), invmod(m_mod, p), p);
    sol.n0 += sol.modulus * to_mpz(t);
    sol.modulus *= to_mpz(p);
  }
  return sol;
}

// ---------------------------------------------------------------------------
// build_cover

std::vector<u64> CoverPlan::primes() const {
  std::vector<u64> out;
  for (const auto& b : base_primes) out.push_back(b.p);
  for (const auto& h : holes) out.push_back(h.q);
  return out;
}

namespace {

std::vector<Congruence> plan_congruences(const CoverPlan& plan) {
  std::vector<Congruence> cg;
  for (const auto& b : plan.base_primes) cg.push_back({to_mpz(b.anchor), b.p});
  for (const auto& h : plan.holes) cg.push_back({to_mpz(h.target) - h.h, h.q});
  return cg;
}

// Offsets h in [1, N] where no base prime divides f(n + h) for n = anchor
// (mod p). Each root z of f mod p covers h = z - anchor (mod p); since
// p <= N/2 every such class has at least two members in [1, N].
std::vector<unsigned> sieve_holes(const IntPoly& f, unsigned N, std::span<const BasePrime> base) {
  std::vector<char> covered(N + 1, 0);
  for (const auto& b : base) {
    for (u64 z : roots_mod_p(f, b.p).roots) {
      for (u64 h = submod(z, b.anchor % b.p, b.p); h <= N; h += b.p) {
        if (h) covered[h] = 1;
      }
    }
  }
  std::vector<unsigned> holes;
  for (unsigned h = 1; h <= N; ++h) {
    if (!covered[h]) holes.push_back(h);
  }
  return holes;
}

}  // namespace

CoverPlan build_cover(const IntPoly& f, unsigned N, const CoverOptions& options) {
  if (f.degree() != 2 && f.degree() != 3) {
    throw Error(ErrorCode::PreconditionFailed, "cover construction needs degree 2 or 3");
  }
  if (classify(f).reducible) throw Error(ErrorCode::PreconditionFailed, "cover construction needs irreducible f");
  if (N < 4) throw Error(ErrorCode::PreconditionFailed, "block length must be at least 4");

  HarvestOptions hopt;
  hopt.threads = options.harvest_threads;
  const SNHarvest harvest = harvest_sn(f, N, hopt);
  const double budget = static_cast<double>(harvest.pairs.size());

  // Candidate base primes: P_f up to N/2, each with its least root.
  std::vector<BasePrime> candidates;
  for (u64 p : primes_up_to(N / 2)) {
    const RootsModP rts = roots_mod_p(f, p);
    if (!rts.roots.empty()) candidates.push_back({p, rts.roots.front()});
  }
  if (candidates.empty()) throw Error(ErrorCode::NoBasePrimes, "no prime of P_f lies in [2, N/2]");

  // Greedy selection against the sieve bound N prod(1 - 1/p_i) + 2^s.
  double product = 1.0;
  std::size_t chosen = 0;
  double best_bound = std::numeric_limits<double>::infinity();
  std::size_t best_s = 1;
  for (std::size_t s = 1; s <= candidates.size(); ++s) {
    product *= 1.0 - 1.0 / static_cast<double>(candidates[s - 1].p);
    const double bound = N * product + std::ldexp(1.0, static_cast<int>(std::min<std::size_t>(s, 1000)));
    if (bound < best_bound) {
      best_bound = bound;
      best_s = s;
    }
    if (options.sn_oversample * bound < budget) {
      chosen = s;
      best_bound = bound;
      break;
    }
  }
  std::vector<unsigned> holes;
  if (chosen == 0) {
    // The bound never drops below the budget (2^s overtakes it first). Fall
    // back to exact sieving: the least s whose true hole count fits, else
    // the s with fewest holes.
    std::size_t best_holes = SIZE_MAX;
    for (std::size_t s = 1; s <= candidates.size(); ++s) {
      auto hs = sieve_holes(f, N, std::span(candidates).first(s));
      if (hs.size() < best_holes) {
        best_holes = hs.size();
        best_s = s;
      }
      if (options.sn_oversample * static_cast<double>(hs.size()) < budget) {
        best_s = s;
        break;
      }
    }
    chosen = best_s;
    double prod = 1.0;
    for (std::size_t i = 0; i < chosen; ++i) prod *= 1.0 - 1.0 / static_cast<double>(candidates[i].p);
    best_bound = N * prod + std::ldexp(1.0, static_cast<int>(std::min<std::size_t>(chosen, 1000)));
  }

  CoverPlan plan{f, N, {}, {}, 1, 0, harvest.pairs.size(), best_bound};
  plan.base_primes.assign(candidates.begin(), candidates.begin() + static_cast<long>(chosen));
  holes = sieve_holes(f, N, plan.base_primes);
  if (holes.size() > harvest.pairs.size()) {
    throw Error(ErrorCode::InsufficientHarvest,
                std::to_string(holes.size()) + " holes but only " + std::to_string(harvest.pairs.size()) +
                    " harvested primes; raise N");
  }
  for (std::size_t j = 0; j < holes.size(); ++j) {
    const CloseRootPair& pair = harvest.pairs[j];
    const u64 target = 2 * static_cast<u64>(holes[j]) <= N ? pair.z_minus : pair.z_plus;
    plan.holes.push_back({holes[j], pair.p, pair.z_minus, pair.z_plus, target});
  }

  const auto cg = plan_congruences(plan);
  const CrtSolution sol = solve_crt(cg);
  plan.modulus = sol.modulus;
  plan.n0 = sol.n0;

  VerifyOptions vopt;
  vopt.sieve_bound = 1 << 10;
  vopt.hint_primes = plan.primes();
  for (int shift = 0; shift < 3; ++shift) {
    const mpz_class n = plan.n0 + plan.modulus * shift;
    try {
      verify_block(f, n, N, vopt);
    } catch (const Error& e) {
      throw Error(ErrorCode::LemmaViolation, "constructed block failed verification: " + std::string(e.what()));
    }
  }
  return plan;
}

void check_plan(const CoverPlan& plan) {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::PreconditionFailed, "invalid plan: " + why); };
  std::set<u64> moduli;
  mpz_class product = 1;
  u64 max_base = 0;
  for (const auto& b : plan.base_primes) {
    if (!is_prime_u64(b.p) || !moduli.insert(b.p).second) fail("base prime repeated or not prime");
    if (plan.f.eval_mod(b.anchor, b.p) != 0) fail("anchor is not a root modulo its prime");
    if (mod_u64(plan.n0, b.p) != b.anchor % b.p) fail("n0 misses a base congruence");
    product *= to_mpz(b.p);
    max_base = std::max(max_base, b.p);
  }
  if (static_cast<u64>(plan.N) < 2 * max_base) fail("N < 2 max base prime");
  const std::vector<unsigned> expected = sieve_holes(plan.f, plan.N, plan.base_primes);
  if (expected.size() != plan.holes.size()) fail("hole list does not match the sieve");
  for (std::size_t j = 0; j < plan.holes.size(); ++j) {
    const Hole& hole = plan.holes[j];
    if (hole.h != expected[j]) fail("hole list does not match the sieve");
    if (!is_prime_u64(hole.q) || !moduli.insert(hole.q).second) fail("hole prime repeated or not prime");
    if (plan.f.eval_mod(hole.z_minus, hole.q) != 0 || plan.f.eval_mod(hole.z_plus, hole.q) != 0) {
      fail("hole prime roots do not vanish");
    }
    const u64 expect_target = 2 * static_cast<u64>(hole.h) <= plan.N ? hole.z_minus : hole.z_plus;
    if (hole.target != expect_target) fail("hole target violates the half-block rule");
    const mpz_class want = to_mpz(hole.target) - hole.h;
    if (mod_u64(plan.n0, hole.q) != mod_u64(want, hole.q)) fail("n0 misses a hole congruence");
    product *= to_mpz(hole.q);
  }
  if (product != plan.modulus) fail("modulus is not the product of the plan primes");
  if (plan.n0 < 0 || plan.n0 >= plan.modulus) fail("n0 is not the least nonnegative solution");
}

// ---------------------------------------------------------------------------
// Brute-force scans

namespace {

u128 gcd128(u128 a, u128 b) {
  if (a == 0) return b;
  if (b == 0) return a;
  if ((a >> 64) == 0 && (b >> 64) == 0) return std::gcd(static_cast<u64>(a), static_cast<u64>(b));
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// |f(m)| for m in [lo, hi]; throws when values might overflow 2^126.
std::vector<u128> abs_values(const IntPoly& f, u64 lo, u64 hi) {
  std::vector<u128> out;
  out.reserve(hi - lo + 1);
  std::vector<__int128> c;
  for (const auto& a : f.coeffs()) {
    if (mpz_sizeinbase(a.get_mpz_t(), 2) > 62) throw Error(ErrorCode::Unsupported, "coefficients too large for scan");
    c.push_back(static_cast<__int128>(a.get_si()));
  }
  for (u64 m = lo; m <= hi; ++m) {
    __int128 acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * static_cast<__int128>(m) + *it;
    out.push_back(static_cast<u128>(acc < 0 ? -acc : acc));
  }
  return out;
}

void check_scan_range(const IntPoly& f, u64 top) {
  mpz_class bound = 0;
  const mpz_class t = to_mpz(top);
  for (int i = f.degree(); i >= 0; --i) bound = bound * t + abs(f.coeff(i));
  if (mpz_sizeinbase(bound.get_mpz_t(), 2) > 126) {
    throw Error(ErrorCode::Unsupported, "polynomial values exceed the 126-bit scan range");
  }
}

bool window_is_block(const std::vector<mpz_class>& vals) {
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (vals[i] == 0) return false;
  }
  for (std::size_t i = 0; i < vals.size(); ++i) {
    bool ok = false;
    for (std::size_t j = 0; j < vals.size() && !ok; ++j) {
      if (j != i && gcd(vals[i], vals[j]) != 1) ok = true;
    }
    if (!ok) return false;
  }
  return true;
}

}  // namespace

std::vector<ScanHit> window_scan(const IntPoly& f, unsigned kmax, u64 n_max) {
  if (kmax < 2) return {};
  const u64 top = n_max + kmax;
  check_scan_range(f, top + kmax);
  const unsigned span = kmax - 1;  // largest partner distance
  constexpr u64 chunk = 1 << 20;
  constexpr std::uint8_t none = std::numeric_limits<std::uint8_t>::max();
  if (span >= none) throw Error(ErrorCode::Unsupported, "kmax too large for window scan");

  std::vector<std::optional<u64>> first(kmax + 1);
  unsigned found = 0;

  // nearest partner distance forward / backward, capped at span
  std::vector<std::uint8_t> fwd, bwd;
  for (u64 base = 1; base <= n_max + 1; base += chunk) {
    // block starts n in [base - 1, base - 1 + chunk), elements m in [base, base + chunk + span]
    const u64 m_lo = base;
    const u64 m_hi = std::min(top, base + chunk + span);
    const u64 v_lo = m_lo > span ? m_lo - span : 1;
    const u64 v_hi = std::min(top + span, m_hi + span);
    const std::vector<u128> v = abs_values(f, v_lo, v_hi);
    auto val = [&](u64 m) { return v[m - v_lo]; };
    const u64 count = m_hi - m_lo + 1;
    fwd.assign(count, none);
    bwd.assign(count, none);
    for (u64 m = m_lo; m <= m_hi; ++m) {
      const u128 x = val(m);
      if (x == 0) continue;
      for (unsigned d = 1; d <= span && m + d <= v_hi; ++d) {
        if (gcd128(x, val(m + d)) != 1) {
          fwd[m - m_lo] = static_cast<std::uint8_t>(d);
          break;
        }
      }
      for (unsigned d = 1; d <= span && m >= v_lo + d; ++d) {
        if (gcd128(x, val(m - d)) != 1) {
          bwd[m - m_lo] = static_cast<std::uint8_t>(d);
          break;
        }
      }
    }
    const u64 n_end = std::min<u64>(n_max, base - 1 + chunk - 1);
    for (u64 n = base - 1; n <= n_end; ++n) {
      // need(m): least k with m satisfied inside [n+1, n+k]
      unsigned running = 0;
      for (unsigned k = 1; k <= kmax; ++k) {
        const u64 m = n + k;
        const u64 idx = m - m_lo;
        unsigned need;
        if (val(m) == 0) break;
        if (bwd[idx] != none && m - bwd[idx] >= n + 1) {
          need = k;
        } else if (fwd[idx] != none) {
          need = k + fwd[idx];
        } else {
          break;
        }
        running = std::max(running, need);
        if (running > kmax) break;
        if (k >= 2 && running <= k && !first[k]) {
          first[k] = n;
          ++found;
        }
      }
      if (found == kmax - 1) break;
    }
    if (found == kmax - 1) break;
  }
  std::vector<ScanHit> out;
  for (unsigned k = 2; k <= kmax; ++k) {
    if (first[k]) out.push_back({k, *first[k]});
  }
  return out;
}

RandomScan random_window_scan(const IntPoly& f, unsigned k, u64 n_max, std::uint64_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<u64> pick(0, n_max);
  RandomScan out{samples, 0, std::nullopt};
  std::vector<mpz_class> vals(k);
  for (std::uint64_t i = 0; i < samples; ++i) {
    const u64 n = pick(rng);
    for (unsigned h = 1; h <= k; ++h) vals[h - 1] = f(to_mpz(n) + h);
    if (window_is_block(vals)) {
      ++out.blocks_found;
      if (!out.first_block_n) out.first_block_n = n;
    }
  }
  return out;
}

}  // namespace polyblock
