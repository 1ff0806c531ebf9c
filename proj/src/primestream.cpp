#include "polyblock/primestream.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

#include "polyblock/error.hpp"

namespace polyblock {

namespace {

double simpson(double a, double b, double fa, double fm, double fb) { return (b - a) / 6.0 * (fa + 4.0 * fm + fb); }

double adaptive(double a, double b, double fa, double fm, double fb, double whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = 1.0 / std::log(lm), frm = 1.0 / std::log(rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
  return adaptive(a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         adaptive(m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

}  // namespace

double log_integral(double x, double rel_tol) {
  if (x <= 2.0) return 0.0;
  // 1/ln t is smooth on [2, x]; the crude estimate x / ln x sets the scale.
  const double eps = rel_tol * x / std::log(x);
  const double fa = 1.0 / std::log(2.0), fb = 1.0 / std::log(x);
  const double m = 0.5 * (2.0 + x);
  const double fm = 1.0 / std::log(m);
  return adaptive(2.0, x, fa, fm, fb, simpson(2.0, x, fa, fm, fb), eps, 60);
}

PrimeSetReport enumerate_pf(const IntPoly& f, u64 x, bool keep_primes) {
  return enumerate_pf(f, x, prime_density(f), keep_primes);
}

PrimeSetReport enumerate_pf(const IntPoly& f, u64 x, const mpq_class& delta, bool keep_primes) {
  if (x < 2) throw Error(ErrorCode::PreconditionFailed, "bound must be at least 2");
  PrimeSetReport report{x, 0, 0, 0.0, delta, 0.0, {}};
  SegmentedSieve sieve(2, x + 1);
  std::vector<u64> segment;
  while (sieve.next_segment(segment)) {
    for (u64 p : segment) {
      ++report.prime_count;
      if (has_root_mod_p(f, p)) {
        ++report.count;
        if (keep_primes) report.primes.push_back(p);
      }
    }
  }
  report.expected = delta.get_d() * log_integral(static_cast<double>(x));
  report.relative_error = (static_cast<double>(report.count) - report.expected) / report.expected;
  return report;
}

namespace {

struct Candidate {
  u64 q;
  u64 r;
};

void harvest_range(const CompanionPoly& comp, u64 r_lo, u64 r_hi, const std::vector<u64>& small,
                   const HarvestOptions& options, std::vector<Candidate>& out, std::vector<std::string>& warnings) {
  const IntPoly& f = comp.source;
  for (u64 r = r_lo; r <= r_hi; ++r) {
    mpz_class v = abs(comp.poly(to_mpz(r)));
    if (v == 0) {
      warnings.push_back("f~(" + std::to_string(r) + ") = 0; skipped");
      continue;
    }
    for (u64 p : small) {
      if (v == 1) break;
      while (mpz_divisible_ui_p(v.get_mpz_t(), p)) mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), p);
    }
    if (v == 1) continue;
    FactorResult fr = factor(v, options.max_cofactor_bits);
    if (!fr.complete()) {
      warnings.push_back("r = " + std::to_string(r) + ": cofactor " + fr.unfactored.get_str() + " left unfactored");
    }
    for (const auto& [q_big, e] : fr.factors) {
      (void)e;
      if (mpz_sizeinbase(q_big.get_mpz_t(), 2) > 63) {
        warnings.push_back("r = " + std::to_string(r) + ": prime " + q_big.get_str() + " exceeds machine width");
        continue;
      }
      const u64 q = to_u64(q_big);
      if (mod_u64(f.leading(), q) == 0) continue;
      out.push_back({q, r});
    }
  }
}

}  // namespace

SNHarvest harvest_sn(const IntPoly& f, u64 N, const HarvestOptions& options) {
  if (N < 4) throw Error(ErrorCode::PreconditionFailed, "harvest needs N >= 4");
  const CompanionPoly comp = companion(f);
  const u64 half = N / 2;
  const std::vector<u64> small = primes_up_to(half);

  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(half)));
  std::vector<std::vector<Candidate>> found(threads);
  std::vector<std::vector<std::string>> warnings(threads);
  std::vector<std::thread> pool;
  const u64 chunk = (half + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const u64 lo = 1 + t * chunk;
    const u64 hi = std::min(half, lo + chunk - 1);
    if (lo > hi) continue;
    auto job = [&, t, lo, hi] { harvest_range(comp, lo, hi, small, options, found[t], warnings[t]); };
    if (threads == 1) {
      job();
    } else {
      pool.emplace_back(job);
    }
  }
  for (auto& th : pool) th.join();

  // Merge by prime keeping the smallest gap; chunks are in ascending r.
  std::map<u64, u64> best;
  for (const auto& part : found) {
    for (const auto& c : part) {
      auto [it, inserted] = best.emplace(c.q, c.r);
      if (!inserted) it->second = std::min(it->second, c.r);
    }
  }
  SNHarvest harvest{N, {}, {}};
  for (auto& w : warnings) harvest.warnings.insert(harvest.warnings.end(), w.begin(), w.end());
  harvest.pairs.reserve(best.size());
  for (auto [q, r] : best) {
    if (q == 3 && f.degree() == 3) {
      try {
        harvest.pairs.push_back(close_root_pair(comp, q, r));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::PreconditionFailed) throw;
        harvest.warnings.push_back("p = 3 skipped: " + std::string(e.what()));
      }
      continue;
    }
    harvest.pairs.push_back(close_root_pair(comp, q, r));
  }
  return harvest;
}

bool ValuationReport::within_bound() const {
  const double diff = std::fabs(static_cast<double>(nu) - main_term.get_d());
  return diff <= error_bound;
}

ValuationReport valuation_qn(const IntPoly& f, u64 p, u64 N) {
  if (!is_prime_u64(p)) throw Error(ErrorCode::PreconditionFailed, "p must be prime");
  if (N < 1) throw Error(ErrorCode::PreconditionFailed, "N must be positive");
  if (mod_u64(f.leading(), p) == 0 || mod_u64(discriminant(f), p) == 0) {
    throw Error(ErrorCode::RamifiedPrime, "prime " + std::to_string(p) + " divides a_k disc(f)");
  }
  for (u64 n = 1; n <= N; ++n) {
    if (f(to_mpz(n)) == 0) {
      throw Error(ErrorCode::RootInRange, "f vanishes at n = " + std::to_string(n), static_cast<long>(n));
    }
  }
  // Every nonzero |f(n)|, n <= N, is at most sum |a_i| N^i.
  mpz_class bound = 0;
  {
    const mpz_class big_n = to_mpz(N);
    for (int i = f.degree(); i >= 0; --i) bound = bound * big_n + abs(f.coeff(i));
  }

  const RootsModP roots = roots_mod_p(f, p);
  ValuationReport report{p, N, 0, static_cast<unsigned>(roots.roots.size()), 0, 0.0};
  report.main_term = mpq_class(to_mpz(static_cast<u64>(report.tf) * N), to_mpz(p - 1));
  report.main_term.canonicalize();
  const double k = f.degree();
  report.error_bound = 4.0 * k * (std::log(static_cast<double>(N)) / std::log(static_cast<double>(p)) + 1.0);

  const mpz_class pp = to_mpz(p);
  const mpz_class big_n = to_mpz(N);
  for (u64 z : roots.roots) {
    mpz_class modulus = pp;
    for (unsigned level = 1; modulus <= bound; ++level, modulus *= pp) {
      mpz_class lifted = hensel_lift(f, p, z, level);
      if (lifted == 0) lifted = modulus;  // smallest positive representative
      if (lifted > big_n) break;
      mpz_class hits = (big_n - lifted) / modulus + 1;
      report.nu += to_u64(hits);
    }
  }
  return report;
}

std::vector<RatioPoint> sn_ratio_scan(const IntPoly& f, const std::vector<u64>& Ns, const HarvestOptions& options) {
  std::vector<RatioPoint> out;
  for (u64 N : Ns) {
    const SNHarvest h = harvest_sn(f, N, options);
    out.push_back({N, h.pairs.size(), h.count_ratio()});
  }
  return out;
}

}  // namespace polyblock
