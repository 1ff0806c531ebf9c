#include <algorithm>
#include <bitset>
#include <map>
#include <set>

#include "polyblock/cover.hpp"
#include "polyblock/error.hpp"

namespace polyblock {

std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::Exists: return "exists";
    case Decision::Absent: return "absent";
    case Decision::Unknown: return "unknown";
  }
  return "unknown";
}

std::vector<u64> relevant_primes(const IntPoly& f, unsigned k, std::size_t max_primes) {
  std::set<mpz_class> found;
  auto absorb = [&](const mpz_class& value, const std::string& what) {
    if (value == 0) {
      throw Error(ErrorCode::Unsupported, what + " vanishes: f has two roots at an integer distance");
    }
    FactorResult fr = factor(value, 192);
    if (!fr.complete()) throw Error(ErrorCode::BudgetExceeded, "could not factor " + what);
    for (const auto& [p, e] : fr.factors) {
      (void)e;
      found.insert(p);
    }
  };
  if (abs(f.leading()) != 1) absorb(f.leading(), "a_k");
  if (f.degree() >= 2) {
    // Res_X(f(X), f(X + d)) = a_k^2 d^k f~(d); factor the pieces separately.
    const CompanionPoly comp = companion(f);
    for (unsigned d = 1; d < k; ++d) {
      if (d > 1) absorb(d, "d");
      absorb(comp.poly(d), "f~(" + std::to_string(d) + ")");
      if (found.size() > max_primes) throw Error(ErrorCode::BudgetExceeded, "too many relevant primes");
    }
  } else {
    for (unsigned d = 1; d < k; ++d) {
      const mpz_class r = resultant(f, f.shifted(d));
      if (abs(r) != 1) absorb(r, "Res(f(X), f(X+" + std::to_string(d) + "))");
    }
  }
  if (found.size() > max_primes) throw Error(ErrorCode::BudgetExceeded, "too many relevant primes");
  std::vector<u64> out;
  for (const auto& p : found) {
    if (mpz_sizeinbase(p.get_mpz_t(), 2) > 63) {
      throw Error(ErrorCode::Unsupported, "relevant prime " + p.get_str() + " exceeds machine width");
    }
    out.push_back(to_u64(p));
  }
  return out;
}

namespace {

using Mask = std::bitset<kMaxBlockLength + 1>;  // bit h for offset h

struct Option {
  std::size_t prime_index;
  u64 p;
  u64 c;
  Mask mask;
};

std::vector<unsigned> offsets_of(const Mask& m, unsigned k) {
  std::vector<unsigned> out;
  for (unsigned h = 1; h <= k; ++h) {
    if (m[h]) out.push_back(h);
  }
  return out;
}

// Useful residue classes c mod p: those where p divides at least two of
// f(c+1), ..., f(c+k).
std::vector<Option> classes_for(const IntPoly& f, u64 p, std::size_t prime_index, unsigned k, bool keep_dominated) {
  const RootsModP rts = roots_mod_p(f, p);
  std::map<u64, Mask> by_class;
  if (rts.roots.empty()) return {};
  if (p <= 2 * static_cast<u64>(k)) {
    std::vector<char> is_root(p, 0);
    for (u64 z : rts.roots) is_root[z] = 1;
    for (u64 c = 0; c < p; ++c) {
      Mask m;
      unsigned count = 0;
      for (unsigned h = 1; h <= k; ++h) {
        if (is_root[(c + h) % p]) {
          m.set(h);
          ++count;
        }
      }
      if (count >= 2) by_class[c] = m;
    }
  } else {
    // Each root hits at most one offset; useful classes come from root pairs
    // whose difference is below k.
    std::set<u64> cs;
    for (u64 z1 : rts.roots) {
      for (u64 z2 : rts.roots) {
        if (z1 == z2) continue;
        const u64 gap = submod(z2, z1, p);
        if (gap == 0 || gap >= k) continue;
        for (u64 h1 = 1; h1 + gap <= k; ++h1) cs.insert(submod(z1, h1 % p, p));
      }
    }
    for (u64 c : cs) {
      Mask m;
      for (u64 z : rts.roots) {
        const u64 h = submod(z, c, p);
        if (h >= 1 && h <= k) m.set(h);
      }
      if (m.count() >= 2) by_class[c] = m;
    }
  }
  std::vector<Option> out;
  for (auto& [c, m] : by_class) out.push_back({prime_index, p, c, m});
  if (!keep_dominated) {
    // Drop classes whose offset set is contained in another class of the
    // same prime; one class per prime is chosen, so the larger one suffices.
    std::vector<Option> kept;
    for (std::size_t i = 0; i < out.size(); ++i) {
      bool dominated = false;
      for (std::size_t j = 0; j < out.size() && !dominated; ++j) {
        if (i == j) continue;
        const bool subset = (out[i].mask & ~out[j].mask).none();
        if (subset && (out[i].mask != out[j].mask || j < i)) dominated = true;
      }
      if (!dominated) kept.push_back(out[i]);
    }
    out = std::move(kept);
  }
  return out;
}

class Search {
 public:
  Search(const IntPoly& f, unsigned k, std::vector<Option> options, std::size_t prime_count,
         const DecideOptions& cfg)
      : f_(f), k_(k), options_(std::move(options)), used_(prime_count, false), banned_(options_.size(), false),
        cfg_(cfg) {
    for (unsigned h = 1; h <= k; ++h) full_.set(h);
    by_offset_.resize(k + 1);
    for (std::size_t i = 0; i < options_.size(); ++i) {
      for (unsigned h = 1; h <= k; ++h) {
        if (options_[i].mask[h]) by_offset_[h].push_back(i);
      }
    }
    by_prime_.resize(prime_count);
    for (std::size_t i = 0; i < options_.size(); ++i) by_prime_[options_[i].prime_index].push_back(i);
  }

  void run() { dfs(Mask{}); }

  std::uint64_t nodes() const { return nodes_; }
  bool found() const { return best_.has_value(); }
  const std::vector<std::size_t>& best_choice() const { return best_choice_; }
  const std::optional<mpz_class>& best_n() const { return best_; }
  const mpz_class& best_modulus() const { return best_modulus_; }
  const Option& option(std::size_t i) const { return options_[i]; }

 private:
  bool available(std::size_t i) const { return !banned_[i] && !used_[options_[i].prime_index]; }

  // Returns true to stop the search.
  bool dfs(const Mask& covered) {
    if (++nodes_ > cfg_.max_nodes) {
      throw Error(ErrorCode::BudgetExceeded, "backtracking exceeded " + std::to_string(cfg_.max_nodes) + " nodes");
    }
    if (covered == full_) return leaf();

    const Mask uncovered = full_ & ~covered;
    const std::size_t need = uncovered.count();
    // Reachability and capacity bounds over unused primes.
    Mask reach = covered;
    std::size_t capacity = 0;
    for (std::size_t pi = 0; pi < by_prime_.size(); ++pi) {
      if (used_[pi]) continue;
      std::size_t best = 0;
      for (std::size_t i : by_prime_[pi]) {
        if (banned_[i]) continue;
        const Mask gain = options_[i].mask & uncovered;
        reach |= gain;
        best = std::max(best, gain.count());
      }
      capacity += best;
    }
    if (reach != full_ || capacity < need) return false;

    // Branch on the uncovered offset with the fewest available options.
    unsigned pivot = 0;
    std::size_t pivot_count = SIZE_MAX;
    for (unsigned h = 1; h <= k_; ++h) {
      if (!uncovered[h]) continue;
      std::size_t count = 0;
      for (std::size_t i : by_offset_[h]) count += available(i);
      if (count < pivot_count) {
        pivot = h;
        pivot_count = count;
      }
    }
    if (pivot_count == 0) return false;

    std::vector<std::size_t> branch;
    for (std::size_t i : by_offset_[pivot]) {
      if (available(i)) branch.push_back(i);
    }
    std::sort(branch.begin(), branch.end(), [&](std::size_t a, std::size_t b) {
      return (options_[a].mask & uncovered).count() > (options_[b].mask & uncovered).count();
    });
    std::vector<std::size_t> banned_here;
    bool stop = false;
    for (std::size_t i : branch) {
      used_[options_[i].prime_index] = true;
      chosen_.push_back(i);
      stop = dfs(covered | options_[i].mask);
      chosen_.pop_back();
      used_[options_[i].prime_index] = false;
      if (stop) break;
      // Every solution containing option i was explored in its subtree.
      banned_[i] = true;
      banned_here.push_back(i);
    }
    for (std::size_t i : banned_here) banned_[i] = false;
    return stop;
  }

  bool leaf() {
    std::vector<Congruence> cg;
    for (std::size_t i : chosen_) cg.push_back({to_mpz(options_[i].c), options_[i].p});
    CrtSolution sol = solve_crt(cg);
    // Zero values occur only at integer roots; step past them.
    auto has_zero = [&](const mpz_class& n) {
      for (unsigned h = 1; h <= k_; ++h) {
        if (f_(n + h) == 0) return true;
      }
      return false;
    };
    while (has_zero(sol.n0)) sol.n0 += sol.modulus;
    if (!best_ || sol.n0 < *best_) {
      best_ = sol.n0;
      best_modulus_ = sol.modulus;
      best_choice_ = chosen_;
    }
    return !cfg_.minimal_witness;
  }

  const IntPoly& f_;
  unsigned k_;
  std::vector<Option> options_;
  std::vector<bool> used_;
  std::vector<bool> banned_;
  DecideOptions cfg_;
  Mask full_;
  std::vector<std::vector<std::size_t>> by_offset_;
  std::vector<std::vector<std::size_t>> by_prime_;
  std::vector<std::size_t> chosen_;
  std::uint64_t nodes_ = 0;
  std::optional<mpz_class> best_;
  mpz_class best_modulus_ = 1;
  std::vector<std::size_t> best_choice_;
};

}  // namespace

ExistenceCertificate decide_block(const IntPoly& f, unsigned k, const DecideOptions& options) {
  if (k < 2) throw Error(ErrorCode::PreconditionFailed, "block length must be at least 2");
  if (k > kMaxBlockLength) throw Error(ErrorCode::Unsupported, "block length above " + std::to_string(kMaxBlockLength));
  ExistenceCertificate cert{k, false, {}, relevant_primes(f, k, options.max_primes), std::nullopt, 1, 0};

  std::vector<Option> all;
  for (std::size_t i = 0; i < cert.relevant_primes.size(); ++i) {
    auto opts = classes_for(f, cert.relevant_primes[i], i, k, options.minimal_witness);
    all.insert(all.end(), opts.begin(), opts.end());
  }
  Search search(f, k, std::move(all), cert.relevant_primes.size(), options);
  search.run();
  cert.nodes = search.nodes();
  if (!search.found()) return cert;

  cert.exists = true;
  cert.witness_n = search.best_n();
  cert.modulus = search.best_modulus();
  VerifyOptions vo;
  for (std::size_t i : search.best_choice()) {
    const Option& o = search.option(i);
    cert.choices.push_back({o.p, o.c, offsets_of(o.mask, k)});
    vo.hint_primes.push_back(o.p);
  }
  std::sort(cert.choices.begin(), cert.choices.end(),
            [](const ResidueChoice& a, const ResidueChoice& b) { return a.p < b.p; });
  try {
    verify_block(f, *cert.witness_n, k, vo);
  } catch (const Error& e) {
    throw Error(ErrorCode::LemmaViolation, "reconstructed witness fails: " + std::string(e.what()));
  }
  return cert;
}

GfResult gf_search(const IntPoly& f, unsigned kmax, const DecideOptions& options) {
  GfResult out;
  bool budget_hit = false;
  for (unsigned k = 2; k <= kmax; ++k) {
    try {
      const ExistenceCertificate c = decide_block(f, k, options);
      out.table.emplace_back(k, c.exists ? Decision::Exists : Decision::Absent);
      if (c.exists) {
        if (budget_hit) {
          out.unknown = true;
          out.upper_bound = k;
        } else {
          out.gf = k;
        }
        return out;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BudgetExceeded) throw;
      out.table.emplace_back(k, Decision::Unknown);
      budget_hit = true;
    }
  }
  out.unknown = budget_hit;
  return out;
}

GScanResult gf_estimate_scan(const IntPoly& f, unsigned kmax, const DecideOptions& options) {
  GScanResult out;
  for (unsigned k = 2; k <= kmax; ++k) {
    Decision d = Decision::Unknown;
    try {
      d = decide_block(f, k, options).exists ? Decision::Exists : Decision::Absent;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BudgetExceeded) throw;
      if (f.degree() >= 2 && (f.degree() <= 3) && k >= 4) {
        try {
          build_cover(f, k);
          d = Decision::Exists;
          out.cover_fallbacks.push_back(k);
        } catch (const Error&) {
        }
      }
    }
    out.table.emplace_back(k, d);
  }
  bool seen = false;
  for (auto [k, d] : out.table) {
    if (d == Decision::Exists) {
      seen = true;
    } else if (seen) {
      out.gaps.push_back(k);
    }
  }
  for (auto it = out.table.rbegin(); it != out.table.rend() && it->second == Decision::Exists; ++it) {
    out.tail_start = it->first;
  }
  out.note = "heuristic: success on [tail_start, kmax] does not prove success beyond kmax";
  return out;
}

}  // namespace polyblock
