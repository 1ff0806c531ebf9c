#include "polyblock/serialize.hpp"

#include <sstream>

#include "polyblock/error.hpp"

namespace polyblock {

namespace {

std::string str(const mpz_class& z) { return z.get_str(); }
std::string str(const mpq_class& q) { return q.get_str(); }

mpz_class big(const json& j) {
  mpz_class z;
  if (j.is_string()) {
    if (z.set_str(j.get<std::string>(), 10) != 0) {
      throw Error(ErrorCode::PreconditionFailed, "not a decimal integer: " + j.get<std::string>());
    }
  } else if (j.is_number_unsigned()) {
    z = to_mpz(j.get<u64>());
  } else if (j.is_number_integer()) {
    z = static_cast<long>(j.get<std::int64_t>());
  } else {
    throw Error(ErrorCode::PreconditionFailed, "expected an integer, got " + j.dump());
  }
  return z;
}

u64 small(const json& j) {
  const mpz_class z = big(j);
  if (z < 0 || mpz_sizeinbase(z.get_mpz_t(), 2) > 64) {
    throw Error(ErrorCode::PreconditionFailed, "value out of range: " + z.get_str());
  }
  return to_u64(z);
}

template <class F>
auto guarded(F&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::PreconditionFailed, std::string("malformed document: ") + e.what());
  }
}

const char* decision_word(Decision d) { return to_string(d).data(); }

json decision_table(const std::vector<std::pair<unsigned, Decision>>& t) {
  json out = json::array();
  for (auto [k, d] : t) out.push_back({{"k", k}, {"decision", decision_word(d)}});
  return out;
}

}  // namespace

json to_json(const CompanionPoly& c) {
  return {{"poly", c.source.to_string()}, {"companion", c.poly.to_string()}, {"in_theorem_scope", c.in_theorem_scope}};
}

json to_json(const GaloisReport& g) {
  return {{"reducible", g.reducible},
          {"group", std::string(to_string(g.group))},
          {"delta", str(g.delta)},
          {"discriminant", str(g.discriminant)},
          {"content", str(g.content)}};
}

json to_json(const RootsModP& r) {
  return {{"p", r.p}, {"roots", r.roots}, {"degenerate", r.degenerate}};
}

json to_json(const PrimeSetReport& r) {
  json j = {{"x", r.x},
            {"count", r.count},
            {"prime_count", r.prime_count},
            {"delta", str(r.delta)},
            {"expected", r.expected},
            {"observed_density", r.observed_density()},
            {"relative_error", r.relative_error}};
  if (!r.primes.empty()) j["primes"] = r.primes;
  return j;
}

json to_json(const SNHarvest& h) {
  json pairs = json::array();
  for (const auto& p : h.pairs) {
    pairs.push_back({{"p", p.p}, {"r", p.r}, {"z_minus", p.z_minus}, {"z_plus", p.z_plus}});
  }
  return {{"N", h.N}, {"count", h.pairs.size()}, {"ratio", h.count_ratio()}, {"pairs", pairs}, {"warnings", h.warnings}};
}

json to_json(const ValuationReport& v) {
  return {{"p", v.p},
          {"N", v.N},
          {"nu", v.nu},
          {"tf", v.tf},
          {"main_term", str(v.main_term)},
          {"error_bound", v.error_bound},
          {"within_bound", v.within_bound()}};
}

json to_json(const BlockWitness& w) {
  json partners = json::array();
  for (const auto& p : w.partners) {
    partners.push_back({{"offset", p.offset},
                        {"partner", p.partner},
                        {"prime", str(p.prime)},
                        {"prime_certified", p.prime_certified}});
  }
  return {{"n", str(w.n)}, {"k", w.k}, {"partners", partners}};
}

json to_json(const CoverPlan& plan) {
  json base = json::array();
  for (const auto& b : plan.base_primes) base.push_back({{"p", b.p}, {"anchor", b.anchor}});
  json holes = json::array();
  for (const auto& h : plan.holes) {
    holes.push_back({{"h", h.h}, {"q", h.q}, {"z_minus", h.z_minus}, {"z_plus", h.z_plus}, {"target", h.target}});
  }
  return {{"poly", plan.f.to_string()},
          {"N", plan.N},
          {"base_primes", base},
          {"holes", holes},
          {"modulus", str(plan.modulus)},
          {"n0", str(plan.n0)},
          {"harvested", plan.harvested},
          {"predicted_holes", plan.predicted_holes}};
}

json to_json(const ExistenceCertificate& c) {
  json choices = json::array();
  for (const auto& ch : c.choices) choices.push_back({{"p", ch.p}, {"c", ch.c}, {"offsets", ch.offsets}});
  json j = {{"k", c.k},
            {"exists", c.exists},
            {"choices", choices},
            {"relevant_primes", c.relevant_primes},
            {"witness_n", nullptr},
            {"modulus", str(c.modulus)},
            {"nodes", c.nodes}};
  if (c.witness_n) j["witness_n"] = str(*c.witness_n);
  return j;
}

json to_json(const GfResult& g) {
  json j = {{"gf", nullptr}, {"unknown", g.unknown}};
  if (g.gf) j["gf"] = *g.gf;
  if (g.upper_bound) j["upper_bound"] = *g.upper_bound;
  j["table"] = decision_table(g.table);
  return j;
}

json to_json(const GScanResult& g) {
  json j = {{"table", decision_table(g.table)},
            {"cover_fallbacks", g.cover_fallbacks},
            {"tail_start", nullptr},
            {"gaps", g.gaps},
            {"note", g.note}};
  if (g.tail_start) j["tail_start"] = *g.tail_start;
  return j;
}

CoverPlan plan_from_json(const json& j) {
  return guarded([&] {
    CoverPlan plan{IntPoly::parse(j.at("poly").get<std::string>()), j.at("N").get<unsigned>(), {}, {}, big(j.at("modulus")),
                   big(j.at("n0")), small(j.at("harvested")), j.at("predicted_holes").get<double>()};
    for (const auto& b : j.at("base_primes")) plan.base_primes.push_back({small(b.at("p")), small(b.at("anchor"))});
    for (const auto& h : j.at("holes")) {
      plan.holes.push_back({h.at("h").get<unsigned>(), small(h.at("q")), small(h.at("z_minus")), small(h.at("z_plus")),
                            small(h.at("target"))});
    }
    return plan;
  });
}

BlockWitness witness_from_json(const json& j) {
  return guarded([&] {
    BlockWitness w{big(j.at("n")), j.at("k").get<unsigned>(), {}};
    for (const auto& p : j.at("partners")) {
      w.partners.push_back({p.at("offset").get<unsigned>(), p.at("partner").get<unsigned>(), big(p.at("prime")),
                            p.value("prime_certified", true)});
    }
    return w;
  });
}

ExistenceCertificate certificate_from_json(const json& j) {
  return guarded([&] {
    ExistenceCertificate c{j.at("k").get<unsigned>(), j.at("exists").get<bool>(), {},
                           j.at("relevant_primes").get<std::vector<u64>>(), std::nullopt, big(j.at("modulus")),
                           j.at("nodes").get<std::uint64_t>()};
    for (const auto& ch : j.at("choices")) {
      c.choices.push_back({small(ch.at("p")), small(ch.at("c")), ch.at("offsets").get<std::vector<unsigned>>()});
    }
    if (!j.at("witness_n").is_null()) c.witness_n = big(j.at("witness_n"));
    return c;
  });
}

// ---------------------------------------------------------------------------
// CSV

std::string to_csv(const RootsModP& r) {
  std::ostringstream os;
  os << "p,root\n";
  for (u64 z : r.roots) os << r.p << ',' << z << '\n';
  return os.str();
}

std::string to_csv(const PrimeSetReport& r) {
  std::ostringstream os;
  os.precision(10);
  os << "x,count,prime_count,delta,expected,observed_density,relative_error\n";
  os << r.x << ',' << r.count << ',' << r.prime_count << ',' << str(r.delta) << ',' << r.expected << ','
     << r.observed_density() << ',' << r.relative_error << '\n';
  return os.str();
}

std::string to_csv(const SNHarvest& h) {
  std::ostringstream os;
  os << "N,p,r,z_minus,z_plus\n";
  for (const auto& p : h.pairs) os << h.N << ',' << p.p << ',' << p.r << ',' << p.z_minus << ',' << p.z_plus << '\n';
  return os.str();
}

std::string to_csv(const ValuationReport& v) {
  std::ostringstream os;
  os.precision(10);
  os << "p,N,nu,tf,main_term,error_bound,within_bound\n";
  os << v.p << ',' << v.N << ',' << v.nu << ',' << v.tf << ',' << str(v.main_term) << ',' << v.error_bound << ','
     << (v.within_bound() ? 1 : 0) << '\n';
  return os.str();
}

std::string to_csv(const BlockWitness& w) {
  std::ostringstream os;
  os << "n,offset,partner,prime,prime_certified\n";
  for (const auto& p : w.partners) {
    os << str(w.n) << ',' << p.offset << ',' << p.partner << ',' << str(p.prime) << ',' << (p.prime_certified ? 1 : 0)
       << '\n';
  }
  return os.str();
}

std::string to_csv(const CoverPlan& plan) {
  std::ostringstream os;
  os << "kind,h,prime,residue\n";
  for (const auto& b : plan.base_primes) os << "base,," << b.p << ',' << b.anchor << '\n';
  for (const auto& h : plan.holes) os << "hole," << h.h << ',' << h.q << ',' << h.target << '\n';
  return os.str();
}

std::string to_csv(const ExistenceCertificate& c) {
  std::ostringstream os;
  os << "k,exists,p,c,offsets\n";
  if (c.choices.empty()) os << c.k << ',' << (c.exists ? 1 : 0) << ",,,\n";
  for (const auto& ch : c.choices) {
    os << c.k << ',' << (c.exists ? 1 : 0) << ',' << ch.p << ',' << ch.c << ',';
    for (std::size_t i = 0; i < ch.offsets.size(); ++i) os << (i ? " " : "") << ch.offsets[i];
    os << '\n';
  }
  return os.str();
}

std::string to_csv(const GfResult& g) {
  std::ostringstream os;
  os << "k,decision\n";
  for (auto [k, d] : g.table) os << k << ',' << to_string(d) << '\n';
  return os.str();
}

std::string to_csv(const GScanResult& g) {
  std::ostringstream os;
  os << "k,decision,by_cover\n";
  for (auto [k, d] : g.table) {
    const bool cover = std::find(g.cover_fallbacks.begin(), g.cover_fallbacks.end(), k) != g.cover_fallbacks.end();
    os << k << ',' << to_string(d) << ',' << (cover ? 1 : 0) << '\n';
  }
  return os.str();
}

}  // namespace polyblock
