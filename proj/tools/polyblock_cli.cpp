// polyblock: command-line front end.
//
//   polyblock companion --poly 1,0,1
//   polyblock verify --poly 0,1 --n 2183 --k 17
//   polyblock gf --poly 0,1 --kmax 20
//
// Exit status: 0 success, 1 domain error (JSON error object on stdout),
// 2 usage error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "polyblock/cover.hpp"
#include "polyblock/error.hpp"
#include "polyblock/primestream.hpp"
#include "polyblock/serialize.hpp"

using namespace polyblock;

namespace {

struct RunConfig {
  std::string poly;
  std::string format = "json";
  std::string out;
  u64 x = 0;
  u64 n_small = 0;
  std::string n;
  unsigned k = 0;
  unsigned kmax = 0;
  u64 N = 0;
  u64 p = 0;
  std::uint64_t seed = 1;
  std::uint64_t samples = 0;
  std::uint64_t budget_nodes = DecideOptions{}.max_nodes;
  std::string plan;
  std::string witness;
  bool minimal = false;
  double oversample = 1.0;
  unsigned threads = 1;
};

struct Output {
  json j;
  std::string csv;  // empty: flatten j
};

std::string flat_csv(const json& j) {
  std::string head, row;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.value().is_structured()) continue;
    if (!head.empty()) {
      head += ',';
      row += ',';
    }
    head += it.key();
    row += it.value().is_string() ? it.value().get<std::string>() : it.value().dump();
  }
  return head + "\n" + row + "\n";
}

std::string text_of(const json& j) {
  std::string s;
  for (auto it = j.begin(); it != j.end(); ++it) {
    s += it.key() + ": " + (it.value().is_string() ? it.value().get<std::string>() : it.value().dump()) + "\n";
  }
  return s;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::PreconditionFailed, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::PreconditionFailed, path + ": " + e.what());
  }
}

mpz_class parse_big(const std::string& s, const char* what) {
  mpz_class z;
  if (s.empty() || z.set_str(s, 10) != 0) throw Error(ErrorCode::PreconditionFailed, std::string("bad ") + what + ": " + s);
  return z;
}

Output run(const std::string& cmd, const RunConfig& c) {
  if (cmd == "verify" && !c.plan.empty()) {
    const CoverPlan plan = plan_from_json(read_json_file(c.plan));
    check_plan(plan);
    VerifyOptions vo;
    vo.sieve_bound = 1 << 10;
    vo.hint_primes = plan.primes();
    const BlockWitness w = verify_block(plan.f, plan.n0, plan.N, vo);
    json j = {{"plan_valid", true}, {"n0", plan.n0.get_str()}, {"N", plan.N}, {"witness", to_json(w)}};
    return {j, to_csv(w)};
  }
  if (cmd == "verify" && !c.witness.empty()) {
    const json doc = read_json_file(c.witness);
    const BlockWitness w = witness_from_json(doc.contains("witness") ? doc.at("witness") : doc);
    const IntPoly f = IntPoly::parse(c.poly);
    if (!check_witness(f, w)) throw Error(ErrorCode::LemmaViolation, "witness claims do not hold");
    return {{{"witness_valid", true}, {"n", w.n.get_str()}, {"k", w.k}}, {}};
  }

  const IntPoly f = IntPoly::parse(c.poly);
  DecideOptions dopt;
  dopt.max_nodes = c.budget_nodes;
  dopt.minimal_witness = c.minimal;

  if (cmd == "companion") {
    const CompanionPoly comp = companion(f);
    return {to_json(comp), {}};
  }
  if (cmd == "classify") return {to_json(classify(f)), {}};
  if (cmd == "roots") {
    const RootsModP r = roots_mod_p(f, c.p);
    return {to_json(r), to_csv(r)};
  }
  if (cmd == "density") {
    const PrimeSetReport r = enumerate_pf(f, c.x);
    return {to_json(r), to_csv(r)};
  }
  if (cmd == "valuation") {
    const ValuationReport v = valuation_qn(f, c.p, c.N);
    return {to_json(v), to_csv(v)};
  }
  if (cmd == "harvest") {
    HarvestOptions h;
    h.threads = c.threads;
    const SNHarvest s = harvest_sn(f, c.N, h);
    return {to_json(s), to_csv(s)};
  }
  if (cmd == "cover") {
    CoverOptions o;
    o.sn_oversample = c.oversample;
    o.harvest_threads = c.threads;
    const CoverPlan plan = build_cover(f, static_cast<unsigned>(c.N), o);
    return {to_json(plan), to_csv(plan)};
  }
  if (cmd == "verify") {
    if (c.samples > 0) {
      const RandomScan r = random_window_scan(f, c.k, c.x, c.samples, c.seed);
      json j = {{"k", c.k}, {"n_max", c.x}, {"seed", c.seed}, {"samples", r.samples}, {"blocks_found", r.blocks_found},
                {"first_block_n", nullptr}};
      if (r.first_block_n) j["first_block_n"] = *r.first_block_n;
      return {j, {}};
    }
    const BlockWitness w = verify_block(f, parse_big(c.n, "--n"), c.k);
    return {to_json(w), to_csv(w)};
  }
  if (cmd == "decide") {
    const ExistenceCertificate cert = decide_block(f, c.k, dopt);
    return {to_json(cert), to_csv(cert)};
  }
  if (cmd == "gf") {
    const GfResult g = gf_search(f, c.kmax, dopt);
    return {to_json(g), to_csv(g)};
  }
  if (cmd == "gscan") {
    const GScanResult g = gf_estimate_scan(f, c.kmax, dopt);
    return {to_json(g), to_csv(g)};
  }
  throw Error(ErrorCode::PreconditionFailed, "unknown command " + cmd);
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::PreconditionFailed, "cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blocks of polynomial values sharing prime factors"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* s, bool poly_required = true) {
    auto* o = s->add_option("--poly", cfg.poly, "coefficients, constant term first (e.g. 1,0,1)");
    if (poly_required) o->required();
    s->add_option("--format", cfg.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
    s->add_option("--out", cfg.out, "write output to FILE");
  };

  auto* companion_cmd = app.add_subcommand("companion", "root-difference companion polynomial");
  common(companion_cmd);
  auto* classify_cmd = app.add_subcommand("classify", "reducibility, Galois group and prime density");
  common(classify_cmd);
  auto* roots_cmd = app.add_subcommand("roots", "roots modulo a prime");
  common(roots_cmd);
  roots_cmd->add_option("--p", cfg.p, "prime modulus")->required();
  auto* density_cmd = app.add_subcommand("density", "count primes dividing some value");
  common(density_cmd);
  density_cmd->add_option("--x", cfg.x, "prime bound")->required();
  auto* valuation_cmd = app.add_subcommand("valuation", "p-adic valuation of f(1)...f(N)");
  common(valuation_cmd);
  valuation_cmd->add_option("--p", cfg.p, "prime")->required();
  valuation_cmd->add_option("--N", cfg.N, "product length")->required();
  auto* harvest_cmd = app.add_subcommand("harvest", "large primes with close root pairs");
  common(harvest_cmd);
  harvest_cmd->add_option("--N", cfg.N, "block length")->required();
  harvest_cmd->add_option("--threads", cfg.threads, "worker threads");
  auto* cover_cmd = app.add_subcommand("cover", "construct a block of length N by CRT");
  common(cover_cmd);
  cover_cmd->add_option("--N", cfg.N, "block length")->required();
  cover_cmd->add_option("--oversample", cfg.oversample, "margin on the predicted hole count");
  cover_cmd->add_option("--threads", cfg.threads, "worker threads");
  auto* verify_cmd = app.add_subcommand("verify", "check the block property of a window, plan or witness");
  common(verify_cmd, false);
  verify_cmd->add_option("--n", cfg.n, "window start (block is f(n+1..n+k))");
  verify_cmd->add_option("--k", cfg.k, "block length");
  verify_cmd->add_option("--plan", cfg.plan, "cover plan JSON to re-verify");
  verify_cmd->add_option("--witness", cfg.witness, "block witness JSON to re-check");
  verify_cmd->add_option("--samples", cfg.samples, "random windows to sample from [0, x]");
  verify_cmd->add_option("--x", cfg.x, "upper bound for sampled n");
  verify_cmd->add_option("--seed", cfg.seed, "seed for sampling");
  auto* decide_cmd = app.add_subcommand("decide", "decide whether a block of length k exists");
  common(decide_cmd);
  decide_cmd->add_option("--k", cfg.k, "block length")->required();
  decide_cmd->add_option("--budget-nodes", cfg.budget_nodes, "search node budget");
  decide_cmd->add_flag("--minimal", cfg.minimal, "report the least witness");
  auto* gf_cmd = app.add_subcommand("gf", "least k admitting a block");
  common(gf_cmd);
  gf_cmd->add_option("--kmax", cfg.kmax, "largest k tried")->required();
  gf_cmd->add_option("--budget-nodes", cfg.budget_nodes, "search node budget per k");
  auto* gscan_cmd = app.add_subcommand("gscan", "decide every k up to kmax (heuristic tail)");
  common(gscan_cmd);
  gscan_cmd->add_option("--kmax", cfg.kmax, "largest k tried")->required();
  gscan_cmd->add_option("--budget-nodes", cfg.budget_nodes, "search node budget per k");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  if (cmd == "verify" && cfg.plan.empty()) {
    std::string missing;
    if (cfg.poly.empty()) missing = "--poly";
    else if (cfg.k == 0) missing = "--k";
    else if (cfg.samples == 0 && cfg.witness.empty() && cfg.n.empty()) missing = "--n";
    else if (cfg.samples > 0 && cfg.x == 0) missing = "--x";
    if (!missing.empty() && !(cfg.k == 0 && !cfg.witness.empty() && !cfg.poly.empty())) {
      std::cerr << "verify: missing required option " << missing << "\n";
      return 2;
    }
  }

  try {
    const Output out = run(cmd, cfg);
    std::string text;
    if (cfg.format == "json") {
      text = out.j.dump(2) + "\n";
    } else if (cfg.format == "csv") {
      text = out.csv.empty() ? flat_csv(out.j) : out.csv;
    } else {
      text = text_of(out.j);
    }
    emit(text, cfg.out);
    return 0;
  } catch (const Error& e) {
    json err = {{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
    if (e.code() == ErrorCode::IsolatedOffset || e.code() == ErrorCode::ZeroValue) err["offset"] = e.offset();
    std::cout << err.dump(2) << "\n";
    std::cerr << cmd << ": " << e.what() << "\n";
    return 1;
  }
}
