#include <doctest.h>

#include <fstream>
#include <regex>

#include "polyblock/error.hpp"
#include "polyblock/serialize.hpp"

using namespace polyblock;

TEST_CASE("cover plan round trip") {
  const CoverPlan plan = build_cover(IntPoly{1, 0, 1}, 150);
  const json j = json::parse(to_json(plan).dump());
  CHECK(j.at("n0").is_string());
  CHECK(j.at("modulus").is_string());
  const CoverPlan back = plan_from_json(j);
  CHECK(back.f == plan.f);
  CHECK(back.n0 == plan.n0);
  CHECK(back.modulus == plan.modulus);
  CHECK(back.holes.size() == plan.holes.size());
  CHECK_NOTHROW(check_plan(back));
  CHECK(to_json(back).dump() == j.dump());
  CHECK(verify_block(back.f, back.n0, back.N, {1 << 10, back.primes()}).partners.size() == back.N);
}

TEST_CASE("witness round trip") {
  const IntPoly f{0, 1};
  const BlockWitness w = verify_block(f, 2183, 17);
  const BlockWitness back = witness_from_json(json::parse(to_json(w).dump()));
  CHECK(back.n == w.n);
  CHECK(back.partners.size() == 17);
  CHECK(check_witness(f, back));
  CHECK(to_csv(w).rfind("n,offset,partner,prime,prime_certified\n", 0) == 0);
}

TEST_CASE("certificate round trip") {
  const auto c = decide_block(IntPoly{0, 1}, 17);
  const auto back = certificate_from_json(json::parse(to_json(c).dump()));
  CHECK(back.exists);
  CHECK(back.witness_n == c.witness_n);
  CHECK(back.choices.size() == c.choices.size());
  CHECK(back.relevant_primes == c.relevant_primes);
  const auto absent = decide_block(IntPoly{0, 1}, 5);
  CHECK(to_json(absent).at("witness_n").is_null());
  CHECK_FALSE(certificate_from_json(to_json(absent)).witness_n);
}

TEST_CASE("malformed documents") {
  CHECK_THROWS_AS(plan_from_json(json{{"poly", "1,0,1"}}), Error);
  CHECK_THROWS_AS(witness_from_json(json{{"n", "12x"}, {"k", 2}, {"partners", json::array()}}), Error);
}

TEST_CASE("report renderings") {
  const auto v = valuation_qn(IntPoly{1, 0, 1}, 5, 25);
  CHECK(to_json(v).at("nu") == 12);
  CHECK(to_json(v).at("main_term") == "25/2");
  CHECK(to_csv(v) == "p,N,nu,tf,main_term,error_bound,within_bound\n5,25,12,2,25/2,24,1\n");
  const auto g = gf_search(IntPoly{0, 1}, 20);
  CHECK(to_json(g).at("gf") == 17);
  CHECK(to_json(companion(IntPoly{1, 0, 1})).at("companion") == "4,0,1");
}

// Subset of JSON Schema used by the files under docs/schemas: type,
// required, properties, additionalProperties, items, pattern, enum,
// minimum, oneOf.
namespace {

bool conforms(const json& doc, const json& schema, std::string& why) {
  if (schema.contains("oneOf")) {
    int hits = 0;
    for (const auto& alt : schema.at("oneOf")) {
      std::string ignored;
      hits += conforms(doc, alt, ignored);
    }
    if (hits != 1) why = "oneOf matched " + std::to_string(hits) + " alternatives: " + doc.dump();
    return hits == 1;
  }
  if (schema.contains("enum")) {
    for (const auto& v : schema.at("enum")) {
      if (v == doc) return true;
    }
    why = "not in enum: " + doc.dump();
    return false;
  }
  const std::string type = schema.value("type", "");
  const bool type_ok = type.empty() || (type == "object" && doc.is_object()) || (type == "array" && doc.is_array()) ||
                       (type == "string" && doc.is_string()) || (type == "integer" && doc.is_number_integer()) ||
                       (type == "number" && doc.is_number()) || (type == "boolean" && doc.is_boolean()) ||
                       (type == "null" && doc.is_null());
  if (!type_ok) {
    why = "expected " + type + ": " + doc.dump();
    return false;
  }
  if (schema.contains("pattern") && !std::regex_match(doc.get<std::string>(), std::regex(schema.at("pattern").get<std::string>()))) {
    why = "pattern mismatch: " + doc.dump();
    return false;
  }
  if (schema.contains("minimum") && doc.is_number() && doc.get<double>() < schema.at("minimum").get<double>()) {
    why = "below minimum: " + doc.dump();
    return false;
  }
  if (doc.is_object()) {
    for (const auto& key : schema.value("required", json::array())) {
      if (!doc.contains(key.get<std::string>())) {
        why = "missing " + key.get<std::string>();
        return false;
      }
    }
    const json props = schema.value("properties", json::object());
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      if (!props.contains(it.key())) {
        if (!schema.value("additionalProperties", true)) {
          why = "unexpected " + it.key();
          return false;
        }
        continue;
      }
      if (!conforms(it.value(), props.at(it.key()), why)) return false;
    }
  }
  if (doc.is_array() && schema.contains("items")) {
    for (const auto& item : doc) {
      if (!conforms(item, schema.at("items"), why)) return false;
    }
  }
  return true;
}

json load_schema(const std::string& name) {
  std::ifstream in(std::string(POLYBLOCK_SCHEMA_DIR) + "/" + name);
  REQUIRE(in.good());
  return json::parse(in);
}

}  // namespace

TEST_CASE("documents conform to the shipped schemas") {
  std::string why;
  const json plan_schema = load_schema("cover_plan.schema.json");
  for (unsigned N : {16u, 150u}) {
    CHECK_MESSAGE(conforms(to_json(build_cover(IntPoly{1, 0, 1}, N)), plan_schema, why), why);
  }
  const json witness_schema = load_schema("block_witness.schema.json");
  CHECK_MESSAGE(conforms(to_json(verify_block(IntPoly{0, 1}, 2183, 17)), witness_schema, why), why);
  const json cert_schema = load_schema("existence_certificate.schema.json");
  CHECK_MESSAGE(conforms(to_json(decide_block(IntPoly{0, 1}, 17)), cert_schema, why), why);
  CHECK_MESSAGE(conforms(to_json(decide_block(IntPoly{0, 1}, 5)), cert_schema, why), why);
  const json error_schema = load_schema("error.schema.json");
  for (int c = 0; c <= static_cast<int>(ErrorCode::Unsupported); ++c) {
    const json err = {{"error", std::string(to_string(static_cast<ErrorCode>(c)))}, {"message", "x"}};
    CHECK_MESSAGE(conforms(err, error_schema, why), why);
  }
  // the checker itself rejects tampering
  json bad = to_json(verify_block(IntPoly{0, 1}, 2183, 17));
  bad["n"] = 2183;
  CHECK_FALSE(conforms(bad, witness_schema, why));
  bad = to_json(decide_block(IntPoly{0, 1}, 17));
  bad["extra"] = 1;
  CHECK_FALSE(conforms(bad, cert_schema, why));
}
