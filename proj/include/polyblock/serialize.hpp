#pragma once

// JSON and CSV renderings of the library's reports. Integers that may not
// fit a double are written as decimal strings; polynomials as the
// constant-first coefficient list "a0,a1,...".

#include <string>

#include <json.hpp>

#include "polyblock/cover.hpp"
#include "polyblock/intpoly.hpp"
#include "polyblock/modpoly.hpp"
#include "polyblock/primestream.hpp"

namespace polyblock {

using json = nlohmann::ordered_json;

json to_json(const CompanionPoly& c);
json to_json(const GaloisReport& g);
json to_json(const RootsModP& r);
json to_json(const PrimeSetReport& r);
json to_json(const SNHarvest& h);
json to_json(const ValuationReport& v);
json to_json(const BlockWitness& w);
json to_json(const CoverPlan& plan);
json to_json(const ExistenceCertificate& c);
json to_json(const GfResult& g);
json to_json(const GScanResult& g);

/// Inverse of to_json for the three certificate types. Throws
/// PreconditionFailed on malformed input.
CoverPlan plan_from_json(const json& j);
BlockWitness witness_from_json(const json& j);
ExistenceCertificate certificate_from_json(const json& j);

// CSV: a header line followed by one line per row, '\n' terminated.
std::string to_csv(const RootsModP& r);
std::string to_csv(const PrimeSetReport& r);
std::string to_csv(const SNHarvest& h);
std::string to_csv(const ValuationReport& v);
std::string to_csv(const BlockWitness& w);
std::string to_csv(const CoverPlan& plan);
std::string to_csv(const ExistenceCertificate& c);
std::string to_csv(const GfResult& g);
std::string to_csv(const GScanResult& g);

}  // namespace polyblock
