#pragma once

#include "noise_lattice/ntba.hpp"

#include <json.hpp>

#include <string>

namespace noise_lattice {

using Json = nlohmann::ordered_json;

/// Throws ParseError on unreadable or malformed files.
Json read_json_file(const std::string& path);

/// "p/q" in exact mode, a JSON number in float mode.
template <class Scalar>
Json scalar_to_json(const Scalar& v) {
  if constexpr (ScalarTraits<Scalar>::exact)
    return to_string(v);
  else
    return v;
}

/// Accepts "p/q" strings and numbers; numbers are read through their
/// shortest decimal so "0.1" means 1/10 in exact mode.
template <class Scalar>
Scalar scalar_from_json(const Json& j) {
  if (j.is_string()) return scalar_from_rational<Scalar>(parse_rational(j.get<std::string>()));
  if (j.is_number_integer()) return Scalar(j.get<long long>());
  if (j.is_number()) {
    if constexpr (ScalarTraits<Scalar>::exact)
      return rational_from_double(j.get<double>());
    else
      return j.get<double>();
  }
  throw ParseError("expected a number or \"p/q\" string, got " + j.dump());
}

template <class Scalar>
Json space_to_json(const ProbSpace<Scalar>& space) {
  Json probs = Json::array();
  for (std::size_t i = 0; i < space.size(); ++i) probs.push_back(scalar_to_json(space.prob(i)));
  return Json{{"outcomes", space.outcomes()}, {"probs", std::move(probs)}};
}

template <class Scalar>
SpacePtr<Scalar> space_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("outcomes") || !j.contains("probs"))
    throw ParseError("space needs \"outcomes\" and \"probs\"");
  const auto& probs = j.at("probs");
  if (!probs.is_array()) throw ParseError("\"probs\" must be an array");
  std::vector<std::string> ids;
  try {
    ids = j.at("outcomes").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError("\"outcomes\" must be an array of strings");
  }
  if (probs.size() > kMaxOutcomes) throw CapacityError("space exceeds the outcome capacity guard");
  Vec<Scalar> p(static_cast<Eigen::Index>(probs.size()));
  for (std::size_t i = 0; i < probs.size(); ++i) p[static_cast<Eigen::Index>(i)] = scalar_from_json<Scalar>(probs[i]);
  return std::make_shared<const ProbSpace<Scalar>>(std::move(ids), std::move(p));
}

Json partition_to_json(const SigmaField& x);
/// Throws ParseError / DomainError unless `j` is a partition of {0..n-1}.
SigmaField partition_from_json(const Json& j, std::size_t n);

/// 1-based atom indices, ascending.
Json atomset_to_json(AtomSet e);
/// Parses "1,3" or "{1,3}"; indices must lie in 1..atoms.
AtomSet parse_atomset(const std::string& text, std::size_t atoms);

template <class Scalar>
Json ntba_to_json(const Ntba<Scalar>& b) {
  Json atoms = Json::array();
  for (const auto& a : b.atoms()) atoms.push_back(partition_to_json(a));
  return Json{{"space", space_to_json(b.space())}, {"atoms", std::move(atoms)}};
}

template <class Scalar>
Ntba<Scalar> ntba_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("space") || !j.contains("atoms") || !j.at("atoms").is_array())
    throw ParseError("NTBA needs \"space\" and an \"atoms\" array");
  auto space = space_from_json<Scalar>(j.at("space"));
  std::vector<SigmaField> atoms;
  for (const auto& a : j.at("atoms")) atoms.push_back(partition_from_json(a, space->size()));
  return Ntba<Scalar>(std::move(space), std::move(atoms));
}

/// Vector values as exact strings or numbers.
template <class Scalar>
Json vector_to_json(const Vec<Scalar>& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(scalar_to_json<Scalar>(v[i]));
  return out;
}

}  // namespace noise_lattice
