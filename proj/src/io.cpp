#include "noise_lattice/io.hpp"

#include <fstream>
#include <sstream>

namespace noise_lattice {

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

Json partition_to_json(const SigmaField& x) { return Json{{"blocks", x.blocks()}}; }

SigmaField partition_from_json(const Json& j, std::size_t n) {
  if (!j.is_object() || !j.contains("blocks")) throw ParseError("partition needs \"blocks\"");
  std::vector<std::vector<std::size_t>> blocks;
  try {
    blocks = j.at("blocks").get<std::vector<std::vector<std::size_t>>>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError("\"blocks\" must be an array of arrays of outcome indices");
  }
  return SigmaField::from_blocks(n, blocks);
}

Json atomset_to_json(AtomSet e) {
  Json out = Json::array();
  for (int i = 0; i < 64; ++i)
    if ((e >> i) & 1U) out.push_back(i + 1);
  return out;
}

AtomSet parse_atomset(const std::string& text, std::size_t atoms) {
  std::string s;
  for (char c : text)
    if (c != '{' && c != '}' && c != ' ') s += c;
  AtomSet e = 0;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    long k = 0;
    try {
      k = std::stol(item, &used);
    } catch (const std::exception&) {
      throw ParseError("bad atom index '" + item + "'");
    }
    if (used != item.size()) throw ParseError("bad atom index '" + item + "'");
    if (k < 1 || static_cast<std::size_t>(k) > atoms)
      throw DomainError("atom index " + item + " outside 1.." + std::to_string(atoms));
    e |= AtomSet{1} << (k - 1);
  }
  return e;
}

}  // namespace noise_lattice
