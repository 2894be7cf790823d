#include "report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace noise_lattice::cli {

void InputDigest::add(std::string_view bytes) {
  for (unsigned char c : bytes) h_ = (h_ ^ c) * 0x100000001b3ULL;
  h_ = (h_ ^ 0xff) * 0x100000001b3ULL;  // field separator
}

std::string InputDigest::hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h_));
  return buf;
}

namespace {

std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "-";
  if (v.is_array()) {
    std::string out;
    for (const auto& e : v) out += (out.empty() ? "" : ",") + scalar_text(e);
    return "[" + out + "]";
  }
  return v.dump();
}

bool flat_object(const Json& v) {
  if (!v.is_object()) return false;
  return std::all_of(v.begin(), v.end(), [](const Json& e) {
    return !e.is_object() && !(e.is_array() && std::any_of(e.begin(), e.end(), [](const Json& x) { return x.is_structured(); }));
  });
}

bool is_table(const Json& v) {
  return v.is_array() && !v.empty() && std::all_of(v.begin(), v.end(), flat_object);
}

void table(std::ostringstream& out, const Json& rows, const std::string& indent) {
  std::vector<std::string> cols;
  for (const auto& row : rows)
    for (const auto& [k, _] : row.items())
      if (std::find(cols.begin(), cols.end(), k) == cols.end()) cols.push_back(k);
  std::vector<std::vector<std::string>> cells;
  std::vector<std::size_t> width(cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) width[c] = cols[c].size();
  for (const auto& row : rows) {
    std::vector<std::string> line;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      line.push_back(row.contains(cols[c]) ? scalar_text(row.at(cols[c])) : "");
      width[c] = std::max(width[c], line.back().size());
    }
    cells.push_back(std::move(line));
  }
  auto emit = [&](const std::vector<std::string>& line) {
    out << indent;
    for (std::size_t c = 0; c < line.size(); ++c) {
      out << line[c];
      if (c + 1 < line.size()) out << std::string(width[c] - line[c].size() + 2, ' ');
    }
    out << '\n';
  };
  emit(cols);
  for (const auto& line : cells) emit(line);
}

void render(std::ostringstream& out, const Json& j, const std::string& indent) {
  for (const auto& [key, v] : j.items()) {
    if (is_table(v)) {
      out << indent << key << ":\n";
      table(out, v, indent + "  ");
    } else if (v.is_object()) {
      out << indent << key << ":\n";
      render(out, v, indent + "  ");
    } else if (v.is_array() && std::any_of(v.begin(), v.end(), [](const Json& x) { return x.is_structured(); })) {
      out << indent << key << ":\n";
      for (const auto& e : v) out << indent << "  " << e.dump() << '\n';
    } else {
      out << indent << key << ": " << scalar_text(v) << '\n';
    }
  }
}

}  // namespace

std::string render_text(const Json& j) {
  std::ostringstream out;
  render(out, j, "");
  return out.str();
}

std::string render_csv(const Json& rows) {
  std::ostringstream out;
  if (!rows.is_array() || rows.empty()) return "";
  std::vector<std::string> cols;
  for (const auto& [k, _] : rows.front().items()) cols.push_back(k);
  for (std::size_t c = 0; c < cols.size(); ++c) out << cols[c] << (c + 1 < cols.size() ? "," : "\n");
  for (const auto& row : rows)
    for (std::size_t c = 0; c < cols.size(); ++c) {
      std::string cell = scalar_text(row.at(cols[c]));
      if (cell.find(',') != std::string::npos) cell = "\"" + cell + "\"";
      out << cell << (c + 1 < cols.size() ? "," : "\n");
    }
  return out.str();
}

}  // namespace noise_lattice::cli
