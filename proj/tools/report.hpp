#pragma once

#include "noise_lattice/io.hpp"

#include <string>

namespace noise_lattice::cli {

/// FNV-1a over everything a command read: arguments and file bytes.
class InputDigest {
 public:
  void add(std::string_view bytes);
  std::string hex() const;

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

/// Aligned text: scalars as "key: value", arrays of flat objects as tables.
std::string render_text(const Json& j);

/// Rows of a flat object array as CSV with a header line.
std::string render_csv(const Json& rows);

}  // namespace noise_lattice::cli
