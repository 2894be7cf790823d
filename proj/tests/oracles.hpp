#pragma once

// Brute-force reference computations, written without the library's
// algorithms so tests do not grade the code against itself.

#include "noise_lattice/finmeas.hpp"

#include <map>
#include <set>
#include <vector>

namespace oracle {

using noise_lattice::Rational;

/// Blocks as sets of outcome indices, found by flood fill over
/// "share a block in x or in y".
inline std::set<std::set<std::size_t>> meet_blocks(const std::vector<std::size_t>& x, const std::vector<std::size_t>& y) {
  const std::size_t n = x.size();
  std::vector<int> seen(n, 0);
  std::set<std::set<std::size_t>> out;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::set<std::size_t> comp{s};
    std::vector<std::size_t> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < n; ++v)
        if (!seen[v] && (x[u] == x[v] || y[u] == y[v])) {
          seen[v] = 1;
          comp.insert(v);
          stack.push_back(v);
        }
    }
    out.insert(comp);
  }
  return out;
}

inline std::set<std::set<std::size_t>> blocks_of(const std::vector<std::size_t>& labels) {
  std::map<std::size_t, std::set<std::size_t>> m;
  for (std::size_t i = 0; i < labels.size(); ++i) m[labels[i]].insert(i);
  std::set<std::set<std::size_t>> out;
  for (auto& [_, b] : m) out.insert(b);
  return out;
}

/// Independence by the product rule over every pair of measurable events
/// (all unions of blocks), not just blocks.
inline bool independent_all_events(const std::vector<Rational>& p, const std::vector<std::size_t>& x, const std::vector<std::size_t>& y) {
  const auto bx = blocks_of(x), by = blocks_of(y);
  const std::vector<std::set<std::size_t>> vx(bx.begin(), bx.end()), vy(by.begin(), by.end());
  auto event = [](const std::vector<std::set<std::size_t>>& blocks, unsigned mask) {
    std::set<std::size_t> e;
    for (std::size_t i = 0; i < blocks.size(); ++i)
      if ((mask >> i) & 1U) e.insert(blocks[i].begin(), blocks[i].end());
    return e;
  };
  auto prob = [&](const std::set<std::size_t>& e) {
    Rational s = 0;
    for (auto i : e) s += p[i];
    return s;
  };
  for (unsigned a = 0; a < (1U << vx.size()); ++a)
    for (unsigned b = 0; b < (1U << vy.size()); ++b) {
      const auto ea = event(vx, a), eb = event(vy, b);
      std::set<std::size_t> both;
      for (auto i : ea)
        if (eb.count(i)) both.insert(i);
      if (prob(both) != prob(ea) * prob(eb)) return false;
    }
  return true;
}

/// Conditional expectation matrix P with P(i,j) = p_j / p(block) on shared blocks.
inline noise_lattice::Mat<Rational> projector(const std::vector<Rational>& p, const std::vector<std::size_t>& labels) {
  const auto n = static_cast<Eigen::Index>(p.size());
  noise_lattice::Mat<Rational> m = noise_lattice::Mat<Rational>::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Rational mass = 0;
    for (Eigen::Index j = 0; j < n; ++j)
      if (labels[static_cast<std::size_t>(j)] == labels[static_cast<std::size_t>(i)]) mass += p[static_cast<std::size_t>(j)];
    for (Eigen::Index j = 0; j < n; ++j)
      if (labels[static_cast<std::size_t>(j)] == labels[static_cast<std::size_t>(i)]) m(i, j) = p[static_cast<std::size_t>(j)] / mass;
  }
  return m;
}

/// Rank by Bareiss fraction-free elimination on integer-valued rationals.
inline long rank(std::vector<std::vector<Rational>> a) {
  long r = 0;
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  Rational prev = 1;
  for (std::size_t c = 0; c < cols && static_cast<std::size_t>(r) < rows; ++c) {
    std::size_t piv = static_cast<std::size_t>(r);
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[static_cast<std::size_t>(r)]);
    const auto& pr = a[static_cast<std::size_t>(r)];
    for (std::size_t i = static_cast<std::size_t>(r) + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) a[i][j] = (pr[c] * a[i][j] - a[i][c] * pr[j]) / prev;
      a[i][c] = 0;
    }
    prev = pr[c];
    ++r;
  }
  return r;
}

/// Sign of coordinate j (1-based) at outcome w of an n-sign dyadic space,
/// from the outcome identifier string.
inline int sign(const std::string& id, int j) { return id[static_cast<std::size_t>(j - 1)] == '+' ? 1 : -1; }

inline long binomial(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace oracle
