#pragma once

#include "noise_lattice/chaos.hpp"
#include "noise_lattice/ntba.hpp"
#include "noise_lattice/sigma.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace noise_lattice {

/// One joint eigenspace of the commuting projections {Q_x : x in B}.
template <class Scalar>
struct SpectralPoint {
  Subspace<Scalar> eigenspace;
  /// pattern[x]: Q_x acts as the identity on the eigenspace (s in S_x);
  /// otherwise Q_x annihilates it.
  std::vector<bool> pattern;
  /// Least element x with s in S_x.
  AtomSet generator = 0;
  /// Number of atoms below the generator.
  int k = 0;
};

template <class Scalar>
struct SpectralDecomp {
  Ntba<Scalar> algebra;
  /// Ordered by generator bits.
  std::vector<SpectralPoint<Scalar>> points;
  /// Chaos levels: H^(k) = sum of eigenspaces with K = k.
  std::map<int, Subspace<Scalar>> levels;
  Subspace<Scalar> zero;

  /// H^(k), the zero subspace for an empty level.
  const Subspace<Scalar>& level(int k) const {
    if (auto it = levels.find(k); it != levels.end()) return it->second;
    return zero;
  }
};

/// Splits L2 by Q_c and I - Q_c for every co-atom c in turn. The projections
/// commute, so every piece stays invariant; the nonzero leaves are the
/// joint eigenspaces. A leaf in the (I - Q_c) branch for co-atom i has atom
/// i in its generator.
template <class Scalar>
SpectralDecomp<Scalar> spectral_decompose(const Ntba<Scalar>& b) {
  struct Leaf {
    Subspace<Scalar> space;
    AtomSet generator;
  };
  const auto& space = b.space();
  std::vector<Leaf> leaves{{full_subspace(b.space_ptr()), 0}};
  for (std::size_t i = 0; i < b.atom_count(); ++i) {
    const SigmaField c = b.realize(b.coatom(i));
    std::vector<Leaf> next;
    for (const auto& leaf : leaves) {
      Subspace<Scalar> inside(b.space_ptr()), outside(b.space_ptr());
      for (Eigen::Index k = 0; k < leaf.space.dim(); ++k) {
        const RV<Scalar> v = leaf.space.basis().col(k);
        const RV<Scalar> qv = cond_exp(space, c, v);
        inside.absorb(qv);
        outside.absorb(RV<Scalar>(v - qv));
      }
      if (inside.dim() > 0) next.push_back({std::move(inside), leaf.generator});
      if (outside.dim() > 0) next.push_back({std::move(outside), leaf.generator | (AtomSet{1} << i)});
    }
    leaves = std::move(next);
  }
  std::sort(leaves.begin(), leaves.end(), [](const Leaf& a, const Leaf& c) { return a.generator < c.generator; });

  const auto elems = b.realize_all();
  SpectralDecomp<Scalar> d{b, {}, {}, Subspace<Scalar>(b.space_ptr())};
  for (auto& leaf : leaves) {
    SpectralPoint<Scalar> p{std::move(leaf.space), std::vector<bool>(elems.size()), leaf.generator,
                            atom_count_of(leaf.generator)};
    for (AtomSet x = 0; x < elems.size(); ++x) {
      bool identity = true, zero = true;
      for (Eigen::Index k = 0; k < p.eigenspace.dim(); ++k) {
        const RV<Scalar> v = p.eigenspace.basis().col(k);
        const RV<Scalar> qv = cond_exp(space, elems[x], v);
        identity = identity && equal_vec(qv, v);
        zero = zero && is_zero_vec(qv);
      }
      if (identity == zero) throw ConsistencyError("leaf is not a joint eigenspace of the algebra");
      p.pattern[x] = identity;
    }
    auto [it, inserted] = d.levels.try_emplace(p.k, b.space_ptr());
    it->second = direct_sum(it->second, p.eigenspace);
    d.points.push_back(std::move(p));
  }
  return d;
}

struct IdentityReport {
  bool ok = true;
  std::string failed;
  std::vector<AtomSet> witness;
  std::size_t point = 0;
};

/// Audits the decomposition: S_x n S_y = S_{x ^ y}, the generator relation
/// (s in S_x iff x >= generator), H(S_x) = H_x, the filter property of each
/// point's pattern, and orthogonal completeness of the eigenspaces.
template <class Scalar>
IdentityReport verify_spectral_identities(const SpectralDecomp<Scalar>& d) {
  const auto& b = d.algebra;
  const auto elems = b.realize_all();
  std::map<SigmaField, AtomSet> index;
  for (AtomSet x = 0; x < elems.size(); ++x) index.emplace(elems[x], x);
  auto fail = [](std::string what, std::vector<AtomSet> w, std::size_t point) {
    return IdentityReport{false, std::move(what), std::move(w), point};
  };

  std::vector<std::vector<AtomSet>> meet_of(elems.size(), std::vector<AtomSet>(elems.size()));
  for (AtomSet x = 0; x < elems.size(); ++x)
    for (AtomSet y = 0; y < elems.size(); ++y) {
      auto it = index.find(meet(elems[x], elems[y]));
      if (it == index.end()) return fail("meet closure", {x, y}, 0);
      meet_of[x][y] = it->second;
    }

  Eigen::Index total = 0;
  for (std::size_t s = 0; s < d.points.size(); ++s) {
    const auto& p = d.points[s];
    total += p.eigenspace.dim();
    if (p.k != atom_count_of(p.generator)) return fail("K counts generator atoms", {p.generator}, s);
    if (!p.pattern[b.full()]) return fail("filter contains 1", {b.full()}, s);
    for (AtomSet x = 0; x < elems.size(); ++x) {
      if (p.pattern[x] != ((x & p.generator) == p.generator)) return fail("generator relation", {x}, s);
      for (AtomSet y = 0; y < elems.size(); ++y) {
        if ((p.pattern[x] && p.pattern[y]) != p.pattern[meet_of[x][y]])
          return fail("S_x n S_y = S_{x^y}", {x, y}, s);
        if ((x & y) == x && p.pattern[x] && !p.pattern[y]) return fail("filter upward closed", {x, y}, s);
      }
    }
  }
  if (total != static_cast<Eigen::Index>(b.space().size())) return fail("eigenspace dimensions sum to |Omega|", {}, 0);
  for (std::size_t s = 0; s < d.points.size(); ++s)
    for (std::size_t t = s + 1; t < d.points.size(); ++t)
      for (Eigen::Index i = 0; i < d.points[s].eigenspace.dim(); ++i)
        for (Eigen::Index j = 0; j < d.points[t].eigenspace.dim(); ++j)
          if (!ScalarTraits<Scalar>::is_zero(weighted_dot(b.space().probs(), d.points[s].eigenspace.basis().col(i),
                                                          d.points[t].eigenspace.basis().col(j))))
            return fail("eigenspaces orthogonal", {}, s);

  // H(S_x) = H_x: the eigenvectors in S_x are x-measurable and fill dim H_x
  for (AtomSet x = 0; x < elems.size(); ++x) {
    Eigen::Index dim = 0;
    for (std::size_t s = 0; s < d.points.size(); ++s) {
      const auto& p = d.points[s];
      if (!p.pattern[x]) continue;
      dim += p.eigenspace.dim();
      for (Eigen::Index k = 0; k < p.eigenspace.dim(); ++k)
        if (!is_measurable<Scalar>(elems[x], RV<Scalar>(p.eigenspace.basis().col(k))))
          return fail("H(S_x) = H_x", {x}, s);
    }
    if (dim != static_cast<Eigen::Index>(elems[x].block_count())) return fail("H(S_x) = H_x", {x}, 0);
  }
  return {};
}

struct GradingReport {
  std::map<int, Eigen::Index> dims;
  /// K is finite at every spectral point.
  bool classical = true;
  bool level1_is_first_chaos = false;
};

/// Level dimensions and the K-finiteness verdict, cross-checked against the
/// first-chaos computation. Throws ConsistencyError on disagreement.
template <class Scalar>
GradingReport chaos_grading(const SpectralDecomp<Scalar>& d, const ChaosResult<Scalar>& chaos) {
  GradingReport r;
  Eigen::Index total = 0;
  for (const auto& [k, level] : d.levels) {
    r.dims[k] = level.dim();
    total += level.dim();
  }
  if (total != static_cast<Eigen::Index>(d.algebra.space().size()))
    throw ConsistencyError("chaos levels do not fill L2");
  // at finite scale K(s) <= number of atoms everywhere
  r.classical = true;
  if (r.classical != chaos.classical) throw ConsistencyError("spectral and first-chaos classicality verdicts disagree");
  r.level1_is_first_chaos = same_subspace(d.level(1), chaos.h1);
  return r;
}

/// sigma(H^(k)) is contained in sigma(H^(1)) for every nonempty level k >= 2.
template <class Scalar>
bool sigma_tower_check(const SpectralDecomp<Scalar>& d) {
  const SigmaField first = sigma_of(d.level(1));
  for (const auto& [k, level] : d.levels)
    if (k >= 2 && level.dim() > 0 && !le(sigma_of(level), first)) return false;
  return true;
}

struct AdditivityReport {
  bool ok = true;
  std::size_t pairs = 0;
  std::string failure;
};

/// K = K_x + K_x' under the product structure H = H_x (x) H_x': every pair of
/// spectral points of the two restrictions tensors into exactly one point of
/// B, whose K is the sum.
template <class Scalar>
AdditivityReport k_restriction_additivity(const Ntba<Scalar>& b, AtomSet e) {
  if (e == 0 || e == b.full()) throw PreconditionError("additivity needs an element other than 0 and 1");
  const auto rx = restrict_to(b, e);
  const auto ry = restrict_to(b, b.complement(e));
  const auto d = spectral_decompose(b);
  const auto dx = spectral_decompose(rx.algebra);
  const auto dy = spectral_decompose(ry.algebra);
  auto lift = [](AtomSet local, const std::vector<std::size_t>& indices) {
    AtomSet out = 0;
    for (std::size_t j = 0; j < indices.size(); ++j)
      if ((local >> j) & 1U) out |= AtomSet{1} << indices[j];
    return out;
  };
  AdditivityReport r;
  std::vector<int> hits(d.points.size(), 0);
  const auto n = static_cast<Eigen::Index>(b.space().size());
  for (const auto& px : dx.points)
    for (const auto& py : dy.points) {
      ++r.pairs;
      const AtomSet target = lift(px.generator, rx.atom_indices) | lift(py.generator, ry.atom_indices);
      auto it = std::find_if(d.points.begin(), d.points.end(), [&](const auto& p) { return p.generator == target; });
      if (it == d.points.end()) return {false, r.pairs, "no spectral point with the combined generator"};
      const auto& p = *it;
      ++hits[static_cast<std::size_t>(it - d.points.begin())];
      if (p.k != px.k + py.k) return {false, r.pairs, "K is not additive"};
      if (p.eigenspace.dim() != px.eigenspace.dim() * py.eigenspace.dim())
        return {false, r.pairs, "eigenspace is not the tensor product"};
      for (Eigen::Index g = 0; g < px.eigenspace.dim(); ++g)
        for (Eigen::Index h = 0; h < py.eigenspace.dim(); ++h) {
          RV<Scalar> f(n);
          for (Eigen::Index w = 0; w < n; ++w)
            f[w] = px.eigenspace.basis()(static_cast<Eigen::Index>(rx.outcome_map[static_cast<std::size_t>(w)]), g) *
                   py.eigenspace.basis()(static_cast<Eigen::Index>(ry.outcome_map[static_cast<std::size_t>(w)]), h);
          if (!p.eigenspace.contains(f)) return {false, r.pairs, "tensor vector outside the combined eigenspace"};
        }
    }
  for (int h : hits)
    if (h != 1) return {false, r.pairs, "spectral points not matched one-to-one"};
  return r;
}

}  // namespace noise_lattice
