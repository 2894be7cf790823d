#pragma once

#include "noise_lattice/finmeas.hpp"
#include "noise_lattice/random.hpp"
#include "noise_lattice/sigma.hpp"

#include <bit>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace noise_lattice {

/// Element of a finite noise-type Boolean algebra: the set of atoms it joins
/// (bit i stands for atom i).
using AtomSet = std::uint64_t;

inline constexpr std::size_t kMaxAtoms = 20;
inline constexpr std::size_t kMaxIndependenceCells = std::size_t{1} << 22;

inline int atom_count_of(AtomSet e) { return std::popcount(e); }

/// Full mutual independence of a family: P(intersection of one block per
/// member) equals the product of the block probabilities, for every tuple.
template <class Scalar>
bool mutually_independent(const ProbSpace<Scalar>& space, const std::vector<SigmaField>& family) {
  std::size_t cells = 1;
  for (const auto& x : family) {
    require_on_space(space, x);
    cells *= x.block_count();
    if (cells > kMaxIndependenceCells) throw CapacityError("independence check exceeds the block-tuple guard");
  }
  std::vector<Vec<Scalar>> marginals;
  for (const auto& x : family) marginals.push_back(block_probs(space, x));
  std::vector<Scalar> joint(cells, Scalar(0));
  for (std::size_t i = 0; i < space.size(); ++i) {
    std::size_t cell = 0;
    for (const auto& x : family) cell = cell * x.block_count() + x.block_of(i);
    joint[cell] += space.prob(i);
  }
  for (std::size_t cell = 0; cell < cells; ++cell) {
    Scalar expected(1);
    std::size_t rest = cell;
    for (std::size_t k = family.size(); k-- > 0;) {
      expected *= marginals[k][static_cast<Eigen::Index>(rest % family[k].block_count())];
      rest /= family[k].block_count();
    }
    if (!ScalarTraits<Scalar>::equal(joint[cell], expected)) return false;
  }
  return true;
}

/// Finite noise-type Boolean algebra presented by its atoms.
template <class Scalar>
class Ntba {
 public:
  /// Throws DomainError unless the atoms are nontrivial, mutually
  /// independent and jointly generate the discrete sigma-field.
  Ntba(SpacePtr<Scalar> space, std::vector<SigmaField> atoms) : space_(std::move(space)), atoms_(std::move(atoms)) {
    if (atoms_.size() > kMaxAtoms) throw CapacityError("too many atoms");
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      require_on_space(*space_, atoms_[i]);
      if (atoms_[i].is_trivial()) throw DomainError("atom " + std::to_string(i + 1) + " is the trivial sigma-field");
    }
    if (!realize(full()).is_discrete()) throw DomainError("atoms do not generate the full sigma-field");
    if (!mutually_independent(*space_, atoms_)) throw DomainError("atoms are not mutually independent");
  }

  const ProbSpace<Scalar>& space() const { return *space_; }
  const SpacePtr<Scalar>& space_ptr() const { return space_; }
  const std::vector<SigmaField>& atoms() const { return atoms_; }
  std::size_t atom_count() const { return atoms_.size(); }
  std::size_t element_count() const { return std::size_t{1} << atoms_.size(); }
  AtomSet full() const { return atoms_.empty() ? 0 : (~AtomSet{0} >> (64 - atoms_.size())); }
  AtomSet complement(AtomSet e) const { return full() & ~e; }
  AtomSet coatom(std::size_t i) const { return full() & ~(AtomSet{1} << i); }

  /// sigma-field of an element: join of its atoms.
  SigmaField realize(AtomSet e) const {
    SigmaField acc = SigmaField::trivial(space_->size());
    for (std::size_t i = 0; i < atoms_.size(); ++i)
      if ((e >> i) & 1U) acc = join(acc, atoms_[i]);
    return acc;
  }

  /// All 2^n realized elements, indexed by atom set.
  std::vector<SigmaField> realize_all() const {
    std::vector<SigmaField> out(element_count());
    out[0] = SigmaField::trivial(space_->size());
    for (AtomSet e = 1; e < element_count(); ++e) {
      const int low = std::countr_zero(e);
      out[e] = join(out[e & (e - 1)], atoms_[static_cast<std::size_t>(low)]);
    }
    return out;
  }

 private:
  SpacePtr<Scalar> space_;
  std::vector<SigmaField> atoms_;
};

/// Coordinate algebra on a dyadic space: atoms sigma(xi_1), ..., sigma(xi_n).
template <class Scalar>
Ntba<Scalar> mk_coordinate_ntba(const SpacePtr<Scalar>& space) {
  const int n = dyadic_dimension(*space);
  std::vector<SigmaField> atoms;
  for (int j = 1; j <= n; ++j)
    atoms.push_back(sigma_of_vectors<Scalar>(space->size(), Mat<Scalar>(coordinate(*space, j))));
  return Ntba<Scalar>(space, std::move(atoms));
}

/// Truncated parity algebra on {+1,-1}^(n+1): atoms sigma(xi_i xi_{i+1})
/// for i = 1..n, then sigma(xi_{n+1}).
template <class Scalar>
Ntba<Scalar> mk_parity_ntba(int n) {
  if (n < 1) throw DomainError("parity algebra needs n >= 1");
  if (n + 1 > kMaxDyadic) throw CapacityError("parity algebra limited to n <= 19");
  auto space = mk_dyadic<Scalar>(n + 1);
  std::vector<SigmaField> atoms;
  for (int i = 1; i <= n; ++i) {
    const std::uint64_t pair = (std::uint64_t{1} << (i - 1)) | (std::uint64_t{1} << i);
    atoms.push_back(sigma_of_vectors<Scalar>(space->size(), Mat<Scalar>(walsh(*space, pair))));
  }
  atoms.push_back(sigma_of_vectors<Scalar>(space->size(), Mat<Scalar>(coordinate(*space, n + 1))));
  return Ntba<Scalar>(space, std::move(atoms));
}

/// {0, 1}: a single atom, the discrete sigma-field (no atoms on a one-point space).
template <class Scalar>
Ntba<Scalar> mk_trivial_ntba(const SpacePtr<Scalar>& space) {
  if (space->size() == 1) return Ntba<Scalar>(space, {});
  return Ntba<Scalar>(space, {SigmaField::discrete(space->size())});
}

// ---------------------------------------------------------------------------

struct FamilyVerdict {
  bool valid = true;
  std::string reason;
  /// Indices into the audited family.
  std::vector<std::size_t> witness;
};

/// Audits an arbitrary family against the noise-type Boolean algebra
/// axioms: contains 0 and 1, closed under meet and join, distributive, and
/// every member has a complement in the family that is independent of it.
/// Distributivity runs over all triples up to 64 members, otherwise over
/// 1000 seeded random triples.
template <class Scalar>
FamilyVerdict validate_family(const ProbSpace<Scalar>& space, const std::vector<SigmaField>& elems,
                              std::uint64_t seed = 1) {
  for (const auto& x : elems) require_on_space(space, x);
  const std::size_t n = space.size(), m = elems.size();
  auto find = [&](const SigmaField& x) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < m; ++i)
      if (elems[i] == x) return i;
    return std::nullopt;
  };
  if (!find(SigmaField::trivial(n))) return {false, "family does not contain the trivial sigma-field", {}};
  if (!find(SigmaField::discrete(n))) return {false, "family does not contain the full sigma-field", {}};

  std::vector<std::vector<std::size_t>> meet_idx(m, std::vector<std::size_t>(m)), join_idx = meet_idx;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      auto mi = find(meet(elems[i], elems[j]));
      if (!mi) return {false, "not closed under meet", {i, j}};
      auto ji = find(join(elems[i], elems[j]));
      if (!ji) return {false, "not closed under join", {i, j}};
      meet_idx[i][j] = *mi;
      join_idx[i][j] = *ji;
    }

  auto distributive = [&](std::size_t x, std::size_t y, std::size_t z) {
    return elems[meet_idx[x][join_idx[y][z]]] == elems[join_idx[meet_idx[x][y]][meet_idx[x][z]]];
  };
  if (m <= 64) {
    for (std::size_t x = 0; x < m; ++x)
      for (std::size_t y = 0; y < m; ++y)
        for (std::size_t z = 0; z < m; ++z)
          if (!distributive(x, y, z)) return {false, "not distributive", {x, y, z}};
  } else {
    Rng rng(seed, 0xd157);
    for (int t = 0; t < 1000; ++t) {
      const std::size_t x = rng.below(m), y = rng.below(m), z = rng.below(m);
      if (!distributive(x, y, z)) return {false, "not distributive", {x, y, z}};
    }
  }

  for (std::size_t i = 0; i < m; ++i) {
    std::optional<std::size_t> comp;
    for (std::size_t j = 0; j < m && !comp; ++j)
      if (elems[meet_idx[i][j]].is_trivial() && elems[join_idx[i][j]].is_discrete()) comp = j;
    if (!comp) return {false, "element has no complement in the family", {i}};
    if (!independent(space, elems[i], elems[*comp])) return {false, "complement pair not independent", {i, *comp}};
  }
  return {};
}

/// Restriction to the sub-sigma-field x of a nonzero element: a new algebra
/// on the quotient space whose outcomes are the blocks of x.
template <class Scalar>
struct Restriction {
  Ntba<Scalar> algebra;
  /// Outcome of the original space -> outcome (block) of the quotient.
  std::vector<std::size_t> outcome_map;
  /// Original index of each atom of the restricted algebra.
  std::vector<std::size_t> atom_indices;
};

template <class Scalar>
Restriction<Scalar> restrict_to(const Ntba<Scalar>& b, AtomSet e) {
  if (e == 0) throw PreconditionError("restriction needs an element with at least one atom");
  if ((e & ~b.full()) != 0) throw DomainError("atom set is not an element of the algebra");
  const SigmaField x = b.realize(e);
  const auto blocks = x.blocks();
  const Vec<Scalar> mass = block_probs(b.space(), x);
  std::vector<std::string> ids;
  for (const auto& block : blocks) {
    std::string id;
    for (std::size_t i : block) id += (id.empty() ? "" : "/") + b.space().outcomes()[i];
    ids.push_back(std::move(id));
  }
  auto quotient = std::make_shared<const ProbSpace<Scalar>>(std::move(ids), mass);
  std::vector<SigmaField> atoms;
  std::vector<std::size_t> indices;
  for (std::size_t i = 0; i < b.atom_count(); ++i) {
    if (!((e >> i) & 1U)) continue;
    std::vector<std::size_t> labels(blocks.size());
    for (std::size_t k = 0; k < blocks.size(); ++k) labels[k] = b.atoms()[i].block_of(blocks[k].front());
    atoms.push_back(SigmaField::from_labels(labels));
    indices.push_back(i);
  }
  return {Ntba<Scalar>(quotient, std::move(atoms)), x.labels(), std::move(indices)};
}

/// Random algebra on a product of 1..4 random factor spaces (at most
/// `max_outcomes` outcomes). Factors are grouped into atoms at random and
/// the outcomes are shuffled.
template <class Scalar>
Ntba<Scalar> random_ntba(Rng& rng, std::size_t max_outcomes = 64) {
  std::vector<SpacePtr<Scalar>> factors;
  std::size_t total = 1;
  const int want = rng.between(1, 4);
  for (int k = 0; k < want; ++k) {
    const std::size_t size = static_cast<std::size_t>(rng.between(2, 4));
    if (total * size > max_outcomes) break;
    factors.push_back(random_space<Scalar>(rng, size));
    total *= size;
  }
  if (factors.empty()) factors.push_back(random_space<Scalar>(rng, 2)), total = 2;
  // outcome index digits in mixed radix, factor 0 most significant
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = total; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  std::vector<std::string> ids(total);
  Vec<Scalar> probs(static_cast<Eigen::Index>(total));
  std::vector<std::vector<std::size_t>> digit(factors.size(), std::vector<std::size_t>(total));
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t rest = code;
    Scalar p(1);
    std::string id;
    for (std::size_t f = factors.size(); f-- > 0;) {
      const std::size_t d = rest % factors[f]->size();
      rest /= factors[f]->size();
      p *= factors[f]->prob(d);
      digit[f][order[code]] = d;
      id = std::to_string(d) + id;
    }
    ids[order[code]] = id;
    probs[static_cast<Eigen::Index>(order[code])] = p;
  }
  if constexpr (!ScalarTraits<Scalar>::exact) probs /= probs.sum();
  auto space = std::make_shared<const ProbSpace<Scalar>>(std::move(ids), std::move(probs));
  const std::size_t groups = 1 + rng.below(factors.size());
  std::vector<std::size_t> group_of(factors.size());
  for (std::size_t f = 0; f < factors.size(); ++f) group_of[f] = f < groups ? f : rng.below(groups);
  std::vector<SigmaField> atoms;
  for (std::size_t g = 0; g < groups; ++g) {
    SigmaField acc = SigmaField::trivial(total);
    for (std::size_t f = 0; f < factors.size(); ++f)
      if (group_of[f] == g) acc = join(acc, SigmaField::from_labels(digit[f]));
    atoms.push_back(acc);
  }
  return Ntba<Scalar>(space, std::move(atoms));
}

}  // namespace noise_lattice
