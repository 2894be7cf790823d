#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <vector>

namespace noise_lattice {

/// A sub-sigma-field of a finite space with positive weights, stored as its
/// canonical partition: block labels are assigned in order of first
/// appearance, so blocks are sorted by least element and equality is
/// label equality.
class SigmaField {
 public:
  SigmaField() = default;

  static SigmaField from_labels(std::span<const std::size_t> labels);
  /// Throws DomainError unless `blocks` is a partition of {0..n-1}.
  static SigmaField from_blocks(std::size_t n, const std::vector<std::vector<std::size_t>>& blocks);
  /// 0 of the lattice: one block.
  static SigmaField trivial(std::size_t n);
  /// 1 of the lattice: all singletons.
  static SigmaField discrete(std::size_t n);

  std::size_t outcome_count() const { return labels_.size(); }
  std::size_t block_count() const { return block_count_; }
  std::size_t block_of(std::size_t outcome) const { return labels_[outcome]; }
  const std::vector<std::size_t>& labels() const { return labels_; }
  std::vector<std::vector<std::size_t>> blocks() const;

  bool is_trivial() const { return block_count_ <= 1; }
  bool is_discrete() const { return block_count_ == labels_.size(); }

  friend bool operator==(const SigmaField& a, const SigmaField& b) { return a.labels_ == b.labels_; }
  friend auto operator<=>(const SigmaField& a, const SigmaField& b) { return a.labels_ <=> b.labels_; }

 private:
  std::vector<std::size_t> labels_;
  std::size_t block_count_ = 0;
};

/// Intersection sigma-field: connected components of "share a block in x or y".
SigmaField meet(const SigmaField& x, const SigmaField& y);
/// Generated sigma-field: nonempty pairwise block intersections.
SigmaField join(const SigmaField& x, const SigmaField& y);
/// x <= y in the lattice (x is a sub-sigma-field of y, i.e. y refines x).
bool le(const SigmaField& x, const SigmaField& y);

SigmaField inf_family(std::span<const SigmaField> xs);
SigmaField sup_family(std::span<const SigmaField> xs);

}  // namespace noise_lattice
