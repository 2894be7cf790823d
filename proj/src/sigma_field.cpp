#include "noise_lattice/sigma_field.hpp"

#include "noise_lattice/scalar.hpp"

#include <map>
#include <numeric>
#include <string>
#include <utility>

namespace noise_lattice {

namespace {

void require_same_size(const SigmaField& x, const SigmaField& y) {
  if (x.outcome_count() != y.outcome_count())
    throw DomainError("sigma-fields live on spaces of different size (" + std::to_string(x.outcome_count()) +
                      " vs " + std::to_string(y.outcome_count()) + ")");
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

SigmaField SigmaField::from_labels(std::span<const std::size_t> labels) {
  SigmaField s;
  s.labels_.resize(labels.size());
  std::map<std::size_t, std::size_t> relabel;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = relabel.try_emplace(labels[i], relabel.size());
    s.labels_[i] = it->second;
  }
  s.block_count_ = relabel.size();
  return s;
}

SigmaField SigmaField::from_blocks(std::size_t n, const std::vector<std::vector<std::size_t>>& blocks) {
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> labels(n, unset);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].empty()) throw DomainError("partition has an empty block");
    for (std::size_t i : blocks[b]) {
      if (i >= n) throw DomainError("outcome index " + std::to_string(i) + " out of range");
      if (labels[i] != unset) throw DomainError("outcome " + std::to_string(i) + " appears in two blocks");
      labels[i] = b;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (labels[i] == unset) throw DomainError("outcome " + std::to_string(i) + " is not covered");
  return from_labels(labels);
}

SigmaField SigmaField::trivial(std::size_t n) { return from_labels(std::vector<std::size_t>(n, 0)); }

SigmaField SigmaField::discrete(std::size_t n) {
  std::vector<std::size_t> labels(n);
  std::iota(labels.begin(), labels.end(), std::size_t{0});
  return from_labels(labels);
}

std::vector<std::vector<std::size_t>> SigmaField::blocks() const {
  std::vector<std::vector<std::size_t>> out(block_count_);
  for (std::size_t i = 0; i < labels_.size(); ++i) out[labels_[i]].push_back(i);
  return out;
}

SigmaField meet(const SigmaField& x, const SigmaField& y) {
  require_same_size(x, y);
  const std::size_t n = x.outcome_count();
  DisjointSets sets(n);
  std::vector<std::size_t> first_x(x.block_count(), n), first_y(y.block_count(), n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& fx = first_x[x.block_of(i)];
    if (fx == n) fx = i; else sets.unite(fx, i);
    auto& fy = first_y[y.block_of(i)];
    if (fy == n) fy = i; else sets.unite(fy, i);
  }
  std::vector<std::size_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = sets.find(i);
  return SigmaField::from_labels(labels);
}

SigmaField join(const SigmaField& x, const SigmaField& y) {
  require_same_size(x, y);
  std::vector<std::size_t> labels(x.outcome_count());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = x.block_of(i) * y.block_count() + y.block_of(i);
  return SigmaField::from_labels(labels);
}

bool le(const SigmaField& x, const SigmaField& y) {
  require_same_size(x, y);
  // every y-block must sit inside one x-block
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> image(y.block_count(), unset);
  for (std::size_t i = 0; i < x.outcome_count(); ++i) {
    auto& img = image[y.block_of(i)];
    if (img == unset) img = x.block_of(i);
    else if (img != x.block_of(i)) return false;
  }
  return true;
}

SigmaField inf_family(std::span<const SigmaField> xs) {
  if (xs.empty()) throw DomainError("inf of an empty family");
  SigmaField acc = xs.front();
  for (const auto& x : xs.subspan(1)) acc = meet(acc, x);
  return acc;
}

SigmaField sup_family(std::span<const SigmaField> xs) {
  if (xs.empty()) throw DomainError("sup of an empty family");
  SigmaField acc = xs.front();
  for (const auto& x : xs.subspan(1)) acc = join(acc, x);
  return acc;
}

}  // namespace noise_lattice
