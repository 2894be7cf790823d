#pragma once

#include "noise_lattice/linalg.hpp"
#include "noise_lattice/scalar.hpp"
#include "noise_lattice/sigma_field.hpp"

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace noise_lattice {

inline constexpr std::size_t kMaxOutcomes = std::size_t{1} << 20;
inline constexpr int kMaxDyadic = 20;

/// Finite probability space with strictly positive weights.
template <class Scalar>
class ProbSpace {
 public:
  ProbSpace(std::vector<std::string> outcomes, Vec<Scalar> probs)
      : outcomes_(std::move(outcomes)), probs_(std::move(probs)) {
    using Traits = ScalarTraits<Scalar>;
    if (outcomes_.empty()) throw DomainError("probability space needs at least one outcome");
    if (outcomes_.size() > kMaxOutcomes) throw CapacityError("space exceeds the outcome capacity guard");
    if (static_cast<std::size_t>(probs_.size()) != outcomes_.size())
      throw DomainError("outcome and probability lists differ in length");
    std::set<std::string> seen;
    for (const auto& id : outcomes_)
      if (!seen.insert(id).second) throw DomainError("duplicate outcome identifier '" + id + "'");
    Scalar total(0);
    for (Eigen::Index i = 0; i < probs_.size(); ++i) {
      if (!(probs_[i] > 0)) throw DomainError("outcome '" + outcomes_[i] + "' has non-positive probability");
      total += probs_[i];
    }
    if constexpr (Traits::exact) {
      if (total != 1) throw DomainError("probabilities sum to " + to_string(total) + ", not 1");
    } else {
      if (std::abs(total - 1.0) > 1e-12) throw DomainError("probabilities do not sum to 1 within 1e-12");
    }
  }

  std::size_t size() const { return outcomes_.size(); }
  const std::vector<std::string>& outcomes() const { return outcomes_; }
  const Vec<Scalar>& probs() const { return probs_; }
  const Scalar& prob(std::size_t i) const { return probs_[static_cast<Eigen::Index>(i)]; }

  friend bool operator==(const ProbSpace& a, const ProbSpace& b) {
    return a.outcomes_ == b.outcomes_ && a.probs_ == b.probs_;
  }

 private:
  std::vector<std::string> outcomes_;
  Vec<Scalar> probs_;
};

template <class Scalar>
using SpacePtr = std::shared_ptr<const ProbSpace<Scalar>>;

/// Random variables are plain value vectors indexed like the space's outcomes.
template <class Scalar>
using RV = Vec<Scalar>;

template <class Scalar>
void require_on_space(const ProbSpace<Scalar>& space, const RV<Scalar>& f) {
  if (static_cast<std::size_t>(f.size()) != space.size())
    throw DomainError("random variable has " + std::to_string(f.size()) + " values on a space of " +
                      std::to_string(space.size()) + " outcomes");
}

template <class Scalar>
void require_on_space(const ProbSpace<Scalar>& space, const SigmaField& x) {
  if (x.outcome_count() != space.size())
    throw DomainError("sigma-field has " + std::to_string(x.outcome_count()) + " outcomes, space has " +
                      std::to_string(space.size()));
}

/// Uniform space on {+1,-1}^n, outcomes lexicographic with '+' first.
template <class Scalar>
SpacePtr<Scalar> mk_dyadic(int n) {
  if (n < 1) throw DomainError("dyadic space needs n >= 1");
  if (n > kMaxDyadic) throw CapacityError("dyadic space limited to n <= 20 (2^n outcomes)");
  const std::size_t size = std::size_t{1} << n;
  std::vector<std::string> ids(size);
  for (std::size_t i = 0; i < size; ++i) {
    std::string id(static_cast<std::size_t>(n), '+');
    for (int j = 0; j < n; ++j)
      if ((i >> (n - 1 - j)) & 1U) id[static_cast<std::size_t>(j)] = '-';
    ids[i] = std::move(id);
  }
  Vec<Scalar> probs = Vec<Scalar>::Constant(static_cast<Eigen::Index>(size), Scalar(1) / Scalar(size));
  return std::make_shared<const ProbSpace<Scalar>>(std::move(ids), std::move(probs));
}

template <class Scalar>
SpacePtr<Scalar> mk_uniform(std::size_t k) {
  if (k == 0) throw DomainError("uniform space needs at least one outcome");
  if (k > kMaxOutcomes) throw CapacityError("space exceeds the outcome capacity guard");
  std::vector<std::string> ids(k);
  for (std::size_t i = 0; i < k; ++i) ids[i] = std::to_string(i + 1);
  return std::make_shared<const ProbSpace<Scalar>>(
      std::move(ids), Vec<Scalar>::Constant(static_cast<Eigen::Index>(k), Scalar(1) / Scalar(k)));
}

/// Number of sign coordinates of a dyadic space (log2 of its size).
template <class Scalar>
int dyadic_dimension(const ProbSpace<Scalar>& space) {
  const std::size_t n = space.size();
  if (n < 2 || (n & (n - 1)) != 0) throw DomainError("not a dyadic space");
  int d = 0;
  while ((std::size_t{1} << d) < n) ++d;
  return d;
}

/// Walsh character prod_{j in mask} xi_{j+1} on a dyadic space.
template <class Scalar>
RV<Scalar> walsh(const ProbSpace<Scalar>& space, std::uint64_t mask) {
  const int n = dyadic_dimension(space);
  RV<Scalar> v(static_cast<Eigen::Index>(space.size()));
  for (std::size_t i = 0; i < space.size(); ++i) {
    int sign = 1;
    for (int j = 0; j < n; ++j)
      if (((mask >> j) & 1U) && ((i >> (n - 1 - j)) & 1U)) sign = -sign;
    v[static_cast<Eigen::Index>(i)] = Scalar(sign);
  }
  return v;
}

/// The sign coordinate xi_j, 1-based.
template <class Scalar>
RV<Scalar> coordinate(const ProbSpace<Scalar>& space, int j) {
  return walsh(space, std::uint64_t{1} << (j - 1));
}

template <class Scalar>
RV<Scalar> constant(const ProbSpace<Scalar>& space, const Scalar& c = Scalar(1)) {
  return RV<Scalar>::Constant(static_cast<Eigen::Index>(space.size()), c);
}

/// sum_i p_i a_i b_i over any pair of Eigen column expressions.
template <class Scalar, class A, class B>
Scalar weighted_dot(const Vec<Scalar>& probs, const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  Scalar acc(0);
  for (Eigen::Index i = 0; i < probs.size(); ++i)
    if (!ScalarTraits<Scalar>::exact || (a(i) != 0 && b(i) != 0)) acc += probs[i] * a(i) * b(i);
  return acc;
}

template <class Scalar>
Scalar inner(const ProbSpace<Scalar>& space, const RV<Scalar>& f, const RV<Scalar>& g) {
  require_on_space(space, f);
  require_on_space(space, g);
  return weighted_dot(space.probs(), f, g);
}

template <class Scalar>
Scalar norm_squared(const ProbSpace<Scalar>& space, const RV<Scalar>& f) {
  return inner(space, f, f);
}

template <class Scalar>
Scalar expectation(const ProbSpace<Scalar>& space, const RV<Scalar>& f) {
  require_on_space(space, f);
  return space.probs().dot(f);
}

// ---------------------------------------------------------------------------
// Subspaces of L2 of a finite space.

/// Linear subspace held as a P-orthogonal basis. In float mode the basis is
/// orthonormal; in rational mode it is orthogonal with exact squared norms
/// (normalizing would leave the rationals).
template <class Scalar>
class Subspace {
 public:
  explicit Subspace(SpacePtr<Scalar> space)
      : space_(std::move(space)), basis_(static_cast<Eigen::Index>(space_->size()), 0) {}

  Eigen::Index dim() const { return basis_.cols(); }
  const Mat<Scalar>& basis() const { return basis_; }
  const Vec<Scalar>& squared_norms() const { return sqnorms_; }
  const ProbSpace<Scalar>& space() const { return *space_; }
  const SpacePtr<Scalar>& space_ptr() const { return space_; }

  RV<Scalar> project(const RV<Scalar>& f) const {
    require_on_space(*space_, f);
    RV<Scalar> out = RV<Scalar>::Zero(f.size());
    for (Eigen::Index k = 0; k < basis_.cols(); ++k) {
      const Scalar c = weighted_dot(space_->probs(), f, basis_.col(k)) / sqnorms_[k];
      if (!ScalarTraits<Scalar>::exact || c != 0) out += c * basis_.col(k);
    }
    return out;
  }

  bool contains(const RV<Scalar>& f) const { return is_zero_vec<Scalar>(RV<Scalar>(f - project(f))); }

  /// Gram-Schmidt step: adds the component of `v` orthogonal to the current
  /// basis unless it is (numerically) zero. Returns whether the dimension grew.
  bool absorb(const RV<Scalar>& v) {
    require_on_space(*space_, v);
    RV<Scalar> r = v;
    const int passes = ScalarTraits<Scalar>::exact ? 1 : 2;
    for (int pass = 0; pass < passes; ++pass)
      for (Eigen::Index k = 0; k < basis_.cols(); ++k) {
        const Scalar c = weighted_dot(space_->probs(), r, basis_.col(k)) / sqnorms_[k];
        if (!ScalarTraits<Scalar>::exact || c != 0) r -= c * basis_.col(k);
      }
    Scalar nr = norm_squared(*space_, r);
    if constexpr (ScalarTraits<Scalar>::exact) {
      if (nr == 0) return false;
    } else {
      const double scale = std::max(1.0, std::sqrt(norm_squared(*space_, v)));
      if (std::sqrt(nr) < ScalarTraits<double>::tol * scale) return false;
      r /= std::sqrt(nr);
      nr = 1.0;
    }
    basis_.conservativeResize(Eigen::NoChange, basis_.cols() + 1);
    basis_.col(basis_.cols() - 1) = r;
    sqnorms_.conservativeResize(sqnorms_.size() + 1);
    sqnorms_[sqnorms_.size() - 1] = nr;
    return true;
  }

 private:
  SpacePtr<Scalar> space_;
  Mat<Scalar> basis_;
  Vec<Scalar> sqnorms_;
};

/// Orthogonal basis of the span of the columns of `vs`.
template <class Scalar>
Subspace<Scalar> span(const SpacePtr<Scalar>& space, const Mat<Scalar>& vs) {
  Subspace<Scalar> s(space);
  for (Eigen::Index k = 0; k < vs.cols(); ++k) s.absorb(RV<Scalar>(vs.col(k)));
  return s;
}

template <class Scalar>
Subspace<Scalar> span(const SpacePtr<Scalar>& space, const std::vector<RV<Scalar>>& vs) {
  Subspace<Scalar> s(space);
  for (const auto& v : vs) s.absorb(v);
  return s;
}

template <class Scalar>
void require_same_space(const Subspace<Scalar>& u, const Subspace<Scalar>& v) {
  if (u.space_ptr() != v.space_ptr() && !(u.space() == v.space()))
    throw DomainError("subspaces live on different probability spaces");
}

/// v contained in u.
template <class Scalar>
bool contains(const Subspace<Scalar>& u, const Subspace<Scalar>& v) {
  require_same_space(u, v);
  for (Eigen::Index k = 0; k < v.dim(); ++k)
    if (!u.contains(RV<Scalar>(v.basis().col(k)))) return false;
  return true;
}

template <class Scalar>
bool same_subspace(const Subspace<Scalar>& u, const Subspace<Scalar>& v) {
  return u.dim() == v.dim() && contains(u, v);
}

template <class Scalar>
Subspace<Scalar> direct_sum(const Subspace<Scalar>& u, const Subspace<Scalar>& v) {
  require_same_space(u, v);
  Subspace<Scalar> s = u;
  for (Eigen::Index k = 0; k < v.dim(); ++k) s.absorb(RV<Scalar>(v.basis().col(k)));
  return s;
}

/// u minus v: span of the components of u orthogonal to v.
template <class Scalar>
Subspace<Scalar> orthogonal_difference(const Subspace<Scalar>& u, const Subspace<Scalar>& v) {
  require_same_space(u, v);
  Subspace<Scalar> s(u.space_ptr());
  for (Eigen::Index k = 0; k < u.dim(); ++k) {
    const RV<Scalar> b = u.basis().col(k);
    s.absorb(RV<Scalar>(b - v.project(b)));
  }
  return s;
}

/// Intersection through the kernel of (I - P_v) restricted to u.
template <class Scalar>
Subspace<Scalar> intersect(const Subspace<Scalar>& u, const Subspace<Scalar>& v) {
  require_same_space(u, v);
  const Eigen::Index n = static_cast<Eigen::Index>(u.space().size());
  Mat<Scalar> residual(n, u.dim());
  for (Eigen::Index k = 0; k < u.dim(); ++k) {
    const RV<Scalar> b = u.basis().col(k);
    residual.col(k) = b - v.project(b);
  }
  const Mat<Scalar> coeffs = nullspace(residual);
  return span(u.space_ptr(), Mat<Scalar>(u.basis() * coeffs));
}

/// Constants, written H_0.
template <class Scalar>
Subspace<Scalar> constants_subspace(const SpacePtr<Scalar>& space) {
  Subspace<Scalar> s(space);
  s.absorb(constant(*space));
  return s;
}

template <class Scalar>
Subspace<Scalar> full_subspace(const SpacePtr<Scalar>& space) {
  const Eigen::Index n = static_cast<Eigen::Index>(space->size());
  return span(space, Mat<Scalar>(Mat<Scalar>::Identity(n, n)));
}

// ---------------------------------------------------------------------------
// Products

/// Product space with outcome (i, j) at index i * |b| + j and the embeddings
/// of either factor's random variables and sigma-fields.
template <class Scalar>
struct ProductSpace {
  SpacePtr<Scalar> space;
  std::size_t a_size = 0;
  std::size_t b_size = 0;

  RV<Scalar> embed_a(const RV<Scalar>& f) const {
    RV<Scalar> out(static_cast<Eigen::Index>(a_size * b_size));
    for (std::size_t i = 0; i < a_size; ++i)
      for (std::size_t j = 0; j < b_size; ++j) out[static_cast<Eigen::Index>(i * b_size + j)] = f[static_cast<Eigen::Index>(i)];
    return out;
  }
  RV<Scalar> embed_b(const RV<Scalar>& g) const {
    RV<Scalar> out(static_cast<Eigen::Index>(a_size * b_size));
    for (std::size_t i = 0; i < a_size; ++i)
      for (std::size_t j = 0; j < b_size; ++j) out[static_cast<Eigen::Index>(i * b_size + j)] = g[static_cast<Eigen::Index>(j)];
    return out;
  }
  SigmaField embed_a(const SigmaField& x) const {
    std::vector<std::size_t> labels(a_size * b_size);
    for (std::size_t i = 0; i < a_size; ++i)
      for (std::size_t j = 0; j < b_size; ++j) labels[i * b_size + j] = x.block_of(i);
    return SigmaField::from_labels(labels);
  }
  SigmaField embed_b(const SigmaField& y) const {
    std::vector<std::size_t> labels(a_size * b_size);
    for (std::size_t i = 0; i < a_size; ++i)
      for (std::size_t j = 0; j < b_size; ++j) labels[i * b_size + j] = y.block_of(j);
    return SigmaField::from_labels(labels);
  }
};

template <class Scalar>
ProductSpace<Scalar> product(const ProbSpace<Scalar>& a, const ProbSpace<Scalar>& b) {
  if (a.size() * b.size() > kMaxOutcomes) throw CapacityError("product space exceeds the outcome capacity guard");
  std::vector<std::string> ids;
  ids.reserve(a.size() * b.size());
  Vec<Scalar> probs(static_cast<Eigen::Index>(a.size() * b.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      ids.push_back(a.outcomes()[i] + "," + b.outcomes()[j]);
      probs[static_cast<Eigen::Index>(i * b.size() + j)] = a.prob(i) * b.prob(j);
    }
  return {std::make_shared<const ProbSpace<Scalar>>(std::move(ids), std::move(probs)), a.size(), b.size()};
}

}  // namespace noise_lattice
