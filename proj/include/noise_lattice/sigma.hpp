#pragma once

#include "noise_lattice/finmeas.hpp"
#include "noise_lattice/sigma_field.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <vector>

namespace noise_lattice {

/// Probability of each block of x.
template <class Scalar>
Vec<Scalar> block_probs(const ProbSpace<Scalar>& space, const SigmaField& x) {
  require_on_space(space, x);
  Vec<Scalar> out = Vec<Scalar>::Zero(static_cast<Eigen::Index>(x.block_count()));
  for (std::size_t i = 0; i < space.size(); ++i) out[static_cast<Eigen::Index>(x.block_of(i))] += space.prob(i);
  return out;
}

/// Conditional expectation E(f | x): the P-weighted block average.
template <class Scalar>
RV<Scalar> cond_exp(const ProbSpace<Scalar>& space, const SigmaField& x, const RV<Scalar>& f) {
  require_on_space(space, x);
  require_on_space(space, f);
  const auto nb = static_cast<Eigen::Index>(x.block_count());
  Vec<Scalar> mass = Vec<Scalar>::Zero(nb), total = Vec<Scalar>::Zero(nb);
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto b = static_cast<Eigen::Index>(x.block_of(i));
    const auto ii = static_cast<Eigen::Index>(i);
    mass[b] += space.probs()[ii];
    if (!ScalarTraits<Scalar>::exact || f[ii] != 0) total[b] += space.probs()[ii] * f[ii];
  }
  for (Eigen::Index b = 0; b < nb; ++b) total[b] /= mass[b];
  RV<Scalar> out(f.size());
  for (std::size_t i = 0; i < space.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = total[static_cast<Eigen::Index>(x.block_of(i))];
  return out;
}

/// Matrix of the projection Q_x in the standard basis.
template <class Scalar>
Mat<Scalar> projector_matrix(const ProbSpace<Scalar>& space, const SigmaField& x) {
  const Vec<Scalar> mass = block_probs(space, x);
  const auto n = static_cast<Eigen::Index>(space.size());
  Mat<Scalar> q = Mat<Scalar>::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (x.block_of(static_cast<std::size_t>(i)) == x.block_of(static_cast<std::size_t>(j)))
        q(i, j) = space.probs()[j] / mass[static_cast<Eigen::Index>(x.block_of(static_cast<std::size_t>(i)))];
  return q;
}

/// x-measurable: constant on every block of x.
template <class Scalar>
bool is_measurable(const SigmaField& x, const RV<Scalar>& f) {
  std::vector<Eigen::Index> first(x.block_count(), -1);
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    auto& fi = first[x.block_of(static_cast<std::size_t>(i))];
    if (fi < 0) fi = i;
    else if (!ScalarTraits<Scalar>::equal(f[fi], f[i])) return false;
  }
  return true;
}

/// Q_x Q_y == Q_y Q_x, checked on every standard basis vector.
template <class Scalar>
bool commutes(const ProbSpace<Scalar>& space, const SigmaField& x, const SigmaField& y) {
  require_on_space(space, x);
  require_on_space(space, y);
  const auto n = static_cast<Eigen::Index>(space.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    RV<Scalar> e = RV<Scalar>::Zero(n);
    e[i] = 1;
    const RV<Scalar> xy = cond_exp(space, x, cond_exp(space, y, e));
    const RV<Scalar> yx = cond_exp(space, y, cond_exp(space, x, e));
    if (!equal_vec(xy, yx)) return false;
  }
  return true;
}

/// Product rule on every pair of blocks.
template <class Scalar>
bool independent(const ProbSpace<Scalar>& space, const SigmaField& x, const SigmaField& y) {
  require_on_space(space, x);
  require_on_space(space, y);
  const Vec<Scalar> px = block_probs(space, x), py = block_probs(space, y);
  Mat<Scalar> joint = Mat<Scalar>::Zero(px.size(), py.size());
  for (std::size_t i = 0; i < space.size(); ++i)
    joint(static_cast<Eigen::Index>(x.block_of(i)), static_cast<Eigen::Index>(y.block_of(i))) += space.prob(i);
  for (Eigen::Index a = 0; a < px.size(); ++a)
    for (Eigen::Index b = 0; b < py.size(); ++b)
      if (!ScalarTraits<Scalar>::equal(joint(a, b), px[a] * py[b])) return false;
  return true;
}

/// H_x = L2(x): spanned by block indicators, dimension = number of blocks.
template <class Scalar>
Subspace<Scalar> subspace_of(const SpacePtr<Scalar>& space, const SigmaField& x) {
  require_on_space(*space, x);
  const auto n = static_cast<Eigen::Index>(space->size());
  Mat<Scalar> indicators = Mat<Scalar>::Zero(n, static_cast<Eigen::Index>(x.block_count()));
  for (Eigen::Index i = 0; i < n; ++i) indicators(i, static_cast<Eigen::Index>(x.block_of(static_cast<std::size_t>(i)))) = 1;
  // indicators of distinct blocks are already orthogonal
  return span(space, indicators);
}

namespace detail {

/// Level sets of one vector. Float values are grouped by chains of gaps
/// below `gap` after sorting, so the grouping is an equivalence relation.
template <class Scalar>
std::vector<std::size_t> level_labels(const RV<Scalar>& v, double gap) {
  const auto n = static_cast<std::size_t>(v.size());
  std::vector<std::size_t> labels(n);
  if constexpr (ScalarTraits<Scalar>::exact) {
    std::map<Scalar, std::size_t> ids;
    for (std::size_t i = 0; i < n; ++i)
      labels[i] = ids.try_emplace(v[static_cast<Eigen::Index>(i)], ids.size()).first->second;
  } else {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return v[static_cast<Eigen::Index>(a)] < v[static_cast<Eigen::Index>(b)];
    });
    std::size_t group = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k > 0 && v[static_cast<Eigen::Index>(order[k])] - v[static_cast<Eigen::Index>(order[k - 1])] >= gap) ++group;
      labels[order[k]] = group;
    }
  }
  return labels;
}

}  // namespace detail

inline constexpr double kLevelSetGap = 1e-7;

/// sigma-field generated by the vectors of `vs`: the joint level-set partition.
template <class Scalar>
SigmaField sigma_of_vectors(std::size_t outcome_count, const Mat<Scalar>& vs) {
  SigmaField acc = SigmaField::trivial(outcome_count);
  for (Eigen::Index k = 0; k < vs.cols(); ++k)
    acc = join(acc, SigmaField::from_labels(detail::level_labels<Scalar>(RV<Scalar>(vs.col(k)), kLevelSetGap)));
  return acc;
}

template <class Scalar>
SigmaField sigma_of(const Subspace<Scalar>& v) {
  return sigma_of_vectors<Scalar>(v.space().size(), v.basis());
}

}  // namespace noise_lattice
