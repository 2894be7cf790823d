#pragma once

#include "noise_lattice/scalar.hpp"

#include <Eigen/SVD>

#include <utility>
#include <vector>

namespace noise_lattice {

/// Reduced row echelon form in place; returns pivot columns. Exact for
/// Rational, partial pivoting with the backend tolerance for double.
template <class Scalar>
std::vector<Eigen::Index> rref_in_place(Mat<Scalar>& a) {
  using Traits = ScalarTraits<Scalar>;
  std::vector<Eigen::Index> pivots;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < a.cols() && row < a.rows(); ++col) {
    Eigen::Index best = -1;
    if constexpr (Traits::exact) {
      for (Eigen::Index r = row; r < a.rows(); ++r)
        if (a(r, col) != 0) {
          best = r;
          break;
        }
    } else {
      double best_abs = Traits::tol;
      for (Eigen::Index r = row; r < a.rows(); ++r)
        if (std::abs(a(r, col)) > best_abs) {
          best_abs = std::abs(a(r, col));
          best = r;
        }
    }
    if (best < 0) continue;
    if (best != row) a.row(best).swap(a.row(row));
    const Scalar inv = Scalar(1) / a(row, col);
    for (Eigen::Index c = col; c < a.cols(); ++c) a(row, c) *= inv;
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      if (r == row || Traits::is_zero(a(r, col))) continue;
      const Scalar factor = a(r, col);
      for (Eigen::Index c = col; c < a.cols(); ++c) a(r, c) -= factor * a(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

template <class Scalar>
Eigen::Index rank(Mat<Scalar> a) {
  if constexpr (ScalarTraits<Scalar>::exact) {
    return static_cast<Eigen::Index>(rref_in_place(a).size());
  } else {
    if (a.size() == 0) return 0;
    Eigen::JacobiSVD<Mat<double>> svd(a);
    const auto& sv = svd.singularValues();
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv[i] > ScalarTraits<double>::tol) ++r;
    return r;
  }
}

/// Basis (as columns) of { v : a v = 0 } in standard coordinates.
template <class Scalar>
Mat<Scalar> nullspace(const Mat<Scalar>& a) {
  const Eigen::Index n = a.cols();
  if constexpr (ScalarTraits<Scalar>::exact) {
    Mat<Scalar> r = a;
    const auto pivots = rref_in_place(r);
    std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
    for (auto p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;
    Mat<Scalar> basis(n, n - static_cast<Eigen::Index>(pivots.size()));
    Eigen::Index out = 0;
    for (Eigen::Index free = 0; free < n; ++free) {
      if (is_pivot[static_cast<std::size_t>(free)]) continue;
      Vec<Scalar> v = Vec<Scalar>::Zero(n);
      v[free] = 1;
      for (std::size_t k = 0; k < pivots.size(); ++k)
        v[pivots[k]] = -r(static_cast<Eigen::Index>(k), free);
      basis.col(out++) = v;
    }
    return basis;
  } else {
    if (a.rows() == 0) return Mat<double>::Identity(n, n);
    Eigen::JacobiSVD<Mat<double>> svd(a, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv[i] > ScalarTraits<double>::tol) ++r;
    return svd.matrixV().rightCols(n - r);
  }
}

}  // namespace noise_lattice
