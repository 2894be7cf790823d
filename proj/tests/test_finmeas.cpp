#include "oracles.hpp"

#include "noise_lattice/finmeas.hpp"
#include "noise_lattice/sigma.hpp"

#include <doctest.h>

using namespace noise_lattice;
using R = Rational;

namespace {

RV<R> xi(const ProbSpace<R>& s, int j) {
  RV<R> v(static_cast<Eigen::Index>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i) v[static_cast<Eigen::Index>(i)] = oracle::sign(s.outcomes()[i], j);
  return v;
}

}  // namespace

TEST_CASE("dyadic spaces are uniform and guarded") {
  auto s1 = mk_dyadic<R>(1);
  CHECK(s1->size() == 2);
  CHECK(s1->prob(0) == R(1, 2));
  auto s2 = mk_dyadic<R>(2);
  CHECK(s2->size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(s2->prob(i) == R(1, 4));
  CHECK_THROWS_AS(mk_dyadic<R>(21), CapacityError);
  CHECK_THROWS_AS(mk_dyadic<R>(0), DomainError);
  CHECK(mk_dyadic<double>(20)->size() == (std::size_t{1} << 20));
}

TEST_CASE("probability space validation") {
  Vec<R> p(2);
  p << R(1, 3), R(1, 3);
  CHECK_THROWS_AS(ProbSpace<R>({"a", "b"}, p), DomainError);
  p << R(1, 3), R(2, 3);
  CHECK_THROWS_AS(ProbSpace<R>({"a", "a"}, p), DomainError);
  p << R(0), R(1);
  CHECK_THROWS_AS(ProbSpace<R>({"a", "b"}, p), DomainError);
}

TEST_CASE("coordinates match outcome signs") {
  auto s = mk_dyadic<R>(3);
  for (int j = 1; j <= 3; ++j) CHECK(coordinate(*s, j) == xi(*s, j));
  RV<R> w = xi(*s, 1).cwiseProduct(xi(*s, 3));
  CHECK(walsh(*s, 0b101) == w);
}

TEST_CASE("inner products") {
  auto s = mk_dyadic<R>(2);
  CHECK(inner(*s, constant(*s), constant(*s)) == 1);
  CHECK(inner(*s, xi(*s, 1), xi(*s, 2)) == 0);
  const RV<R> p = xi(*s, 1).cwiseProduct(xi(*s, 2));
  R direct = 0;
  for (Eigen::Index i = 0; i < 4; ++i) direct += R(1, 4) * p[i] * p[i];
  CHECK(inner(*s, p, p) == direct);
  CHECK(direct == 1);
  auto other = mk_dyadic<R>(3);
  CHECK_THROWS_AS(inner(*s, xi(*s, 1), xi(*other, 1)), DomainError);
}

TEST_CASE("product space embeddings are isometric") {
  auto a = mk_dyadic<R>(1);
  Vec<R> q(3);
  q << R(1, 2), R(1, 3), R(1, 6);
  auto b = std::make_shared<const ProbSpace<R>>(std::vector<std::string>{"u", "v", "w"}, q);
  auto ps = product(*a, *b);
  CHECK(ps.space->size() == 6);
  CHECK(ps.space->prob(1) == R(1, 6));
  const RV<R> f = xi(*a, 1);
  RV<R> g(3);
  g << 2, -1, 5;
  const RV<R> fg = ps.embed_a(f).cwiseProduct(ps.embed_b(g));
  R fg_direct = 0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j) fg_direct += a->prob(i) * b->prob(j) * f[Eigen::Index(i)] * f[Eigen::Index(i)] * g[Eigen::Index(j)] * g[Eigen::Index(j)];
  CHECK(inner(*ps.space, fg, fg) == fg_direct);
  CHECK(inner(*ps.space, fg, fg) == norm_squared(*a, f) * norm_squared(*b, g));
  const RV<R> ff = ps.embed_a(f).cwiseProduct(ps.embed_b(RV<R>(RV<R>::Ones(3))));
  CHECK(norm_squared(*ps.space, ff) == 1);
  CHECK(independent(*ps.space, ps.embed_a(SigmaField::discrete(2)), ps.embed_b(SigmaField::discrete(3))));
}

TEST_CASE("span dimensions") {
  auto s = mk_dyadic<R>(2);
  CHECK(span<R>(s, std::vector<RV<R>>{constant(*s), constant(*s)}).dim() == 1);
  CHECK(span<R>(s, std::vector<RV<R>>{xi(*s, 1), xi(*s, 2), RV<R>(xi(*s, 1) + xi(*s, 2))}).dim() == 2);
  CHECK(span<R>(s, std::vector<RV<R>>{}).dim() == 0);
}

TEST_CASE("span rank agrees with fraction-free elimination") {
  auto s = mk_uniform<R>(5);
  const std::vector<std::vector<int>> rows = {{1, 2, 0, 1, 3}, {2, 4, 0, 2, 6}, {0, 1, 1, 0, 0}, {1, 3, 1, 1, 3}, {5, 0, 0, 0, 1}};
  std::vector<RV<R>> vs;
  std::vector<std::vector<R>> m;
  for (const auto& r : rows) {
    RV<R> v(5);
    std::vector<R> mr;
    for (int k = 0; k < 5; ++k) v[k] = r[static_cast<std::size_t>(k)], mr.push_back(r[static_cast<std::size_t>(k)]);
    vs.push_back(v);
    m.push_back(mr);
  }
  CHECK(span<R>(s, vs).dim() == oracle::rank(m));
  CHECK(oracle::rank(m) == 3);
}

TEST_CASE("subspace projection is P-orthogonal") {
  auto s = mk_uniform<R>(4);
  RV<R> a(4), b(4), f(4);
  a << 1, 1, 0, 0;
  b << 0, 1, 1, 1;
  f << 3, -1, 2, 7;
  const auto v = span<R>(s, std::vector<RV<R>>{a, b});
  const RV<R> r = f - v.project(f);
  CHECK(inner(*s, r, a) == 0);
  CHECK(inner(*s, r, b) == 0);
  CHECK(v.contains(RV<R>(2 * a - b)));
  CHECK_FALSE(v.contains(f));
}

TEST_CASE("float backend agrees with rational on inner products") {
  auto s = mk_dyadic<double>(3);
  const RV<double> w = walsh(*s, 0b111);
  CHECK(inner(*s, w, w) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(inner(*s, w, coordinate(*s, 2))) < 1e-12);
}
