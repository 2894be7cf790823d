#include "oracles.hpp"

#include "noise_lattice/random.hpp"
#include "noise_lattice/sigma.hpp"

#include <doctest.h>

using namespace noise_lattice;
using R = Rational;

namespace {

SigmaField sig(const ProbSpace<R>& s, const RV<R>& v) { return sigma_of_vectors<R>(s.size(), Mat<R>(v)); }

// {{1},{2,3}} and {{1,2},{3}} on the uniform 3-point space
const SigmaField kX = SigmaField::from_blocks(3, {{0}, {1, 2}});
const SigmaField kY = SigmaField::from_blocks(3, {{0, 1}, {2}});

}  // namespace

TEST_CASE("canonical labels") {
  CHECK(SigmaField::from_labels(std::vector<std::size_t>{7, 7, 3}) == SigmaField::from_blocks(3, {{2}, {0, 1}}));
  CHECK(SigmaField::from_labels(std::vector<std::size_t>{7, 7, 3}).labels() == std::vector<std::size_t>{0, 0, 1});
  CHECK_THROWS_AS(SigmaField::from_blocks(3, {{0, 1}}), DomainError);
  CHECK_THROWS_AS(SigmaField::from_blocks(3, {{0, 1}, {1, 2}}), DomainError);
}

TEST_CASE("meet and join on two signs") {
  auto s = mk_dyadic<R>(2);
  const auto x1 = sig(*s, coordinate(*s, 1)), x2 = sig(*s, coordinate(*s, 2)), x12 = sig(*s, walsh(*s, 3));
  CHECK(meet(x1, x2).is_trivial());
  CHECK(meet(x1, x1) == x1);
  CHECK(meet(x1, SigmaField::discrete(4)) == x1);
  CHECK(join(x1, x2).is_discrete());
  CHECK(join(x1, SigmaField::trivial(4)) == x1);
  CHECK(join(x1, x12).is_discrete());
  CHECK(le(x1, join(x1, x2)));
  CHECK_FALSE(le(x1, x2));
}

TEST_CASE("meet agrees with flood-fill components on random partitions") {
  Rng rng(11, 0);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng.below(9);
    const auto x = random_partition(rng, n, 4), y = random_partition(rng, n, 4);
    const auto m = meet(x, y);
    CHECK(oracle::blocks_of(m.labels()) == oracle::meet_blocks(x.labels(), y.labels()));
    // join blocks are the nonempty pairwise intersections
    std::set<std::set<std::size_t>> expect;
    for (const auto& bx : oracle::blocks_of(x.labels()))
      for (const auto& by : oracle::blocks_of(y.labels())) {
        std::set<std::size_t> c;
        for (auto i : bx)
          if (by.count(i)) c.insert(i);
        if (!c.empty()) expect.insert(c);
      }
    CHECK(oracle::blocks_of(join(x, y).labels()) == expect);
  }
}

TEST_CASE("conditional expectation") {
  auto s = mk_dyadic<R>(2);
  RV<R> f(4);
  f << 3, -1, 4, 2;
  CHECK(cond_exp(*s, SigmaField::trivial(4), f) == RV<R>::Constant(4, R(2)));
  CHECK(cond_exp(*s, SigmaField::discrete(4), f) == f);
  CHECK(is_zero_vec<R>(cond_exp(*s, sig(*s, coordinate(*s, 1)), walsh(*s, 3))));

  Vec<R> p(3);
  p << R(1, 2), R(1, 3), R(1, 6);
  auto t = std::make_shared<const ProbSpace<R>>(std::vector<std::string>{"a", "b", "c"}, p);
  RV<R> g(3);
  g << 6, 0, 12;
  const RV<R> q = cond_exp(*t, kX, g);
  CHECK(q == (oracle::projector({p[0], p[1], p[2]}, kX.labels()) * g).eval());
  CHECK(q[1] == R(4));
  CHECK(cond_exp(*t, kX, q) == q);
}

TEST_CASE("commutation") {
  auto s3 = mk_uniform<R>(3);
  CHECK_FALSE(commutes(*s3, kX, kY));
  const std::vector<R> u(3, R(1, 3));
  const Mat<R> px = oracle::projector(u, kX.labels()), py = oracle::projector(u, kY.labels());
  CHECK(px * py != py * px);
  auto s = mk_dyadic<R>(2);
  CHECK(commutes(*s, sig(*s, coordinate(*s, 1)), sig(*s, walsh(*s, 3))));
  CHECK(commutes(*s, sig(*s, coordinate(*s, 1)), SigmaField::discrete(4)));
}

TEST_CASE("independence") {
  auto s = mk_dyadic<R>(2);
  const auto x1 = sig(*s, coordinate(*s, 1)), x2 = sig(*s, coordinate(*s, 2)), x12 = sig(*s, walsh(*s, 3));
  CHECK(independent(*s, x1, x2));
  CHECK(independent(*s, x1, x12));
  auto s3 = mk_uniform<R>(3);
  CHECK(meet(kX, kY).is_trivial());
  CHECK_FALSE(independent(*s3, kX, kY));
  CHECK_FALSE(oracle::independent_all_events(std::vector<R>(3, R(1, 3)), kX.labels(), kY.labels()));
}

TEST_CASE("independence by blocks agrees with all events") {
  Rng rng(5, 1);
  int hits = 0;
  for (int t = 0; t < 150; ++t) {
    const std::size_t n = 2 + rng.below(5);
    auto s = random_space<R>(rng, n);
    const auto x = random_partition(rng, n, 3), y = random_partition(rng, n, 3);
    std::vector<R> p(s->probs().data(), s->probs().data() + s->size());
    const bool want = oracle::independent_all_events(p, x.labels(), y.labels());
    hits += want;
    CHECK(independent(*s, x, y) == want);
  }
  CHECK(hits > 0);
}

TEST_CASE("subspaces of sigma-fields") {
  auto s = mk_dyadic<R>(2);
  CHECK(subspace_of(s, SigmaField::trivial(4)).dim() == 1);
  CHECK(subspace_of(s, SigmaField::discrete(4)).dim() == 4);
  CHECK(subspace_of(s, sig(*s, coordinate(*s, 1))).dim() == 2);
}

TEST_CASE("sigma-field of a subspace") {
  auto s = mk_dyadic<R>(2);
  CHECK(sigma_of(span<R>(s, std::vector<RV<R>>{constant(*s)})).is_trivial());
  const auto x1 = sig(*s, coordinate(*s, 1));
  CHECK(sigma_of(span<R>(s, std::vector<RV<R>>{coordinate(*s, 1)})) == x1);

  auto s3 = mk_dyadic<R>(3);
  const auto v = span<R>(s3, std::vector<RV<R>>{walsh(*s3, 0b011), walsh(*s3, 0b110)});
  const auto pairs = sigma_of(v);
  CHECK(pairs.block_count() == 4);
  for (const auto& block : pairs.blocks()) {
    REQUIRE(block.size() == 2);
    const auto& a = s3->outcomes()[block[0]];
    const auto& b = s3->outcomes()[block[1]];
    for (int j = 1; j <= 3; ++j) CHECK(oracle::sign(a, j) == -oracle::sign(b, j));
  }
  // another basis of the same span
  const auto w = span<R>(s3, std::vector<RV<R>>{RV<R>(walsh(*s3, 0b011) + walsh(*s3, 0b110)), RV<R>(walsh(*s3, 0b011) - walsh(*s3, 0b110))});
  CHECK(sigma_of(w) == pairs);
}

TEST_CASE("families") {
  auto s = mk_dyadic<R>(3);
  const auto x1 = sig(*s, coordinate(*s, 1));
  CHECK(inf_family(std::vector<SigmaField>{x1}) == x1);
  CHECK(sup_family(std::vector<SigmaField>{x1, sig(*s, coordinate(*s, 2)), sig(*s, coordinate(*s, 3))}).is_discrete());
  CHECK(inf_family(std::vector<SigmaField>{x1, sig(*s, walsh(*s, 0b011))}).is_trivial());
  CHECK_THROWS_AS(inf_family(std::vector<SigmaField>{}), DomainError);
  CHECK_THROWS_AS(sup_family(std::vector<SigmaField>{}), DomainError);
}

TEST_CASE("subspace of a meet is the intersection of subspaces") {
  Rng rng(3, 9);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng.below(7);
    auto s = random_space<R>(rng, n);
    std::vector<SigmaField> xs;
    for (std::size_t k = 0, m = 2 + rng.below(2); k < m; ++k) xs.push_back(random_partition(rng, n, 4));
    auto acc = subspace_of(s, xs[0]);
    for (std::size_t k = 1; k < xs.size(); ++k) acc = intersect(acc, subspace_of(s, xs[k]));
    CHECK(acc.dim() == static_cast<Eigen::Index>(oracle::blocks_of(inf_family(xs).labels()).size()));
    CHECK(same_subspace(acc, subspace_of(s, inf_family(xs))));
  }
}
