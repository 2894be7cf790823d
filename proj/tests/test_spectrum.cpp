#include "oracles.hpp"

#include "noise_lattice/spectrum.hpp"

#include <doctest.h>

using namespace noise_lattice;
using R = Rational;

namespace {

// product of the generating signs of the atoms in `g`
RV<R> character(const ProbSpace<R>& s, const std::vector<std::uint64_t>& atom_masks, AtomSet g) {
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < atom_masks.size(); ++i)
    if ((g >> i) & 1U) mask ^= atom_masks[i];
  return walsh(s, mask);
}

std::vector<std::uint64_t> coordinate_masks(int n) {
  std::vector<std::uint64_t> m;
  for (int j = 0; j < n; ++j) m.push_back(std::uint64_t{1} << j);
  return m;
}

std::vector<std::uint64_t> parity_masks(int n) {
  std::vector<std::uint64_t> m;
  for (int i = 0; i < n; ++i) m.push_back((std::uint64_t{3}) << i);
  m.push_back(std::uint64_t{1} << n);
  return m;
}

void check_characters(const Ntba<R>& b, const std::vector<std::uint64_t>& masks) {
  const auto d = spectral_decompose(b);
  REQUIRE(d.points.size() == b.element_count());
  for (const auto& p : d.points) {
    CHECK(p.eigenspace.dim() == 1);
    CHECK(p.eigenspace.contains(character(b.space(), masks, p.generator)));
    CHECK(p.k == std::popcount(p.generator));
  }
}

}  // namespace

TEST_CASE("spectrum of two coordinates") {
  auto b = mk_coordinate_ntba(mk_dyadic<R>(2));
  const auto d = spectral_decompose(b);
  REQUIRE(d.points.size() == 4);
  std::vector<int> ks;
  for (const auto& p : d.points) ks.push_back(p.k);
  CHECK(ks == std::vector<int>{0, 1, 1, 2});
  check_characters(b, coordinate_masks(2));
  CHECK(verify_spectral_identities(d).ok);
}

TEST_CASE("spectrum of the trivial algebra") {
  auto b = mk_trivial_ntba(mk_uniform<R>(3));
  const auto d = spectral_decompose(b);
  REQUIRE(d.points.size() == 2);
  CHECK(d.points[0].k == 0);
  CHECK(d.points[0].eigenspace.dim() == 1);
  CHECK(d.points[1].k == 1);
  CHECK(d.points[1].eigenspace.dim() == 2);
  CHECK(verify_spectral_identities(d).ok);
}

TEST_CASE("Walsh grading of coordinate algebras") {
  for (int n = 1; n <= 4; ++n) {
    auto b = mk_coordinate_ntba(mk_dyadic<R>(n));
    const auto d = spectral_decompose(b);
    const auto g = chaos_grading(d, first_chaos(b));
    for (int k = 0; k <= n; ++k) CHECK(g.dims.at(k) == oracle::binomial(n, k));
    CHECK(g.classical);
    CHECK(g.level1_is_first_chaos);
    check_characters(b, coordinate_masks(n));
  }
}

TEST_CASE("parity algebras grade like n+1 recoded signs") {
  for (int n = 1; n <= 3; ++n) {
    auto b = mk_parity_ntba<R>(n);
    const auto d = spectral_decompose(b);
    const auto g = chaos_grading(d, first_chaos(b));
    for (int k = 0; k <= n + 1; ++k) CHECK(g.dims.at(k) == oracle::binomial(n + 1, k));
    check_characters(b, parity_masks(n));
    CHECK(verify_spectral_identities(d).ok);
  }
}

TEST_CASE("sigma tower") {
  auto b = mk_coordinate_ntba(mk_dyadic<R>(3));
  const auto d = spectral_decompose(b);
  CHECK(sigma_tower_check(d));
  CHECK(d.level(7).dim() == 0);
  CHECK(sigma_tower_check(spectral_decompose(mk_parity_ntba<R>(3))));
}

TEST_CASE("K adds across a restriction and its complement") {
  auto b = mk_coordinate_ntba(mk_dyadic<R>(2));
  const auto r = k_restriction_additivity(b, 0b01);
  CHECK(r.ok);
  CHECK(r.pairs == 4);
  const auto d = spectral_decompose(b);
  CHECK(d.points.back().generator == 0b11);
  CHECK(d.points.back().k == 2);
  CHECK(d.points.front().k == 0);

  auto p = mk_parity_ntba<R>(2);
  const auto rp = k_restriction_additivity(p, 0b011);
  CHECK(rp.ok);
  CHECK(rp.pairs == 8);
  CHECK_THROWS_AS(k_restriction_additivity(p, 0), PreconditionError);
  CHECK_THROWS_AS(k_restriction_additivity(p, p.full()), PreconditionError);
}

TEST_CASE("spectral identities on random algebras") {
  Rng rng(23, 4);
  for (int t = 0; t < 10; ++t) {
    auto b = random_ntba<R>(rng, 36);
    const auto d = spectral_decompose(b);
    const auto rep = verify_spectral_identities(d);
    CHECK_MESSAGE(rep.ok, rep.failed);
    CHECK(same_subspace(d.level(1), first_chaos(b).h1));
  }
}
