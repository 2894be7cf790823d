#include "noise_lattice/randsup.hpp"

#include <doctest.h>

#include <bit>
#include <cmath>

using namespace noise_lattice;
using namespace noise_lattice::randsup;

TEST_CASE("empty element is likely for small p") {
  const int trials = 100000;
  Rng rng(7, 0);
  int empty = 0;
  for (int t = 0; t < trials; ++t) empty += sample_element(4, 0.01, rng) == 0;
  const double exact = std::pow(0.99, 4), sigma = std::sqrt(exact * (1 - exact) / trials);
  CHECK(exact == doctest::Approx(0.9606).epsilon(1e-4));
  CHECK(std::abs(empty / double(trials) - exact) <= 3 * sigma);
}

TEST_CASE("p = 1/2 gives equiprobable subsets") {
  const auto r = chi_square_law(2, 0.5, 100000, 3);
  CHECK(r.expected == std::vector<double>(4, 25000.0));
  CHECK(r.pass);
}

TEST_CASE("chi-square law for small levels") {
  for (int atoms = 1; atoms <= 4; ++atoms)
    for (double p : {0.1, 0.5, 0.9}) {
      const auto r = chi_square_law(atoms, p, 100000, 42);
      CHECK_MESSAGE(r.p_value > 0.001, "atoms=" << atoms << " p=" << p);
      CHECK(r.dof == (1 << atoms) - 1);
    }
}

TEST_CASE("join process is monotone and reproducible") {
  auto cfg = make_config({0.2, 0.1, 0.05}, 500, 9);
  CHECK(cfg.atom_counts == std::vector<int>{2, 4, 8});
  const auto runs = run_join_process(cfg);
  REQUIRE(runs.size() == 500);
  for (const auto& y : runs)
    for (std::size_t k = 1; k < y.size(); ++k) CHECK((y[k - 1] & ~y[k]) == 0);
  CHECK(run_join_process(cfg) == runs);
  CHECK(trajectory(cfg, 123) == runs[123]);
}

TEST_CASE("single level swallows everything with probability p") {
  SampleConfig cfg;
  cfg.atom_counts = {1};
  cfg.ps = {0.3};
  cfg.trials = 40000;
  cfg.seed = 5;
  std::uint64_t full = 0;
  for (const auto& y : run_join_process(cfg)) full += y[0] == 1;
  const double sigma = std::sqrt(0.3 * 0.7 / 40000);
  CHECK(std::abs(full / 40000.0 - 0.3) <= 3 * sigma);
}

TEST_CASE("forced zero elements") {
  auto cfg = make_config({0.5, 0.5}, 100, 1);
  cfg.force_zero = true;
  for (const auto& y : run_join_process(cfg))
    for (auto e : y) CHECK(e == 0);
}

TEST_CASE("refinement maps are contiguous") {
  auto cfg = make_config({0.1, 0.1, 0.1}, 1, 1);
  CHECK(refine_to_finest(cfg, 0, 0b01) == 0x0F);
  CHECK(refine_to_finest(cfg, 0, 0b10) == 0xF0);
  CHECK(refine_to_finest(cfg, 1, 0b0100) == 0x30);
  CHECK(refine_to_finest(cfg, 2, 0x81) == 0x81);
}

TEST_CASE("union bound examples") {
  struct Case {
    std::vector<double> ps;
    double exact, bound;
  };
  for (const auto& c : {Case{{0.1, 0.1, 0.1}, 0.271, 0.3}, Case{{0.25}, 0.25, 0.25}, Case{{0.4, 0.4}, 0.64, 0.8}}) {
    const auto r = union_bound_report(make_config(c.ps, 100000, 42));
    REQUIRE(r.rows.size() == c.ps.size());
    CHECK(r.rows.back().exact == doctest::Approx(c.exact).epsilon(1e-12));
    CHECK(r.rows.back().bound == doctest::Approx(c.bound).epsilon(1e-12));
    CHECK(r.monotone);
    CHECK(r.pass);
  }
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(validate(make_config({0.0}, 10, 1), false), DomainError);
  CHECK_THROWS_AS(validate(make_config({1.0}, 10, 1), false), DomainError);
  CHECK_THROWS_AS(validate(make_config({0.6, 0.5}, 10, 1), true), DomainError);
  CHECK_NOTHROW(validate(make_config({0.6, 0.5}, 10, 1), false));
}

TEST_CASE("decay sequence defaults to c_n = n^2") {
  const auto d = decay_sequence(make_config({0.5, 0.5}, 1, 1));
  REQUIRE(d.size() == 2);
  CHECK(d[0] == doctest::Approx(0.5));
  CHECK(d[1] == doctest::Approx(std::pow(0.5, 4)));
}
