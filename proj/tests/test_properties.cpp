#include "noise_lattice/checks.hpp"

#include <doctest.h>

using namespace noise_lattice;

namespace {

template <class Scalar>
void run_suites(std::size_t cases) {
  checks::Options o;
  o.seed = 2;
  o.cases = cases;
  for (const auto& s : checks::run_all<Scalar>(o)) {
    INFO(s.name << " " << s.witness.dump());
    CHECK(s.passed());
  }
}

}  // namespace

TEST_CASE("property suites pass in exact arithmetic") { run_suites<Rational>(20); }

TEST_CASE("property suites pass in floating point") { run_suites<double>(50); }

TEST_CASE("fault injection breaks the independence suites") {
  checks::Options o;
  o.cases = 20;
  o.inject_fault = true;
  std::vector<std::string> failed;
  for (const auto& s : checks::run_all<Rational>(o))
    if (!s.passed()) {
      failed.push_back(s.name);
      CHECK(s.witness.contains("seed"));
    }
  CHECK(std::find(failed.begin(), failed.end(), "independence_criterion") != failed.end());
  CHECK(std::find(failed.begin(), failed.end(), "ntba_validate") != failed.end());
}

TEST_CASE("suite reports are deterministic") {
  checks::Options o;
  o.cases = 5;
  const auto a = checks::span_rank<Rational>(o), b = checks::span_rank<Rational>(o);
  CHECK(checks::to_json(a).dump() == checks::to_json(b).dump());
}
