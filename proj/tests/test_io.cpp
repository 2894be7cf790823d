#include "noise_lattice/io.hpp"

#include <doctest.h>

using namespace noise_lattice;
using R = Rational;

TEST_CASE("spaces round trip through JSON") {
  Vec<R> p(3);
  p << R(1, 2), R(1, 3), R(1, 6);
  ProbSpace<R> s({"a", "b", "c"}, p);
  const Json j = space_to_json(s);
  CHECK(j["probs"][1] == "1/3");
  CHECK(*space_from_json<R>(j) == s);
  CHECK(space_from_json<double>(j)->prob(2) == doctest::Approx(1.0 / 6));
}

TEST_CASE("algebras round trip through JSON") {
  auto b = mk_parity_ntba<R>(2);
  const auto back = ntba_from_json<R>(ntba_to_json(b));
  CHECK(back.space() == b.space());
  CHECK(back.atoms() == b.atoms());
}

TEST_CASE("malformed input") {
  CHECK_THROWS_AS(space_from_json<R>(Json::parse(R"({"outcomes":["a"]})")), ParseError);
  CHECK_THROWS_AS(space_from_json<R>(Json::parse(R"({"outcomes":["a","b"],"probs":["1/2","1/3"]})")), DomainError);
  CHECK_THROWS_AS(partition_from_json(Json::parse(R"({"blocks":[[0],[0,1]]})"), 2), DomainError);
  CHECK_THROWS_AS(ntba_from_json<R>(Json::parse(R"({"space":{}})")), ParseError);
}

TEST_CASE("atom sets") {
  CHECK(parse_atomset("1,3", 3) == 0b101);
  CHECK(parse_atomset("{2}", 3) == 0b010);
  CHECK_THROWS_AS(parse_atomset("4", 3), DomainError);
  CHECK(atomset_to_json(0b101) == Json::array({1, 3}));
}
