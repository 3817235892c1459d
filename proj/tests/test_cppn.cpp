#include <cmath>

#include "doctest.h"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "voxelforge/cppn.hpp"
#include "voxelforge/rng.hpp"

using namespace voxelforge;
using namespace voxelforge::genome;

TEST_CASE("activation functions") {
  CHECK(activate(Activation::Sine, 0.5) == std::sin(0.5));
  CHECK(activate(Activation::Sigmoid, 0.0) == 0.0);
  CHECK(activate(Activation::Sigmoid, 50.0) == doctest::Approx(1.0));
  CHECK(activate(Activation::Gaussian, 0.0) == 1.0);
  CHECK(activate(Activation::Gaussian, 10.0) == doctest::Approx(-1.0));
  CHECK(activate(Activation::Abs, -2.5) == 2.5);
  CHECK(activate(Activation::Linear, -2.5) == -2.5);
  for (auto a : kActivations) CHECK(parse_activation(to_string(a)) == a);
  CHECK_THROWS_AS(parse_activation("relu"), std::invalid_argument);
}

TEST_CASE("default network evaluates to zero") {
  Cppn net;
  CHECK(net.evaluate(0.3, -0.2, 0.9, 1.0) == 0.0);
  CHECK(net.nodes().size() == 1);
  CHECK(net.links().empty());
}

TEST_CASE("hand-built network") {
  // out = linear(2 * abs(x) - 0.5 * bias)
  Cppn net({{5, Activation::Linear}, {6, Activation::Abs}},
           {{0, 6, 1.0, true}, {6, 5, 2.0, true}, {4, 5, -0.5, true}, {1, 5, 9.0, false}});
  CHECK(net.evaluate(-0.3, 0.7, 0.0, 0.0) == doctest::Approx(0.1));
  CHECK(net.evaluate(0.8, 0.0, 0.0, 0.0) == 1.0);  // clamped from 1.1
}

TEST_CASE("construction rejects malformed graphs") {
  using L = CppnLink;
  const CppnNode out{5, Activation::Linear};
  CHECK_THROWS_AS(Cppn({}, {}), InvalidNetwork);                                  // no output
  CHECK_THROWS_AS(Cppn({out, {2, Activation::Abs}}, {}), InvalidNetwork);         // input id
  CHECK_THROWS_AS(Cppn({out, out}, {}), InvalidNetwork);                          // duplicate
  CHECK_THROWS_AS(Cppn({out}, {L{0, 7, 1.0, true}}), InvalidNetwork);             // dangling
  CHECK_THROWS_AS(Cppn({out}, {L{5, 5, 1.0, true}}), InvalidNetwork);             // from output
  CHECK_THROWS_AS(Cppn({out, {6, Activation::Abs}}, {L{6, 1, 1.0, true}}), InvalidNetwork);
  CHECK_THROWS_AS(Cppn({out}, {L{0, 5, 1.0, true}, L{0, 5, 2.0, true}}), InvalidNetwork);
  CHECK_THROWS_AS(Cppn({out}, {L{0, 5, NAN, true}}), InvalidNetwork);
  // A cycle through a disabled link still counts.
  CHECK_THROWS_AS(Cppn({out, {6, Activation::Abs}, {7, Activation::Sine}},
                       {L{6, 7, 1.0, true}, L{7, 6, 1.0, false}}),
                  InvalidNetwork);
}

TEST_CASE("creates_cycle") {
  Cppn net({{5, Activation::Linear}, {6, Activation::Abs}, {7, Activation::Sine}},
           {{0, 6, 1.0, true}, {6, 7, 1.0, true}, {7, 5, 1.0, true}});
  CHECK(creates_cycle(net, 7, 6));
  CHECK(creates_cycle(net, 6, 6));
  CHECK_FALSE(creates_cycle(net, 6, 5));
  CHECK_FALSE(creates_cycle(net, 0, 7));
}

TEST_CASE("property: evaluation matches the recursive reference interpreter") {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = gen::genome(rng, 1 + static_cast<int>(rng.index(30)));
    for (const auto& net : g.networks) {
      for (int q = 0; q < 20; ++q) {
        const double x = rng.uniform(-1, 1), y = rng.uniform(-1, 1), z = rng.uniform(-1, 1);
        const double r = std::sqrt(x * x + y * y + z * z);
        const double got = net.evaluate(x, y, z, r);
        REQUIRE(got == oracle::cppn(net, x, y, z, r));
        REQUIRE(got >= -1.0);
        REQUIRE(got <= 1.0);
      }
    }
  }
}

TEST_CASE("random network connects every input to the output") {
  Rng rng(5);
  const Cppn net = Cppn::random(rng);
  CHECK(net.links().size() == 5);
  for (const auto& l : net.links()) {
    CHECK(l.target == Cppn::kOutputId);
    CHECK(l.enabled);
  }
}
