#include <cmath>
#include <set>

#include "doctest.h"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "voxelforge/genome.hpp"
#include "voxelforge/rng.hpp"

using namespace voxelforge;
using namespace voxelforge::genome;

namespace {

// Constant-output network: out = linear(w * bias).
Cppn constant(double w) { return Cppn({{5, Activation::Linear}}, {{4, 5, w, true}}); }

Genome constant_genome(double geometry, double stiffness, double gain, double phase) {
  Genome g;
  g.networks = {constant(geometry), constant(stiffness), constant(gain), constant(phase)};
  return g;
}

}  // namespace

TEST_CASE("output mappings") {
  CHECK(stiffness_from_output(-1.0) == doctest::Approx(1e4));
  CHECK(stiffness_from_output(0.0) == doctest::Approx(1e7));
  CHECK(stiffness_from_output(1.0) == doctest::Approx(1e10));
  for (double o = -1.0; o <= 1.0; o += 0.125) {
    CHECK(stiffness_from_output(o) == doctest::Approx(std::pow(10.0, 4.0 + 3.0 * (o + 1.0))));
    CHECK(stiffness_from_output(o) >= 1e4);
    CHECK(stiffness_from_output(o) <= 1e10);
  }
  CHECK(stiffness_from_output(0.0, 1e4, 1e6) == doctest::Approx(1e5));
  CHECK(gain_from_output(-1.0) == -10.0);
  CHECK(gain_from_output(0.25) == 2.5);
  CHECK(phase_from_output(1.0) == doctest::Approx(M_PI));
  CHECK(scaled_coordinate(0, 5) == -1.0);
  CHECK(scaled_coordinate(2, 5) == 0.0);
  CHECK(scaled_coordinate(4, 5) == 1.0);
  CHECK(scaled_coordinate(0, 1) == 0.0);
}

TEST_CASE("constant genome fills the lattice") {
  const auto p = express(constant_genome(0.5, 0.0, -0.5, 0.5), Dims{3, 4, 2});
  REQUIRE(p.has_value());
  CHECK(p->voxel_count() == 24);
  for (std::size_t c : p->voxels()) {
    CHECK(p->stiffness()[c] == doctest::Approx(1e7));
    CHECK(p->alpha()[c] == -5.0);
    CHECK(p->phase()[c] == doctest::Approx(M_PI / 2));
  }
}

TEST_CASE("no present cell gives no body") {
  CHECK_FALSE(express(constant_genome(-0.1, 0, 0, 0), Dims{4, 4, 4}).has_value());
  CHECK_FALSE(express(constant_genome(0.0, 0, 0, 0), Dims{4, 4, 4}).has_value());
}

TEST_CASE("property: expression keeps the largest component of the geometry field") {
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const Dims dims{2 + static_cast<int>(rng.index(5)), 2 + static_cast<int>(rng.index(5)),
                    2 + static_cast<int>(rng.index(5))};
    const auto g = gen::genome(rng, static_cast<int>(rng.index(20)));
    std::vector<std::uint8_t> mask(dims.count(), 0);
    for (std::size_t c = 0; c < dims.count(); ++c) {
      const auto [i, j, k] = dims.coords(c);
      const double x = scaled_coordinate(i, dims.x), y = scaled_coordinate(j, dims.y),
                   z = scaled_coordinate(k, dims.z);
      mask[c] = oracle::cppn(g.networks[kGeometry], x, y, z, std::sqrt(x * x + y * y + z * z)) > 0;
    }
    const auto expected = oracle::largest_component(dims, mask);
    const auto p = express(g, dims);
    const bool any = std::any_of(expected.begin(), expected.end(), [](auto v) { return v; });
    REQUIRE(p.has_value() == any);
    if (p) {
      REQUIRE(p->geometry() == expected);
      for (std::size_t c : p->voxels()) {
        REQUIRE(p->stiffness()[c] >= 1e4);
        REQUIRE(p->stiffness()[c] <= 1e10);
        REQUIRE(std::fabs(p->alpha()[c]) <= 10.0);
        REQUIRE(std::fabs(p->phase()[c]) <= M_PI);
      }
    }
  }
}

TEST_CASE("equal-size components: the one holding the lowest index wins") {
  // Geometry present iff |x| > 0.5: two slabs at x = -1 and x = 1.
  Cppn geometry({{5, Activation::Linear}, {6, Activation::Abs}},
                {{0, 6, 1.0, true}, {6, 5, 1.0, true}, {4, 5, -0.5, true}});
  Genome g = constant_genome(0, 0, 0, 0);
  g.networks[kGeometry] = geometry;
  const auto p = express(g, Dims{3, 2, 2});
  REQUIRE(p.has_value());
  CHECK(p->voxel_count() == 4);
  for (std::size_t c : p->voxels()) CHECK(p->dims().coords(c)[0] == 0);
}

TEST_CASE("mutation bookkeeping") {
  Rng rng(3);
  IdAllocator ids(10);
  const Genome parent = random_genome(rng, ids.next());
  const Genome child = mutate(parent, rng, ids.next());
  CHECK(parent.id == 10);
  CHECK(child.id == 11);
  REQUIRE(child.parent_id.has_value());
  CHECK(*child.parent_id == 10);
  CHECK(ids.peek() == 12);
}

TEST_CASE("property: mutation changes at least one network and keeps them valid") {
  Rng rng(99);
  int unchanged = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Genome parent = gen::genome(rng, static_cast<int>(rng.index(10)));
    const Genome child = mutate(parent, rng, 1000);
    int changed = 0;
    for (std::size_t c = 0; c < 4; ++c) changed += !(child.networks[c] == parent.networks[c]);
    // A weight perturbation of exactly zero or re-drawing the same
    // activation can leave a network equal; this must be rare.
    if (changed == 0) ++unchanged;
    for (const auto& net : child.networks) {
      REQUIRE_NOTHROW(Cppn(net.nodes(), net.links()));
    }
  }
  CHECK(unchanged < 30);
}

TEST_CASE("mutation operators") {
  Rng rng(4);
  const Cppn base = Cppn::random(rng);

  SUBCASE("add node splits an enabled link") {
    const auto m = apply_mutation(base, MutationOp::AddNode, rng);
    REQUIRE(m.has_value());
    CHECK(m->nodes().size() == base.nodes().size() + 1);
    CHECK(m->links().size() == base.links().size() + 2);
    int disabled = 0;
    for (const auto& l : m->links()) disabled += !l.enabled;
    CHECK(disabled == 1);
  }
  SUBCASE("add link never closes a cycle") {
    Cppn net = base;
    for (int i = 0; i < 30; ++i) {
      if (auto m = apply_mutation(net, MutationOp::AddNode, rng)) net = *m;
      if (auto m = apply_mutation(net, MutationOp::AddLink, rng)) net = *m;
    }
    CHECK_NOTHROW(Cppn(net.nodes(), net.links()));
  }
  SUBCASE("remove link on a linkless network does not apply") {
    CHECK_FALSE(apply_mutation(Cppn(), MutationOp::RemoveLink, rng).has_value());
    CHECK_FALSE(apply_mutation(Cppn(), MutationOp::PerturbWeight, rng).has_value());
    CHECK_FALSE(apply_mutation(Cppn(), MutationOp::AddNode, rng).has_value());
    const auto m = apply_mutation(base, MutationOp::RemoveLink, rng);
    REQUIRE(m.has_value());
    CHECK(m->links().size() == base.links().size() - 1);
  }
  SUBCASE("perturb weight moves exactly one weight") {
    const auto m = apply_mutation(base, MutationOp::PerturbWeight, rng);
    REQUIRE(m.has_value());
    int moved = 0;
    for (std::size_t i = 0; i < base.links().size(); ++i) {
      moved += m->links()[i].weight != base.links()[i].weight;
    }
    CHECK(moved == 1);
  }
}

TEST_CASE("mutation is deterministic under the seed") {
  Rng a(8), b(8);
  CHECK(gen::genome(a, 25) == gen::genome(b, 25));
}
