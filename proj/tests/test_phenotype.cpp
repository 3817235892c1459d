#include "doctest.h"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "voxelforge/phenotype.hpp"

using namespace voxelforge;

TEST_CASE("dims index and coords are inverse") {
  const Dims d{3, 4, 5};
  for (std::size_t c = 0; c < d.count(); ++c) {
    const auto [x, y, z] = d.coords(c);
    CHECK(d.index(x, y, z) == c);
  }
  CHECK(d.index(1, 2, 3) == (1 * 4 + 2) * 5 + 3);
}

TEST_CASE("builder produces a valid body") {
  const auto p = PhenotypeBuilder(Dims{2, 1, 2}).add(0, 0, 0, 1e5).add(0, 0, 1, 1e6, 2.0, 1.0).build();
  CHECK(p.voxel_count() == 2);
  CHECK(p.voxels() == std::vector<std::size_t>{0, 1});
  CHECK(p.alpha()[1] == 2.0);
}

TEST_CASE("phenotype validation") {
  const Dims d{3, 1, 1};
  CHECK_THROWS_AS(PhenotypeBuilder(d).build(), InvalidPhenotype);
  CHECK_THROWS_AS(PhenotypeBuilder(d).add(0, 0, 0, 1e5).add(2, 0, 0, 1e5).build(),
                  InvalidPhenotype);
  CHECK_THROWS_AS(PhenotypeBuilder(d).add(0, 0, 0, 1e3).build(), InvalidPhenotype);
  CHECK_THROWS_AS(PhenotypeBuilder(d).add(0, 0, 0, 1e11).build(), InvalidPhenotype);
  CHECK_THROWS_AS(PhenotypeBuilder(d).add(0, 0, 0, 1e5, 11.0).build(), InvalidPhenotype);
  CHECK_THROWS_AS(PhenotypeBuilder(d).add(0, 0, 0, 1e5, 0.0, 4.0).build(), InvalidPhenotype);
}

TEST_CASE("with_stiffness replaces stiffness only") {
  Rng rng(1);
  const auto p = gen::phenotype(rng, Dims{4, 4, 4}, 20);
  std::vector<double> k(p.voxel_count(), 3e5);
  const auto q = p.with_stiffness(k);
  CHECK(q.geometry() == p.geometry());
  CHECK(q.alpha() == p.alpha());
  CHECK(q.phase() == p.phase());
  for (std::size_t c : q.voxels()) CHECK(q.stiffness()[c] == 3e5);
  CHECK_THROWS_AS(p.with_stiffness({1e5}), InvalidPhenotype);
}

TEST_CASE("property: components agree with flood fill") {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const Dims d{1 + static_cast<int>(rng.index(6)), 1 + static_cast<int>(rng.index(6)),
                 1 + static_cast<int>(rng.index(6))};
    std::vector<std::uint8_t> mask(d.count());
    const double density = rng.uniform(0.1, 0.7);
    for (auto& m : mask) m = rng.bernoulli(density);
    const auto comps = connected_components(d, mask);
    std::size_t total = 0;
    std::size_t previous_lowest = 0;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      REQUIRE(std::is_sorted(comps[i].begin(), comps[i].end()));
      if (i > 0) REQUIRE(comps[i].front() > previous_lowest);
      previous_lowest = comps[i].front();
      total += comps[i].size();
    }
    REQUIRE(total == static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1)));

    const auto expected = oracle::largest_component(d, mask);
    std::vector<std::uint8_t> largest(d.count(), 0);
    if (!comps.empty()) {
      const auto* best = &comps.front();
      for (const auto& c : comps) {
        if (c.size() > best->size()) best = &c;
      }
      for (std::size_t c : *best) largest[c] = 1;
    }
    REQUIRE(largest == expected);
  }
}
