#pragma once

// Independent reference implementations. They share no code with the
// library beyond its data types and are written for obviousness, not speed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <vector>

#include "voxelforge/cppn.hpp"
#include "voxelforge/evolution.hpp"
#include "voxelforge/phenotype.hpp"

namespace oracle {

using voxelforge::Dims;
using voxelforge::genome::Activation;
using voxelforge::genome::Cppn;

inline double activation(Activation a, double x) {
  switch (a) {
    case Activation::Sine:
      return std::sin(x);
    case Activation::Sigmoid:
      return 2.0 / (1.0 + std::exp(-x)) - 1.0;
    case Activation::Gaussian:
      return 2.0 * std::exp(-x * x) - 1.0;
    case Activation::Abs:
      return std::fabs(x);
    case Activation::Linear:
      return x;
  }
  return 0.0;
}

// Pull-based recursive evaluation from the output node, memoised per node.
// Incoming terms are summed in link order.
inline double cppn(const Cppn& net, double x, double y, double z, double r) {
  std::map<int, double> memo{{0, x}, {1, y}, {2, z}, {3, r}, {4, 1.0}};
  std::function<double(int)> value = [&](int id) -> double {
    if (auto it = memo.find(id); it != memo.end()) return it->second;
    double sum = 0.0;
    for (const auto& link : net.links()) {
      if (link.enabled && link.target == id) sum += link.weight * value(link.source);
    }
    Activation act = Activation::Linear;
    for (const auto& n : net.nodes()) {
      if (n.id == id) act = n.activation;
    }
    return memo[id] = activation(act, sum);
  };
  const double out = value(Cppn::kOutputId);
  if (std::isnan(out)) return 0.0;
  return std::max(-1.0, std::min(1.0, out));
}

// Breadth-first flood fill; returns the mask of the largest face-connected
// component, preferring the component found first in index order.
inline std::vector<std::uint8_t> largest_component(const Dims& dims,
                                                   const std::vector<std::uint8_t>& mask) {
  std::vector<int> label(mask.size(), -1);
  std::vector<std::size_t> sizes;
  for (std::size_t start = 0; start < mask.size(); ++start) {
    if (!mask[start] || label[start] >= 0) continue;
    const int id = static_cast<int>(sizes.size());
    std::size_t size = 0;
    std::deque<std::size_t> queue{start};
    label[start] = id;
    while (!queue.empty()) {
      const std::size_t c = queue.front();
      queue.pop_front();
      ++size;
      const auto [x, y, z] = dims.coords(c);
      const int nb[6][3] = {{x - 1, y, z}, {x + 1, y, z}, {x, y - 1, z},
                            {x, y + 1, z}, {x, y, z - 1}, {x, y, z + 1}};
      for (const auto& n : nb) {
        if (!dims.contains(n[0], n[1], n[2])) continue;
        const std::size_t o = dims.index(n[0], n[1], n[2]);
        if (mask[o] && label[o] < 0) {
          label[o] = id;
          queue.push_back(o);
        }
      }
    }
    sizes.push_back(size);
  }
  std::vector<std::uint8_t> out(mask.size(), 0);
  if (sizes.empty()) return out;
  int best = 0;
  for (int i = 1; i < static_cast<int>(sizes.size()); ++i) {
    if (sizes[static_cast<std::size_t>(i)] > sizes[static_cast<std::size_t>(best)]) best = i;
  }
  for (std::size_t c = 0; c < mask.size(); ++c) out[c] = label[c] == best ? 1 : 0;
  return out;
}

using Point = std::array<int, 3>;

// Definition of the symmetric Hausdorff distance, evaluated directly.
inline double hausdorff(const std::vector<Point>& a, const std::vector<Point>& b) {
  auto directed = [](const std::vector<Point>& from, const std::vector<Point>& to) {
    double worst = 0.0;
    for (const auto& p : from) {
      double nearest = std::numeric_limits<double>::infinity();
      for (const auto& q : to) {
        const double dx = p[0] - q[0], dy = p[1] - q[1], dz = p[2] - q[2];
        nearest = std::min(nearest, std::sqrt(dx * dx + dy * dy + dz * dz));
      }
      worst = std::max(worst, nearest);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

// Rotation about the lattice centre by quarter turns, done in floating
// point with explicit trigonometry and rounded back to the grid.
inline std::vector<std::array<double, 3>> rotate(const std::vector<Point>& s, const Dims& dims,
                                                 int xy_quarters, int yz_quarters) {
  const double cx = 0.5 * (dims.x - 1), cy = 0.5 * (dims.y - 1), cz = 0.5 * (dims.z - 1);
  std::vector<std::array<double, 3>> out;
  for (const auto& p : s) {
    double x = p[0] - cx, y = p[1] - cy, z = p[2] - cz;
    const double a = yz_quarters * std::numbers::pi / 2;
    const double y2 = std::round(2 * (y * std::cos(a) - z * std::sin(a))) / 2;
    const double z2 = std::round(2 * (y * std::sin(a) + z * std::cos(a))) / 2;
    y = y2;
    z = z2;
    const double b = xy_quarters * std::numbers::pi / 2;
    const double x3 = std::round(2 * (x * std::cos(b) - y * std::sin(b))) / 2;
    const double y3 = std::round(2 * (x * std::sin(b) + y * std::cos(b))) / 2;
    out.push_back({x3 + cx, y3 + cy, z + cz});
  }
  return out;
}

inline double hausdorff_real(const std::vector<Point>& a,
                             const std::vector<std::array<double, 3>>& b) {
  auto d = [](double dx, double dy, double dz) { return std::sqrt(dx * dx + dy * dy + dz * dz); };
  double ab = 0.0, ba = 0.0;
  for (const auto& p : a) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& q : b) nearest = std::min(nearest, d(p[0] - q[0], p[1] - q[1], p[2] - q[2]));
    ab = std::max(ab, nearest);
  }
  for (const auto& q : b) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& p : a) nearest = std::min(nearest, d(p[0] - q[0], p[1] - q[1], p[2] - q[2]));
    ba = std::max(ba, nearest);
  }
  return std::max(ab, ba);
}

inline double min_rotation_hausdorff(const std::vector<Point>& a, const std::vector<Point>& b,
                                     const Dims& dims) {
  double best = std::numeric_limits<double>::infinity();
  for (int yz = 0; yz < 2; ++yz) {
    for (int xy = 0; xy < 4; ++xy) best = std::min(best, hausdorff_real(a, rotate(b, dims, xy, yz)));
  }
  return best;
}

// Pareto dominance on (fitness max, age min), spelled out by cases.
inline bool dominates(double fa, int aa, double fb, int ab) {
  const bool no_worse = !(fa < fb) && !(aa > ab);
  const bool better_somewhere = fa > fb || aa < ab;
  return no_worse && better_somewhere;
}

inline std::vector<std::size_t> front(const std::vector<voxelforge::evolution::Individual>& pop) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    bool beaten = false;
    for (std::size_t j = 0; j < pop.size(); ++j) {
      if (i != j && dominates(pop[j].fitness, pop[j].age, pop[i].fitness, pop[i].age)) {
        beaten = true;
      }
    }
    if (!beaten) out.push_back(i);
  }
  return out;
}

// Spreadsheet-style recomputations.
inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size());
}

}  // namespace oracle
