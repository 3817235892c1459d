#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace voxelforge {
class Rng;
}

namespace voxelforge::genome {

enum class Activation { Sine, Sigmoid, Gaussian, Abs, Linear };

inline constexpr std::array<Activation, 5> kActivations = {
    Activation::Sine, Activation::Sigmoid, Activation::Gaussian, Activation::Abs,
    Activation::Linear};

std::string_view to_string(Activation a);
// Throws std::invalid_argument for unknown names.
Activation parse_activation(std::string_view name);

// sine: sin(x); sigmoid: 2/(1+e^-x) - 1; gaussian: 2 e^(-x^2) - 1;
// abs: |x|; linear: x.
double activate(Activation a, double x);

struct CppnNode {
  int id = 0;
  Activation activation = Activation::Linear;
  friend bool operator==(const CppnNode&, const CppnNode&) = default;
};

struct CppnLink {
  int source = 0;
  int target = 0;
  double weight = 0.0;
  bool enabled = true;
  friend bool operator==(const CppnLink&, const CppnLink&) = default;
};

class InvalidNetwork : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Feed-forward compositional pattern-producing network.
//
// Node ids 0..4 are the implicit inputs x, y, z, r and bias (constant 1);
// they never appear in nodes(). Id 5 is the single output node. Every other
// node is hidden. The graph is validated (acyclic, no dangling ids, no
// duplicate links, no links into inputs or out of the output) and compiled
// into an evaluation order at construction; instances are immutable.
class Cppn {
 public:
  static constexpr int kInputCount = 5;
  static constexpr int kBiasId = 4;
  static constexpr int kOutputId = 5;

  // Output node only, linear, no links. Evaluates to 0 everywhere.
  Cppn();
  Cppn(std::vector<CppnNode> nodes, std::vector<CppnLink> links);

  // Fully connected inputs -> output, N(0,1) weights, random output activation.
  static Cppn random(Rng& rng);

  const std::vector<CppnNode>& nodes() const { return nodes_; }
  const std::vector<CppnLink>& links() const { return links_; }
  int max_node_id() const;

  // Output clamped to [-1, 1].
  double evaluate(double x, double y, double z, double r) const;

  friend bool operator==(const Cppn& a, const Cppn& b) {
    return a.nodes_ == b.nodes_ && a.links_ == b.links_;
  }

 private:
  struct Incoming {
    std::size_t source_slot;
    double weight;
  };
  struct Step {
    std::size_t slot;
    Activation activation;
    std::size_t first_incoming;
    std::size_t incoming_count;
  };

  void compile();

  std::vector<CppnNode> nodes_;
  std::vector<CppnLink> links_;
  std::vector<Step> order_;
  std::vector<Incoming> incoming_;
  std::size_t output_slot_ = 0;
  std::size_t slot_count_ = 0;
};

// True iff adding source -> target to the network would close a cycle.
bool creates_cycle(const Cppn& net, int source, int target);

}  // namespace voxelforge::genome
