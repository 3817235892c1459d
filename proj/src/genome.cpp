#include "voxelforge/genome.hpp"

#include <algorithm>
#include <numbers>
#include <utility>
#include <vector>

#include "voxelforge/rng.hpp"

namespace voxelforge::genome {

namespace {

constexpr std::array<MutationOp, 5> kMutationOps = {
    MutationOp::AddNode, MutationOp::AddLink, MutationOp::RemoveLink,
    MutationOp::PerturbWeight, MutationOp::ChangeActivation};

Activation random_activation(Rng& rng) { return kActivations[rng.index(kActivations.size())]; }

std::optional<Cppn> add_node(const Cppn& net, Rng& rng) {
  std::vector<std::size_t> enabled;
  for (std::size_t i = 0; i < net.links().size(); ++i) {
    if (net.links()[i].enabled) enabled.push_back(i);
  }
  if (enabled.empty()) return std::nullopt;
  const std::size_t split = enabled[rng.index(enabled.size())];

  auto nodes = net.nodes();
  auto links = net.links();
  const int id = net.max_node_id() + 1;
  nodes.push_back({id, random_activation(rng)});
  const CppnLink old = links[split];
  links[split].enabled = false;
  links.push_back({old.source, id, 1.0, true});
  links.push_back({id, old.target, old.weight, true});
  return Cppn(std::move(nodes), std::move(links));
}

std::optional<Cppn> add_link(const Cppn& net, Rng& rng) {
  std::vector<int> sources;
  for (int i = 0; i < Cppn::kInputCount; ++i) sources.push_back(i);
  std::vector<int> targets;
  for (const auto& n : net.nodes()) {
    targets.push_back(n.id);
    if (n.id != Cppn::kOutputId) sources.push_back(n.id);
  }
  std::vector<std::pair<int, int>> candidates;
  for (int s : sources) {
    for (int t : targets) {
      const bool exists = std::any_of(net.links().begin(), net.links().end(), [&](const auto& l) {
        return l.source == s && l.target == t;
      });
      if (!exists && !creates_cycle(net, s, t)) candidates.emplace_back(s, t);
    }
  }
  if (candidates.empty()) return std::nullopt;
  const auto [s, t] = candidates[rng.index(candidates.size())];
  auto links = net.links();
  links.push_back({s, t, rng.normal(0.0, 1.0), true});
  return Cppn(net.nodes(), std::move(links));
}

std::optional<Cppn> remove_link(const Cppn& net, Rng& rng) {
  if (net.links().empty()) return std::nullopt;
  auto links = net.links();
  links.erase(links.begin() + static_cast<std::ptrdiff_t>(rng.index(links.size())));
  return Cppn(net.nodes(), std::move(links));
}

std::optional<Cppn> perturb_weight(const Cppn& net, Rng& rng) {
  if (net.links().empty()) return std::nullopt;
  auto links = net.links();
  auto& link = links[rng.index(links.size())];
  link.weight += rng.normal(0.0, kWeightPerturbationStddev);
  return Cppn(net.nodes(), std::move(links));
}

std::optional<Cppn> change_activation(const Cppn& net, Rng& rng) {
  auto nodes = net.nodes();
  nodes[rng.index(nodes.size())].activation = random_activation(rng);
  return Cppn(std::move(nodes), net.links());
}

}  // namespace

Genome random_genome(Rng& rng, GenomeId id) {
  Genome g;
  for (auto& net : g.networks) net = Cppn::random(rng);
  g.id = id;
  return g;
}

double phase_from_output(double o) { return std::numbers::pi * o; }

double scaled_coordinate(int index, int extent) {
  if (extent <= 1) return 0.0;
  return 2.0 * index / (extent - 1) - 1.0;
}

std::optional<Phenotype> express(const Genome& genome, const Dims& dims, double k_min,
                                 double k_max) {
  const std::size_t n = dims.count();
  std::vector<std::uint8_t> present(n, 0);
  std::vector<std::array<double, 4>> inputs(n);
  for (std::size_t cell = 0; cell < n; ++cell) {
    const auto [i, j, k] = dims.coords(cell);
    const double x = scaled_coordinate(i, dims.x);
    const double y = scaled_coordinate(j, dims.y);
    const double z = scaled_coordinate(k, dims.z);
    const double r = std::sqrt(x * x + y * y + z * z);
    inputs[cell] = {x, y, z, r};
    present[cell] = genome.networks[kGeometry].evaluate(x, y, z, r) > 0.0 ? 1 : 0;
  }

  const auto components = connected_components(dims, present);
  if (components.empty()) return std::nullopt;
  // Components come ordered by lowest cell index; strict > keeps the first
  // of equally large ones.
  const std::vector<std::size_t>* largest = &components.front();
  for (const auto& c : components) {
    if (c.size() > largest->size()) largest = &c;
  }

  std::vector<std::uint8_t> geometry(n, 0);
  std::vector<double> stiffness(n, 0.0);
  std::vector<double> alpha(n, 0.0);
  std::vector<double> phase(n, 0.0);
  for (std::size_t cell : *largest) {
    const auto& [x, y, z, r] = inputs[cell];
    geometry[cell] = 1;
    stiffness[cell] =
        stiffness_from_output(genome.networks[kStiffness].evaluate(x, y, z, r), k_min, k_max);
    alpha[cell] = gain_from_output(genome.networks[kGain].evaluate(x, y, z, r));
    phase[cell] = phase_from_output(genome.networks[kPhase].evaluate(x, y, z, r));
  }
  return Phenotype(dims, std::move(geometry), std::move(stiffness), std::move(alpha),
                   std::move(phase));
}

std::optional<Cppn> apply_mutation(const Cppn& net, MutationOp op, Rng& rng) {
  switch (op) {
    case MutationOp::AddNode:
      return add_node(net, rng);
    case MutationOp::AddLink:
      return add_link(net, rng);
    case MutationOp::RemoveLink:
      return remove_link(net, rng);
    case MutationOp::PerturbWeight:
      return perturb_weight(net, rng);
    case MutationOp::ChangeActivation:
      return change_activation(net, rng);
  }
  return std::nullopt;
}

Genome mutate(const Genome& parent, Rng& rng, GenomeId child_id) {
  std::array<bool, 4> selected{};
  bool any = false;
  for (auto& s : selected) {
    s = rng.bernoulli(0.5);
    any = any || s;
  }
  if (!any) selected[rng.index(selected.size())] = true;

  Genome child = parent;
  child.id = child_id;
  child.parent_id = parent.id;
  for (std::size_t c = 0; c < child.networks.size(); ++c) {
    if (!selected[c]) continue;
    for (int attempt = 0; attempt < kMaxMutationAttempts; ++attempt) {
      const MutationOp op = kMutationOps[rng.index(kMutationOps.size())];
      if (auto mutated = apply_mutation(child.networks[c], op, rng)) {
        child.networks[c] = std::move(*mutated);
        break;
      }
    }
  }
  return child;
}

}  // namespace voxelforge::genome
