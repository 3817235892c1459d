#include "voxelforge/cppn.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>

#include "voxelforge/rng.hpp"

namespace voxelforge::genome {

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::Sine:
      return "sine";
    case Activation::Sigmoid:
      return "sigmoid";
    case Activation::Gaussian:
      return "gaussian";
    case Activation::Abs:
      return "abs";
    case Activation::Linear:
      return "linear";
  }
  return "linear";
}

Activation parse_activation(std::string_view name) {
  for (Activation a : kActivations) {
    if (to_string(a) == name) return a;
  }
  throw std::invalid_argument("unknown activation '" + std::string(name) + "'");
}

double activate(Activation a, double x) {
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
  return x;
}

Cppn::Cppn() : nodes_{{kOutputId, Activation::Linear}} { compile(); }

Cppn::Cppn(std::vector<CppnNode> nodes, std::vector<CppnLink> links)
    : nodes_(std::move(nodes)), links_(std::move(links)) {
  compile();
}

Cppn Cppn::random(Rng& rng) {
  std::vector<CppnNode> nodes{{kOutputId, kActivations[rng.index(kActivations.size())]}};
  std::vector<CppnLink> links;
  links.reserve(kInputCount);
  for (int input = 0; input < kInputCount; ++input) {
    links.push_back({input, kOutputId, rng.normal(0.0, 1.0), true});
  }
  return Cppn(std::move(nodes), std::move(links));
}

int Cppn::max_node_id() const {
  int best = kOutputId;
  for (const auto& n : nodes_) best = std::max(best, n.id);
  return best;
}

void Cppn::compile() {
  std::unordered_map<int, std::size_t> slot_of;
  for (int i = 0; i < kInputCount; ++i) slot_of[i] = static_cast<std::size_t>(i);

  bool has_output = false;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const int id = nodes_[i].id;
    if (id < kInputCount) {
      throw InvalidNetwork("node id " + std::to_string(id) + " collides with an input");
    }
    if (!slot_of.emplace(id, kInputCount + i).second) {
      throw InvalidNetwork("duplicate node id " + std::to_string(id));
    }
    has_output = has_output || id == kOutputId;
  }
  if (!has_output) throw InvalidNetwork("network has no output node");
  slot_count_ = kInputCount + nodes_.size();
  output_slot_ = slot_of.at(kOutputId);

  std::set<std::pair<int, int>> seen;
  std::vector<std::vector<std::size_t>> in_links(slot_count_);
  std::vector<std::vector<std::size_t>> successors(slot_count_);
  std::vector<std::size_t> indegree(slot_count_, 0);
  for (std::size_t li = 0; li < links_.size(); ++li) {
    const auto& link = links_[li];
    const auto src = slot_of.find(link.source);
    const auto dst = slot_of.find(link.target);
    if (src == slot_of.end() || dst == slot_of.end()) {
      throw InvalidNetwork("link " + std::to_string(link.source) + "->" +
                           std::to_string(link.target) + " references an unknown node");
    }
    if (link.target < kInputCount) throw InvalidNetwork("link targets an input node");
    if (link.source == kOutputId) throw InvalidNetwork("link leaves the output node");
    if (!std::isfinite(link.weight)) throw InvalidNetwork("non-finite link weight");
    if (!seen.emplace(link.source, link.target).second) {
      throw InvalidNetwork("duplicate link " + std::to_string(link.source) + "->" +
                           std::to_string(link.target));
    }
    in_links[dst->second].push_back(li);
    successors[src->second].push_back(dst->second);
    ++indegree[dst->second];
  }

  // Kahn's algorithm over all links, disabled ones included, so that the
  // acyclicity invariant does not depend on the enabled flags. Ties are
  // taken in slot order for a reproducible schedule.
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t s = 0; s < slot_count_; ++s) {
    if (indegree[s] == 0) ready.push(s);
  }
  order_.clear();
  incoming_.clear();
  std::size_t visited = 0;
  while (!ready.empty()) {
    const std::size_t s = ready.top();
    ready.pop();
    ++visited;
    if (s >= static_cast<std::size_t>(kInputCount)) {
      Step step{s, nodes_[s - kInputCount].activation, incoming_.size(), 0};
      for (std::size_t li : in_links[s]) {
        if (!links_[li].enabled) continue;
        incoming_.push_back({slot_of.at(links_[li].source), links_[li].weight});
        ++step.incoming_count;
      }
      order_.push_back(step);
    }
    for (std::size_t next : successors[s]) {
      if (--indegree[next] == 0) ready.push(next);
    }
  }
  if (visited != slot_count_) throw InvalidNetwork("network contains a cycle");
}

double Cppn::evaluate(double x, double y, double z, double r) const {
  // Small networks; a stack buffer avoids an allocation per query.
  constexpr std::size_t kStackSlots = 64;
  double stack_values[kStackSlots];
  std::vector<double> heap_values;
  double* values = stack_values;
  if (slot_count_ > kStackSlots) {
    heap_values.resize(slot_count_);
    values = heap_values.data();
  }
  values[0] = x;
  values[1] = y;
  values[2] = z;
  values[3] = r;
  values[4] = 1.0;
  for (const Step& step : order_) {
    double sum = 0.0;
    for (std::size_t i = 0; i < step.incoming_count; ++i) {
      const Incoming& in = incoming_[step.first_incoming + i];
      sum += in.weight * values[in.source_slot];
    }
    values[step.slot] = activate(step.activation, sum);
  }
  const double out = values[output_slot_];
  if (std::isnan(out)) return 0.0;
  return std::clamp(out, -1.0, 1.0);
}

bool creates_cycle(const Cppn& net, int source, int target) {
  if (source == target) return true;
  // A cycle appears iff source is already reachable from target.
  std::unordered_map<int, std::vector<int>> successors;
  for (const auto& link : net.links()) successors[link.source].push_back(link.target);
  std::vector<int> stack{target};
  std::set<int> visited{target};
  while (!stack.empty()) {
    const int node = stack.back();
    stack.pop_back();
    if (node == source) return true;
    const auto it = successors.find(node);
    if (it == successors.end()) continue;
    for (int next : it->second) {
      if (visited.insert(next).second) stack.push_back(next);
    }
  }
  return false;
}

}  // namespace voxelforge::genome
