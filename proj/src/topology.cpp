#include "bdpc/topology.hpp"

#include <algorithm>

namespace bdpc {

void Topology::addLink(NodeId a, NodeId b, const LinkModel& model) {
  neighbors_[a].push_back(b);
  neighbors_[b].push_back(a);
  links_[{std::min(a, b), std::max(a, b)}] = model;
}

bool Topology::linked(NodeId a, NodeId b) const {
  return links_.count({std::min(a, b), std::max(a, b)}) != 0;
}

const LinkModel& Topology::link(NodeId a, NodeId b) const {
  return links_.at({std::min(a, b), std::max(a, b)});
}

LinkModel& Topology::linkMutable(NodeId a, NodeId b) {
  return links_.at({std::min(a, b), std::max(a, b)});
}

Topology Topology::build(const SimConfig& config) {
  if (config.groups < 1 || config.groupSize < 1) {
    throw InvalidTopologyConfig("topology needs at least one group of at least one node");
  }
  Topology t;
  std::size_t n = 1 + static_cast<std::size_t>(config.groups) * config.groupSize;
  t.neighbors_.resize(n);
  t.group_.resize(n, 0);
  t.byGroup_.resize(config.groups + 1);
  t.groupCount_ = config.groups;
  t.byGroup_[0].push_back(kRootId);

  LinkModel model{config.pdrLink, config.rssiLinkDbm};
  for (std::uint32_t g = 1; g <= config.groups; ++g) {
    for (std::uint32_t j = 0; j < config.groupSize; ++j) {
      NodeId id = static_cast<NodeId>(1 + (g - 1) * config.groupSize + j);
      t.group_[id] = g;
      t.byGroup_[g].push_back(id);
      for (NodeId prev : t.byGroup_[g - 1]) {
        t.addLink(prev, id, model);
      }
    }
  }
  for (auto& adj : t.neighbors_) std::sort(adj.begin(), adj.end());
  return t;
}

}  // namespace bdpc
