#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "bdpc/core.hpp"

namespace bdpc {

struct LinkModel {
  double pdr = 1.0;
  double rssiDbm = -10.0;
};

struct InvalidTopologyConfig : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Root plus a chain of fully-linked adjacent groups. Group 1 links to the
// root; group k links to every node of groups k-1 and k+1; no intra-group or
// skip links.
class Topology {
 public:
  Topology() = default;

  std::size_t numNodes() const { return neighbors_.size(); }
  const std::vector<NodeId>& neighborsOf(NodeId id) const { return neighbors_[id]; }
  bool linked(NodeId a, NodeId b) const;
  const LinkModel& link(NodeId a, NodeId b) const;
  LinkModel& linkMutable(NodeId a, NodeId b);

  // 0 for the root, 1..groups otherwise.
  std::uint32_t groupOf(NodeId id) const { return group_[id]; }
  std::uint32_t groups() const { return groupCount_; }
  const std::vector<NodeId>& nodesInGroup(std::uint32_t g) const { return byGroup_[g]; }

  static Topology build(const SimConfig& config);

 private:
  std::vector<std::vector<NodeId>> neighbors_;
  std::vector<std::uint32_t> group_;
  std::vector<std::vector<NodeId>> byGroup_;
  std::map<std::pair<NodeId, NodeId>, LinkModel> links_;
  std::uint32_t groupCount_ = 0;

  void addLink(NodeId a, NodeId b, const LinkModel& model);
};

inline Topology buildTopology(const SimConfig& config) { return Topology::build(config); }

}  // namespace bdpc
