// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hge/matrix.hpp"

namespace hge {

using NodeIndex = std::uint32_t;
using EdgePair = std::pair<NodeIndex, NodeIndex>;

// Directed edge type between two node types. The (src_type, name, dst_type)
// triple is unique within a graph.
struct RelationId {
  std::uint32_t src_type = 0;
  std::string name;
  std::uint32_t dst_type = 0;

  bool operator==(const RelationId&) const = default;
};

// CSR adjacency for one relation: row = source node, sorted unique
// destination indices per row.
struct Relation {
  RelationId id;
  std::vector<std::uint64_t> offsets;  // node_count(src_type) + 1
  std::vector<NodeIndex> targets;

  std::uint64_t edge_count() const { return targets.size(); }
  std::span<const NodeIndex> row(NodeIndex src) const {
    return {targets.data() + offsets[src], targets.data() + offsets[src + 1]};
  }
};

// Per-node-type table of categorical string columns. Empty string = missing
// value (no enrichment edge is emitted for it).
using MetaTable = std::map<std::string, std::vector<std::string>>;

// Immutable typed graph: node sets per type, directed relations with CSR
// adjacency, optional per-type dense features, optional per-type dates
// (days since 1970-01-01) and categorical meta columns. Sealed at build
// time; every transform returns a new graph.
class HeteroGraph {
public:
  std::size_t num_types() const { return type_names_.size(); }
  const std::vector<std::string>& type_names() const { return type_names_; }
  const std::string& type_name(std::uint32_t t) const { return type_names_[t]; }
  std::uint32_t type_index(const std::string& name) const;        // throws if unknown
  std::optional<std::uint32_t> find_type(const std::string& name) const;
  NodeIndex node_count(std::uint32_t t) const { return node_counts_[t]; }
  std::uint64_t total_nodes() const;

  const std::vector<Relation>& relations() const { return relations_; }
  const Relation& relation(const RelationId& id) const;           // throws if unknown
  const Relation* find_relation(const RelationId& id) const;
  // Unique relation lookup by bare name; throws if absent or ambiguous.
  const Relation& relation_by_name(const std::string& name) const;
  static std::string relation_key(const HeteroGraph& g, const RelationId& id);
  std::string relation_key(std::size_t rel_index) const;

  bool has_features(std::uint32_t t) const { return features_[t].has_value(); }
  const MatF& features(std::uint32_t t) const;
  bool has_dates(std::uint32_t t) const { return dates_[t].has_value(); }
  const std::vector<std::int32_t>& dates(std::uint32_t t) const;
  const MetaTable& meta(std::uint32_t t) const { return meta_[t]; }

  std::span<const NodeIndex> neighbors(const RelationId& r, NodeIndex src) const;
  std::uint64_t degree(const RelationId& r, NodeIndex src) const;

  // Reconstructs the sorted (src, dst) edge list of one relation.
  std::vector<EdgePair> edge_list(const RelationId& r) const;

  // True if (src, dst) is an edge of the relation (binary search in the row).
  bool has_edge(const Relation& rel, NodeIndex src, NodeIndex dst) const;

private:
  friend class GraphBuilder;
  std::vector<std::string> type_names_;
  std::vector<NodeIndex> node_counts_;
  std::vector<Relation> relations_;
  std::vector<std::optional<MatF>> features_;
  std::vector<std::optional<std::vector<std::int32_t>>> dates_;
  std::vector<MetaTable> meta_;
};

// Accumulates node types, edges and per-type payloads, then seals a graph.
// Duplicate edges are removed at build time; the duplicate count per
// relation is available after build().
class GraphBuilder {
public:
  std::uint32_t add_node_type(const std::string& name, NodeIndex count);
  void add_relation(const std::string& src_type, const std::string& name,
                    const std::string& dst_type, std::vector<EdgePair> edges);
  void set_features(const std::string& type, MatF features);
  void set_dates(const std::string& type, std::vector<std::int32_t> days);
  void set_meta_column(const std::string& type, const std::string& column,
                       std::vector<std::string> values);

  HeteroGraph build();
  const std::map<std::string, std::uint64_t>& duplicates_removed() const { return duplicates_; }

private:
  struct PendingRelation {
    RelationId id;
    std::vector<EdgePair> edges;
  };
  std::uint32_t type_of(const std::string& name) const;
  std::vector<std::string> type_names_;
  std::vector<NodeIndex> node_counts_;
  std::vector<PendingRelation> pending_;
  std::vector<std::optional<MatF>> features_;
  std::vector<std::optional<std::vector<std::int32_t>>> dates_;
  std::vector<MetaTable> meta_;
  std::map<std::string, std::uint64_t> duplicates_;
};

// Old-index -> new-index maps produced by node subset induction.
struct IndexMaps {
  // Per type: old index -> new index, or npos when dropped.
  static constexpr NodeIndex npos = UINT32_MAX;
  std::vector<std::vector<NodeIndex>> old_to_new;
  std::vector<std::vector<NodeIndex>> new_to_old;
};

// Keeps the masked nodes of every type; an edge survives only if both
// endpoints are kept. Features, dates and meta rows are filtered in step.
struct InducedGraph {
  HeteroGraph graph;
  IndexMaps maps;
};
InducedGraph induce_node_subset(const HeteroGraph& g,
                                const std::vector<std::vector<std::uint8_t>>& keep);

// Same, with a per-edge predicate on (relation index, old src, old dst)
// applied on top of the node masks.
InducedGraph induce_node_subset(
    const HeteroGraph& g, const std::vector<std::vector<std::uint8_t>>& keep,
    const std::function<bool(std::size_t, NodeIndex, NodeIndex)>& keep_edge);

// Row-normalized adjacency view over one relation of a graph.
struct NormalizedAdjacency;
NormalizedAdjacency normalized_adjacency(const HeteroGraph& g, const Relation& rel);

}  // namespace hge
