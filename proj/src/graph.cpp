// SPDX-License-Identifier: Apache-2.0

#include "hge/graph.hpp"

#include <algorithm>
#include <functional>

#include "hge/kernels.hpp"

namespace hge {

std::uint32_t HeteroGraph::type_index(const std::string& name) const {
  auto t = find_type(name);
  if (!t) throw DataError("unknown node type: " + name);
  return *t;
}

std::optional<std::uint32_t> HeteroGraph::find_type(const std::string& name) const {
  for (std::uint32_t t = 0; t < type_names_.size(); ++t)
    if (type_names_[t] == name) return t;
  return std::nullopt;
}

std::uint64_t HeteroGraph::total_nodes() const {
  std::uint64_t n = 0;
  for (NodeIndex c : node_counts_) n += c;
  return n;
}

const Relation* HeteroGraph::find_relation(const RelationId& id) const {
  for (const Relation& r : relations_)
    if (r.id == id) return &r;
  return nullptr;
}

const Relation& HeteroGraph::relation(const RelationId& id) const {
  const Relation* r = find_relation(id);
  if (!r)
    throw DataError("unknown relation: " + type_name(id.src_type) + "|" + id.name + "|" +
                    type_name(id.dst_type));
  return *r;
}

const Relation& HeteroGraph::relation_by_name(const std::string& name) const {
  const Relation* found = nullptr;
  for (const Relation& r : relations_) {
    if (r.id.name != name) continue;
    if (found) throw DataError("relation name is ambiguous: " + name);
    found = &r;
  }
  if (!found) throw DataError("unknown relation: " + name);
  return *found;
}

std::string HeteroGraph::relation_key(const HeteroGraph& g, const RelationId& id) {
  return g.type_name(id.src_type) + "|" + id.name + "|" + g.type_name(id.dst_type);
}

std::string HeteroGraph::relation_key(std::size_t rel_index) const {
  return relation_key(*this, relations_[rel_index].id);
}

const MatF& HeteroGraph::features(std::uint32_t t) const {
  if (!features_[t]) throw DataError("node type has no features: " + type_name(t));
  return *features_[t];
}

const std::vector<std::int32_t>& HeteroGraph::dates(std::uint32_t t) const {
  if (!dates_[t]) throw DataError("node type has no dates: " + type_name(t));
  return *dates_[t];
}

std::span<const NodeIndex> HeteroGraph::neighbors(const RelationId& r, NodeIndex src) const {
  const Relation& rel = relation(r);
  if (src >= node_count(r.src_type))
    throw DataError("source index out of range for relation " + r.name);
  return rel.row(src);
}

std::uint64_t HeteroGraph::degree(const RelationId& r, NodeIndex src) const {
  return neighbors(r, src).size();
}

std::vector<EdgePair> HeteroGraph::edge_list(const RelationId& r) const {
  const Relation& rel = relation(r);
  std::vector<EdgePair> out;
  out.reserve(rel.targets.size());
  for (NodeIndex src = 0; src + 1 < rel.offsets.size(); ++src)
    for (NodeIndex dst : rel.row(src)) out.emplace_back(src, dst);
  return out;
}

bool HeteroGraph::has_edge(const Relation& rel, NodeIndex src, NodeIndex dst) const {
  auto row = rel.row(src);
  return std::binary_search(row.begin(), row.end(), dst);
}

// ---------------------------------------------------------------------------

std::uint32_t GraphBuilder::add_node_type(const std::string& name, NodeIndex count) {
  for (const auto& existing : type_names_)
    if (existing == name) throw DataError("duplicate node type: " + name);
  type_names_.push_back(name);
  node_counts_.push_back(count);
  features_.emplace_back();
  dates_.emplace_back();
  meta_.emplace_back();
  return static_cast<std::uint32_t>(type_names_.size() - 1);
}

std::uint32_t GraphBuilder::type_of(const std::string& name) const {
  for (std::uint32_t t = 0; t < type_names_.size(); ++t)
    if (type_names_[t] == name) return t;
  throw DataError("relation references undeclared node type: " + name);
}

void GraphBuilder::add_relation(const std::string& src_type, const std::string& name,
                                const std::string& dst_type, std::vector<EdgePair> edges) {
  RelationId id{type_of(src_type), name, type_of(dst_type)};
  for (const auto& p : pending_)
    if (p.id == id) throw DataError("duplicate relation: " + src_type + "|" + name + "|" + dst_type);
  pending_.push_back({std::move(id), std::move(edges)});
}

void GraphBuilder::set_features(const std::string& type, MatF features) {
  const std::uint32_t t = type_of(type);
  if (features.rows() != node_counts_[t])
    throw DataError("feature rows (" + std::to_string(features.rows()) + ") do not match node count (" +
                    std::to_string(node_counts_[t]) + ") for type " + type);
  features_[t] = std::move(features);
}

void GraphBuilder::set_dates(const std::string& type, std::vector<std::int32_t> days) {
  const std::uint32_t t = type_of(type);
  if (days.size() != node_counts_[t])
    throw DataError("date rows do not match node count for type " + type);
  dates_[t] = std::move(days);
}

void GraphBuilder::set_meta_column(const std::string& type, const std::string& column,
                                   std::vector<std::string> values) {
  const std::uint32_t t = type_of(type);
  if (values.size() != node_counts_[t])
    throw DataError("meta rows do not match node count for type " + type + ", column " + column);
  meta_[t][column] = std::move(values);
}

HeteroGraph GraphBuilder::build() {
  HeteroGraph g;
  g.type_names_ = type_names_;
  g.node_counts_ = node_counts_;
  g.features_ = features_;
  g.dates_ = dates_;
  g.meta_ = meta_;
  duplicates_.clear();
  for (auto& p : pending_) {
    const NodeIndex n_src = node_counts_[p.id.src_type];
    const NodeIndex n_dst = node_counts_[p.id.dst_type];
    for (const auto& [src, dst] : p.edges) {
      if (src >= n_src || dst >= n_dst)
        throw DataError("edge (" + std::to_string(src) + "," + std::to_string(dst) +
                        ") out of range in relation " + type_names_[p.id.src_type] + "|" +
                        p.id.name + "|" + type_names_[p.id.dst_type]);
    }
    std::sort(p.edges.begin(), p.edges.end());
    const std::size_t before = p.edges.size();
    p.edges.erase(std::unique(p.edges.begin(), p.edges.end()), p.edges.end());
    const std::string key =
        type_names_[p.id.src_type] + "|" + p.id.name + "|" + type_names_[p.id.dst_type];
    duplicates_[key] = before - p.edges.size();

    Relation rel;
    rel.id = p.id;
    rel.offsets.assign(n_src + 1, 0);
    rel.targets.reserve(p.edges.size());
    for (const auto& [src, dst] : p.edges) {
      rel.offsets[src + 1]++;
      rel.targets.push_back(dst);
    }
    for (std::size_t i = 1; i < rel.offsets.size(); ++i) rel.offsets[i] += rel.offsets[i - 1];
    g.relations_.push_back(std::move(rel));
  }
  return g;
}

// ---------------------------------------------------------------------------

InducedGraph induce_node_subset(const HeteroGraph& g,
                                const std::vector<std::vector<std::uint8_t>>& keep) {
  return induce_node_subset(g, keep, [](std::size_t, NodeIndex, NodeIndex) { return true; });
}

InducedGraph induce_node_subset(
    const HeteroGraph& g, const std::vector<std::vector<std::uint8_t>>& keep,
    const std::function<bool(std::size_t, NodeIndex, NodeIndex)>& keep_edge) {
  if (keep.size() != g.num_types()) throw DataError("induce: mask count does not match type count");
  IndexMaps maps;
  maps.old_to_new.resize(g.num_types());
  maps.new_to_old.resize(g.num_types());
  GraphBuilder b;
  for (std::uint32_t t = 0; t < g.num_types(); ++t) {
    if (keep[t].size() != g.node_count(t))
      throw DataError("induce: mask size does not match node count for type " + g.type_name(t));
    auto& fwd = maps.old_to_new[t];
    auto& rev = maps.new_to_old[t];
    fwd.assign(g.node_count(t), IndexMaps::npos);
    for (NodeIndex i = 0; i < g.node_count(t); ++i) {
      if (!keep[t][i]) continue;
      fwd[i] = static_cast<NodeIndex>(rev.size());
      rev.push_back(i);
    }
    b.add_node_type(g.type_name(t), static_cast<NodeIndex>(rev.size()));

    if (g.has_features(t)) {
      const MatF& src = g.features(t);
      MatF filtered(rev.size(), src.cols());
      for (std::size_t r = 0; r < rev.size(); ++r)
        std::copy(src.row(rev[r]), src.row(rev[r]) + src.cols(), filtered.row(r));
      b.set_features(g.type_name(t), std::move(filtered));
    }
    if (g.has_dates(t)) {
      const auto& src = g.dates(t);
      std::vector<std::int32_t> filtered(rev.size());
      for (std::size_t r = 0; r < rev.size(); ++r) filtered[r] = src[rev[r]];
      b.set_dates(g.type_name(t), std::move(filtered));
    }
    for (const auto& [column, values] : g.meta(t)) {
      std::vector<std::string> filtered(rev.size());
      for (std::size_t r = 0; r < rev.size(); ++r) filtered[r] = values[rev[r]];
      b.set_meta_column(g.type_name(t), column, std::move(filtered));
    }
  }

  for (std::size_t ri = 0; ri < g.relations().size(); ++ri) {
    const Relation& rel = g.relations()[ri];
    const auto& src_map = maps.old_to_new[rel.id.src_type];
    const auto& dst_map = maps.old_to_new[rel.id.dst_type];
    std::vector<EdgePair> edges;
    for (NodeIndex src = 0; src < g.node_count(rel.id.src_type); ++src) {
      if (src_map[src] == IndexMaps::npos) continue;
      for (NodeIndex dst : rel.row(src)) {
        if (dst_map[dst] == IndexMaps::npos) continue;
        if (!keep_edge(ri, src, dst)) continue;
        edges.emplace_back(src_map[src], dst_map[dst]);
      }
    }
    b.add_relation(g.type_name(rel.id.src_type), rel.id.name, g.type_name(rel.id.dst_type),
                   std::move(edges));
  }
  return {b.build(), std::move(maps)};
}

NormalizedAdjacency normalized_adjacency(const HeteroGraph& g, const Relation& rel) {
  NormalizedAdjacency a;
  a.n_rows = g.node_count(rel.id.src_type);
  a.n_cols = g.node_count(rel.id.dst_type);
  a.offsets = rel.offsets;
  a.cols = rel.targets;
  return a;
}

}  // namespace hge
