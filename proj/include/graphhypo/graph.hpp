#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "graphhypo/errors.hpp"
#include "graphhypo/sample.hpp"

namespace graphhypo {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;
using TypeId = std::uint32_t;

constexpr std::uint32_t kInvalidId = 0xFFFFFFFFu;

enum class AttrKind { Number, Category };

// Loader/builder-facing attribute value.
using AttrValue = std::variant<double, std::string>;

struct AttrSchema {
    std::string name;
    AttrKind kind;
};

struct NodeTypeSchema {
    std::string name;
    std::vector<AttrSchema> attrs;

    int attr_index(std::string_view attr) const {
        for (std::size_t i = 0; i < attrs.size(); ++i)
            if (attrs[i].name == attr) return int(i);
        return -1;
    }
};

struct EdgeTypeSchema {
    std::string name;
    TypeId src_type;
    TypeId dst_type;
    std::vector<AttrSchema> attrs;

    int attr_index(std::string_view attr) const {
        for (std::size_t i = 0; i < attrs.size(); ++i)
            if (attrs[i].name == attr) return int(i);
        return -1;
    }
};

struct GraphSchema {
    std::vector<NodeTypeSchema> node_types;
    std::vector<EdgeTypeSchema> edge_types;

    int node_type_id(std::string_view name) const {
        for (std::size_t i = 0; i < node_types.size(); ++i)
            if (node_types[i].name == name) return int(i);
        return -1;
    }
    int edge_type_id(std::string_view name) const {
        for (std::size_t i = 0; i < edge_types.size(); ++i)
            if (edge_types[i].name == name) return int(i);
        return -1;
    }
};

// One attribute column for all nodes (or edges) of a single type, indexed by
// the element's per-type row. Numbers and category codes live in separate
// arrays; `present` marks rows that carry the attribute at all.
struct AttrColumn {
    AttrKind kind = AttrKind::Number;
    std::vector<double> num;
    std::vector<std::int32_t> cat;  // -1 = missing
    std::vector<std::uint8_t> present;
    std::vector<std::string> labels;
    std::unordered_map<std::string, std::int32_t> label_ids;

    // Code for an existing label, or -2 if the label was never seen.
    std::int32_t label_code(std::string_view label) const {
        auto it = label_ids.find(std::string(label));
        return it == label_ids.end() ? -2 : it->second;
    }

    std::int32_t intern(std::string_view label) {
        auto it = label_ids.find(std::string(label));
        if (it != label_ids.end()) return it->second;
        std::int32_t code = std::int32_t(labels.size());
        labels.emplace_back(label);
        label_ids.emplace(labels.back(), code);
        return code;
    }

    void resize(std::size_t rows) {
        present.resize(rows, 0);
        if (kind == AttrKind::Number)
            num.resize(rows, 0.0);
        else
            cat.resize(rows, -1);
    }
};

// One adjacency entry; `forward` is true when the stored edge leaves this
// node (src == this), false for the inverse direction r^-1.
struct AdjEntry {
    NodeId neighbor;
    EdgeId edge;
    bool forward;
};

class GraphBuilder;

// Immutable typed multigraph with columnar attributes and a CSR adjacency
// covering both edge directions. Safe to share across threads after build.
class AttributedGraph {
public:
    const GraphSchema& schema() const { return schema_; }

    std::size_t node_count() const { return node_type_.size(); }
    std::size_t edge_count() const { return edge_src_.size(); }

    TypeId node_type(NodeId v) const { return node_type_[v]; }
    std::uint32_t node_row(NodeId v) const { return node_row_[v]; }
    const std::string& node_key(NodeId v) const { return node_key_[v]; }
    std::size_t nodes_of_type(TypeId t) const { return node_rows_per_type_[t]; }

    NodeId edge_src(EdgeId e) const { return edge_src_[e]; }
    NodeId edge_dst(EdgeId e) const { return edge_dst_[e]; }
    TypeId edge_type(EdgeId e) const { return edge_type_[e]; }
    std::uint32_t edge_row(EdgeId e) const { return edge_row_[e]; }

    // Undirected degree: incident edges counting both directions.
    std::size_t degree(NodeId v) const {
        if (v >= node_count()) throw InputError("node id out of range: " + std::to_string(v));
        return std::size_t(adj_off_[v + 1] - adj_off_[v]);
    }

    std::span<const AdjEntry> neighbors(NodeId v) const {
        return {adj_.data() + adj_off_[v], adj_.data() + adj_off_[v + 1]};
    }

    const AttrColumn& node_column(TypeId type, std::size_t attr_idx) const {
        return node_cols_[type][attr_idx];
    }
    const AttrColumn& edge_column(TypeId type, std::size_t attr_idx) const {
        return edge_cols_[type][attr_idx];
    }

    std::optional<double> node_num(NodeId v, std::size_t attr_idx) const {
        const AttrColumn& col = node_cols_[node_type_[v]][attr_idx];
        std::uint32_t row = node_row_[v];
        if (!col.present[row]) return std::nullopt;
        return col.num[row];
    }
    std::int32_t node_cat(NodeId v, std::size_t attr_idx) const {
        const AttrColumn& col = node_cols_[node_type_[v]][attr_idx];
        return col.cat[node_row_[v]];
    }
    std::optional<double> edge_num(EdgeId e, std::size_t attr_idx) const {
        const AttrColumn& col = edge_cols_[edge_type_[e]][attr_idx];
        std::uint32_t row = edge_row_[e];
        if (!col.present[row]) return std::nullopt;
        return col.num[row];
    }
    std::int32_t edge_cat(EdgeId e, std::size_t attr_idx) const {
        const AttrColumn& col = edge_cols_[edge_type_[e]][attr_idx];
        return col.cat[edge_row_[e]];
    }

    // Loader-facing generic accessors (round-trip serialization).
    std::optional<AttrValue> node_attr(NodeId v, std::size_t attr_idx) const {
        const AttrColumn& col = node_cols_[node_type_[v]][attr_idx];
        return column_value(col, node_row_[v]);
    }
    std::optional<AttrValue> edge_attr(EdgeId e, std::size_t attr_idx) const {
        const AttrColumn& col = edge_cols_[edge_type_[e]][attr_idx];
        return column_value(col, edge_row_[e]);
    }

    int node_by_key(std::string_view key) const {
        auto it = key_to_node_.find(std::string(key));
        return it == key_to_node_.end() ? -1 : int(it->second);
    }

private:
    friend class GraphBuilder;

    static std::optional<AttrValue> column_value(const AttrColumn& col, std::uint32_t row) {
        if (!col.present[row]) return std::nullopt;
        if (col.kind == AttrKind::Number) return AttrValue(col.num[row]);
        return AttrValue(col.labels[std::size_t(col.cat[row])]);
    }

    GraphSchema schema_;
    std::vector<TypeId> node_type_;
    std::vector<std::uint32_t> node_row_;
    std::vector<std::string> node_key_;
    std::unordered_map<std::string, NodeId> key_to_node_;
    std::vector<std::size_t> node_rows_per_type_;

    std::vector<NodeId> edge_src_, edge_dst_;
    std::vector<TypeId> edge_type_;
    std::vector<std::uint32_t> edge_row_;
    std::vector<std::size_t> edge_rows_per_type_;

    std::vector<std::vector<AttrColumn>> node_cols_;  // [type][attr]
    std::vector<std::vector<AttrColumn>> edge_cols_;

    std::vector<std::uint64_t> adj_off_;
    std::vector<AdjEntry> adj_;
};

// Assembles a graph from rows (file loader and synthetic generator both feed
// through here), then validates invariants and freezes the CSR adjacency.
class GraphBuilder {
public:
    explicit GraphBuilder(GraphSchema schema) {
        g_.schema_ = std::move(schema);
        g_.node_cols_.resize(g_.schema_.node_types.size());
        g_.edge_cols_.resize(g_.schema_.edge_types.size());
        g_.node_rows_per_type_.assign(g_.schema_.node_types.size(), 0);
        g_.edge_rows_per_type_.assign(g_.schema_.edge_types.size(), 0);
        for (std::size_t t = 0; t < g_.schema_.node_types.size(); ++t) {
            g_.node_cols_[t].resize(g_.schema_.node_types[t].attrs.size());
            for (std::size_t a = 0; a < g_.schema_.node_types[t].attrs.size(); ++a)
                g_.node_cols_[t][a].kind = g_.schema_.node_types[t].attrs[a].kind;
        }
        for (std::size_t t = 0; t < g_.schema_.edge_types.size(); ++t) {
            g_.edge_cols_[t].resize(g_.schema_.edge_types[t].attrs.size());
            for (std::size_t a = 0; a < g_.schema_.edge_types[t].attrs.size(); ++a)
                g_.edge_cols_[t][a].kind = g_.schema_.edge_types[t].attrs[a].kind;
        }
    }

    NodeId add_node(std::string key, TypeId type,
                    std::span<const std::pair<std::string, AttrValue>> attrs) {
        if (type >= g_.schema_.node_types.size())
            throw InputError("unknown node type id");
        NodeId id = NodeId(g_.node_type_.size());
        if (!g_.key_to_node_.emplace(key, id).second)
            throw InputError("duplicate node key: " + key);
        std::uint32_t row = std::uint32_t(g_.node_rows_per_type_[type]++);
        g_.node_type_.push_back(type);
        g_.node_row_.push_back(row);
        g_.node_key_.push_back(std::move(key));
        fill_attrs(g_.node_cols_[type], g_.schema_.node_types[type].attrs, row, attrs,
                   "node " + g_.node_key_.back());
        return id;
    }

    EdgeId add_edge(NodeId src, NodeId dst, TypeId type,
                    std::span<const std::pair<std::string, AttrValue>> attrs) {
        if (type >= g_.schema_.edge_types.size())
            throw InputError("unknown edge type id");
        if (src >= g_.node_type_.size() || dst >= g_.node_type_.size())
            throw InputError("edge endpoint not found");
        const EdgeTypeSchema& ts = g_.schema_.edge_types[type];
        if (g_.node_type_[src] != ts.src_type || g_.node_type_[dst] != ts.dst_type)
            throw InputError("edge type '" + ts.name + "' does not connect (" +
                             g_.schema_.node_types[g_.node_type_[src]].name + ", " +
                             g_.schema_.node_types[g_.node_type_[dst]].name + ")");
        EdgeId id = EdgeId(g_.edge_src_.size());
        std::uint32_t row = std::uint32_t(g_.edge_rows_per_type_[type]++);
        g_.edge_src_.push_back(src);
        g_.edge_dst_.push_back(dst);
        g_.edge_type_.push_back(type);
        g_.edge_row_.push_back(row);
        fill_attrs(g_.edge_cols_[type], ts.attrs, row, attrs, "edge " + std::to_string(id));
        return id;
    }

    std::size_t node_count() const { return g_.node_type_.size(); }
    const GraphSchema& schema() const { return g_.schema_; }
    int node_by_key(std::string_view key) const { return g_.node_by_key(key); }

    AttributedGraph build(bool allow_isolated = false) {
        build_adjacency();
        if (!allow_isolated) {
            for (NodeId v = 0; v < g_.node_count(); ++v)
                if (g_.degree(v) == 0)
                    throw InputError("isolated node '" + g_.node_key_[v] +
                                     "' (every node needs at least one edge; "
                                     "pass allow-isolated to keep it)");
        }
        return std::move(g_);
    }

private:
    void fill_attrs(std::vector<AttrColumn>& cols, const std::vector<AttrSchema>& schema,
                    std::uint32_t row,
                    std::span<const std::pair<std::string, AttrValue>> attrs,
                    const std::string& what) {
        for (auto& col : cols) col.resize(row + 1);
        for (const auto& [name, value] : attrs) {
            int idx = -1;
            for (std::size_t i = 0; i < schema.size(); ++i)
                if (schema[i].name == name) { idx = int(i); break; }
            if (idx < 0)
                throw InputError(what + ": attribute '" + name + "' not declared in schema");
            AttrColumn& col = cols[std::size_t(idx)];
            if (col.kind == AttrKind::Number) {
                if (!std::holds_alternative<double>(value))
                    throw InputError(what + ": attribute '" + name + "' must be a number");
                col.num[row] = std::get<double>(value);
            } else {
                if (!std::holds_alternative<std::string>(value))
                    throw InputError(what + ": attribute '" + name + "' must be a string");
                col.cat[row] = col.intern(std::get<std::string>(value));
            }
            col.present[row] = 1;
        }
    }

    void build_adjacency() {
        std::size_t n = g_.node_type_.size();
        // Make sure every column spans all rows even when trailing elements
        // carried no attributes.
        for (std::size_t t = 0; t < g_.node_cols_.size(); ++t)
            for (auto& col : g_.node_cols_[t]) col.resize(g_.node_rows_per_type_[t]);
        for (std::size_t t = 0; t < g_.edge_cols_.size(); ++t)
            for (auto& col : g_.edge_cols_[t]) col.resize(g_.edge_rows_per_type_[t]);

        g_.adj_off_.assign(n + 1, 0);
        for (std::size_t e = 0; e < g_.edge_src_.size(); ++e) {
            ++g_.adj_off_[g_.edge_src_[e] + 1];
            ++g_.adj_off_[g_.edge_dst_[e] + 1];
        }
        for (std::size_t v = 0; v < n; ++v) g_.adj_off_[v + 1] += g_.adj_off_[v];
        g_.adj_.resize(g_.adj_off_[n]);
        std::vector<std::uint64_t> cursor(g_.adj_off_.begin(), g_.adj_off_.end() - 1);
        for (EdgeId e = 0; e < g_.edge_src_.size(); ++e) {
            NodeId s = g_.edge_src_[e], d = g_.edge_dst_[e];
            g_.adj_[cursor[s]++] = AdjEntry{d, e, true};
            g_.adj_[cursor[d]++] = AdjEntry{s, e, false};
        }
        for (std::size_t v = 0; v < n; ++v) {
            std::sort(g_.adj_.begin() + std::ptrdiff_t(g_.adj_off_[v]),
                      g_.adj_.begin() + std::ptrdiff_t(g_.adj_off_[v + 1]),
                      [](const AdjEntry& a, const AdjEntry& b) {
                          if (a.neighbor != b.neighbor) return a.neighbor < b.neighbor;
                          if (a.edge != b.edge) return a.edge < b.edge;
                          return a.forward && !b.forward;
                      });
        }
    }

    AttributedGraph g_;
};

// Read-only restriction of a graph to a node/edge subset. A default view
// exposes the whole graph; estimators and the oracle share this interface.
class GraphView {
public:
    explicit GraphView(const AttributedGraph& g) : g_(&g) {}
    GraphView(const AttributedGraph& g, std::vector<std::uint8_t> node_mask,
              std::vector<std::uint8_t> edge_mask)
        : g_(&g), node_mask_(std::move(node_mask)), edge_mask_(std::move(edge_mask)) {}

    static GraphView of_sample(const AttributedGraph& g, const SampledSubgraph& s) {
        std::vector<std::uint8_t> nm(g.node_count(), 0), em(g.edge_count(), 0);
        for (NodeId v : s.nodes) nm[v] = 1;
        for (EdgeId e : s.edges) em[e] = 1;
        return GraphView(g, std::move(nm), std::move(em));
    }

    const AttributedGraph& graph() const { return *g_; }
    bool full() const { return node_mask_.empty(); }
    bool has_node(NodeId v) const { return node_mask_.empty() || node_mask_[v]; }
    bool has_edge(EdgeId e) const { return edge_mask_.empty() || edge_mask_[e]; }

private:
    const AttributedGraph* g_;
    std::vector<std::uint8_t> node_mask_;  // empty = all
    std::vector<std::uint8_t> edge_mask_;
};

// Node-induced subgraph: all edges of g with both endpoints in node_set.
inline SampledSubgraph induced_subgraph(const AttributedGraph& g,
                                        std::span<const NodeId> node_set) {
    SampledSubgraph s;
    s.nodes.assign(node_set.begin(), node_set.end());
    std::sort(s.nodes.begin(), s.nodes.end());
    s.nodes.erase(std::unique(s.nodes.begin(), s.nodes.end()), s.nodes.end());
    std::vector<std::uint8_t> mask(g.node_count(), 0);
    for (NodeId v : s.nodes) {
        if (v >= g.node_count()) throw InputError("induced_subgraph: node id out of range");
        mask[v] = 1;
    }
    for (NodeId v : s.nodes)
        for (const AdjEntry& a : g.neighbors(v))
            if (a.forward && mask[a.neighbor]) s.edges.push_back(a.edge);
    std::sort(s.edges.begin(), s.edges.end());
    s.edges.erase(std::unique(s.edges.begin(), s.edges.end()), s.edges.end());
    return s;
}

}  // namespace graphhypo
