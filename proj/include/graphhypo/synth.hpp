#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "graphhypo/graph.hpp"
#include "graphhypo/rng.hpp"

namespace graphhypo {

// Attribute generator for one synthetic attribute.
struct AttrGen {
    std::string name;
    AttrKind kind = AttrKind::Number;
    enum class Dist { Normal, Uniform, Constant, Categorical, ExactFraction } dist =
        Dist::Uniform;
    double mean = 0.0, std_dev = 1.0;   // normal
    double lo = 0.0, hi = 1.0;          // uniform
    double constant = 0.0;              // constant
    std::vector<std::string> values;    // categorical / exact_fraction
    std::vector<double> probs;          // categorical
    double fraction = 0.0;              // exact_fraction: values[0] on round(f*n) nodes
};

struct SynthNodeType {
    std::string name;
    std::uint64_t count = 0;
    std::vector<AttrGen> attrs;
};

struct SynthEdgeType {
    std::string name;
    std::string src, dst;
    std::uint64_t count = 0;
    enum class DegreeDist { Uniform, PowerLaw } degree_dist = DegreeDist::Uniform;
    double alpha = 2.5;
    std::vector<AttrGen> attrs;
};

struct SynthConfig {
    std::uint64_t seed = 1;
    std::vector<SynthNodeType> node_types;
    std::vector<SynthEdgeType> edge_types;
};

namespace detail {

inline AttrGen parse_attr_gen(const nlohmann::ordered_json& j) {
    AttrGen a;
    a.name = j.at("name").get<std::string>();
    std::string dist = j.value("dist", std::string("uniform"));
    if (dist == "normal") {
        a.dist = AttrGen::Dist::Normal;
        a.kind = AttrKind::Number;
        a.mean = j.at("mean").get<double>();
        a.std_dev = j.at("std").get<double>();
    } else if (dist == "uniform") {
        a.dist = AttrGen::Dist::Uniform;
        a.kind = AttrKind::Number;
        a.lo = j.at("lo").get<double>();
        a.hi = j.at("hi").get<double>();
    } else if (dist == "constant") {
        a.dist = AttrGen::Dist::Constant;
        a.kind = AttrKind::Number;
        a.constant = j.at("value").get<double>();
    } else if (dist == "categorical") {
        a.dist = AttrGen::Dist::Categorical;
        a.kind = AttrKind::Category;
        a.values = j.at("values").get<std::vector<std::string>>();
        a.probs = j.at("probs").get<std::vector<double>>();
        if (a.values.size() != a.probs.size() || a.values.empty())
            throw InputError("categorical attr " + a.name + ": values/probs mismatch");
    } else if (dist == "exact_fraction") {
        a.dist = AttrGen::Dist::ExactFraction;
        a.kind = AttrKind::Category;
        a.values = j.at("values").get<std::vector<std::string>>();
        a.fraction = j.at("fraction").get<double>();
        if (a.values.size() != 2)
            throw InputError("exact_fraction attr " + a.name + " needs exactly 2 values");
        if (!(a.fraction > 0.0 && a.fraction <= 1.0))
            throw InputError("exact_fraction attr " + a.name + ": fraction must be in (0,1]");
    } else {
        throw InputError("unknown attribute dist: " + dist);
    }
    return a;
}

}  // namespace detail

inline SynthConfig parse_synth_config(const nlohmann::ordered_json& j) {
    SynthConfig cfg;
    cfg.seed = j.value("seed", std::uint64_t(1));
    for (const auto& nt : j.at("node_types")) {
        SynthNodeType t;
        t.name = nt.at("name").get<std::string>();
        t.count = nt.at("count").get<std::uint64_t>();
        if (nt.contains("attrs"))
            for (const auto& a : nt.at("attrs")) t.attrs.push_back(detail::parse_attr_gen(a));
        cfg.node_types.push_back(std::move(t));
    }
    for (const auto& et : j.at("edge_types")) {
        SynthEdgeType t;
        t.name = et.at("name").get<std::string>();
        t.src = et.at("src").get<std::string>();
        t.dst = et.at("dst").get<std::string>();
        t.count = et.at("count").get<std::uint64_t>();
        std::string dd = et.value("degree_dist", std::string("uniform"));
        if (dd == "uniform") t.degree_dist = SynthEdgeType::DegreeDist::Uniform;
        else if (dd == "powerlaw") t.degree_dist = SynthEdgeType::DegreeDist::PowerLaw;
        else throw InputError("unknown degree_dist: " + dd);
        t.alpha = et.value("alpha", 2.5);
        if (et.contains("attrs"))
            for (const auto& a : et.at("attrs")) t.attrs.push_back(detail::parse_attr_gen(a));
        cfg.edge_types.push_back(std::move(t));
    }
    // Sugar: a top-level relevant block plants an exact-count tag attribute.
    if (j.contains("relevant")) {
        const auto& r = j.at("relevant");
        std::string type = r.at("type").get<std::string>();
        AttrGen a;
        a.name = r.at("attr").get<std::string>();
        a.kind = AttrKind::Category;
        a.dist = AttrGen::Dist::ExactFraction;
        a.values = {r.value("value", std::string("yes")), r.value("other", std::string("no"))};
        a.fraction = r.at("fraction").get<double>();
        bool found = false;
        for (auto& nt : cfg.node_types)
            if (nt.name == type) {
                nt.attrs.push_back(std::move(a));
                found = true;
                break;
            }
        if (!found) throw InputError("relevant block names unknown node type: " + type);
    }
    return cfg;
}

namespace detail {

// Cumulative-weight endpoint picker with O(log n) draws.
class EndpointPicker {
public:
    EndpointPicker(std::uint64_t count, SynthEdgeType::DegreeDist dist, double alpha,
                   Rng& rng) {
        if (dist == SynthEdgeType::DegreeDist::Uniform) return;  // plain below()
        // Power-law weights over a random permutation of the type's nodes,
        // so node ids are uncorrelated with degree.
        std::vector<std::uint32_t> perm(count);
        std::iota(perm.begin(), perm.end(), 0u);
        for (std::uint64_t i = 0; i + 1 < count; ++i)
            std::swap(perm[i], perm[i + rng.below(count - i)]);
        double exponent = 1.0 / (alpha - 1.0);
        cum_.resize(count);
        std::vector<double> w(count);
        for (std::uint64_t rank = 0; rank < count; ++rank)
            w[perm[rank]] = std::pow(double(rank + 1), -exponent);
        double acc = 0.0;
        for (std::uint64_t i = 0; i < count; ++i) {
            acc += w[i];
            cum_[i] = acc;
        }
        total_ = acc;
        n_ = count;
    }

    std::uint32_t draw(Rng& rng, std::uint64_t count) const {
        if (cum_.empty()) return std::uint32_t(rng.below(count));
        double x = rng.unit() * total_;
        auto it = std::upper_bound(cum_.begin(), cum_.end(), x);
        std::size_t i = std::size_t(it - cum_.begin());
        return std::uint32_t(std::min<std::size_t>(i, n_ - 1));
    }

private:
    std::vector<double> cum_;
    double total_ = 0.0;
    std::size_t n_ = 0;
};

inline AttrValue generate_attr_value(const AttrGen& a, Rng& rng) {
    switch (a.dist) {
        case AttrGen::Dist::Normal: return AttrValue(a.mean + a.std_dev * rng.normal());
        case AttrGen::Dist::Uniform: return AttrValue(rng.uniform(a.lo, a.hi));
        case AttrGen::Dist::Constant: return AttrValue(a.constant);
        case AttrGen::Dist::Categorical: {
            std::size_t i = rng.weighted(a.probs);
            return AttrValue(a.values[i]);
        }
        case AttrGen::Dist::ExactFraction:
            return AttrValue(a.values[1]);  // planted rows patched separately
    }
    return AttrValue(0.0);
}

}  // namespace detail

// Deterministic synthetic attributed graph. Node counts are exact;
// exact_fraction attributes are planted on exactly round(f*count) nodes; the
// graph is simple (no self-loops or parallel edges); nodes left isolated by
// the random pairing get one extra fix-up edge each.
inline AttributedGraph generate_graph(const SynthConfig& cfg) {
    Rng rng(cfg.seed);
    GraphSchema schema;
    for (const auto& nt : cfg.node_types) {
        NodeTypeSchema ts;
        ts.name = nt.name;
        for (const auto& a : nt.attrs) ts.attrs.push_back({a.name, a.kind});
        schema.node_types.push_back(std::move(ts));
    }
    for (const auto& et : cfg.edge_types) {
        EdgeTypeSchema ts;
        ts.name = et.name;
        int src = schema.node_type_id(et.src);
        int dst = schema.node_type_id(et.dst);
        if (src < 0 || dst < 0)
            throw InputError("edge type " + et.name + " references unknown node type");
        ts.src_type = TypeId(src);
        ts.dst_type = TypeId(dst);
        for (const auto& a : et.attrs) ts.attrs.push_back({a.name, a.kind});
        schema.edge_types.push_back(std::move(ts));
    }

    GraphBuilder builder(schema);

    // Nodes: one column of values per attribute, generated in declaration
    // order; exact-fraction tags pick their planted rows up front.
    std::vector<NodeId> type_base(cfg.node_types.size(), 0);
    for (std::size_t t = 0; t < cfg.node_types.size(); ++t) {
        const SynthNodeType& nt = cfg.node_types[t];
        std::vector<std::vector<AttrValue>> columns(nt.attrs.size());
        for (std::size_t a = 0; a < nt.attrs.size(); ++a) {
            const AttrGen& gen = nt.attrs[a];
            columns[a].reserve(nt.count);
            for (std::uint64_t i = 0; i < nt.count; ++i)
                columns[a].push_back(detail::generate_attr_value(gen, rng));
            if (gen.dist == AttrGen::Dist::ExactFraction) {
                std::uint64_t planted =
                    std::uint64_t(std::llround(gen.fraction * double(nt.count)));
                planted = std::max<std::uint64_t>(planted, 1);
                for (std::uint32_t row : detail::sample_indices(nt.count, planted, rng))
                    columns[a][row] = AttrValue(gen.values[0]);
            }
        }
        type_base[t] = NodeId(builder.node_count());
        std::vector<std::pair<std::string, AttrValue>> attrs;
        for (std::uint64_t i = 0; i < nt.count; ++i) {
            attrs.clear();
            for (std::size_t a = 0; a < nt.attrs.size(); ++a)
                attrs.emplace_back(nt.attrs[a].name, columns[a][i]);
            builder.add_node(nt.name + std::to_string(i), TypeId(t), attrs);
        }
    }

    // Edges: rejection sampling keeps the graph simple; dense requests fall
    // back to enumerating all pairs.
    std::vector<std::uint64_t> degree(builder.node_count(), 0);
    auto add_edge = [&](NodeId s, NodeId d, TypeId t, const SynthEdgeType& et) {
        std::vector<std::pair<std::string, AttrValue>> attrs;
        for (const AttrGen& a : et.attrs)
            attrs.emplace_back(a.name, detail::generate_attr_value(a, rng));
        builder.add_edge(s, d, t, attrs);
        ++degree[s];
        ++degree[d];
    };

    for (std::size_t t = 0; t < cfg.edge_types.size(); ++t) {
        const SynthEdgeType& et = cfg.edge_types[t];
        std::size_t src_type = std::size_t(schema.edge_types[t].src_type);
        std::size_t dst_type = std::size_t(schema.edge_types[t].dst_type);
        std::uint64_t n_src = cfg.node_types[src_type].count;
        std::uint64_t n_dst = cfg.node_types[dst_type].count;
        bool same = src_type == dst_type;
        std::uint64_t capacity = n_src * n_dst - (same ? n_src : 0);
        if (et.count > capacity)
            throw InputError("edge type " + et.name + ": " + std::to_string(et.count) +
                             " edges exceed simple-graph capacity " +
                             std::to_string(capacity));

        std::unordered_set<std::uint64_t> used;
        used.reserve(et.count * 2);
        auto key = [&](NodeId a, NodeId b) {
            return std::uint64_t(a) * std::uint64_t(n_dst) + std::uint64_t(b);
        };
        if (et.count * 2 > capacity) {
            // Dense: enumerate pairs and take a shuffled prefix.
            std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
            pairs.reserve(capacity);
            for (std::uint32_t i = 0; i < n_src; ++i)
                for (std::uint32_t j = 0; j < n_dst; ++j)
                    if (!(same && i == j)) pairs.emplace_back(i, j);
            for (std::uint64_t i = 0; i < et.count; ++i) {
                std::swap(pairs[i], pairs[i + rng.below(pairs.size() - i)]);
                add_edge(type_base[src_type] + pairs[i].first,
                         type_base[dst_type] + pairs[i].second, TypeId(t), et);
            }
            continue;
        }
        detail::EndpointPicker src_pick(n_src, et.degree_dist, et.alpha, rng);
        detail::EndpointPicker dst_pick(n_dst, et.degree_dist, et.alpha, rng);
        std::uint64_t made = 0;
        while (made < et.count) {
            std::uint32_t i = src_pick.draw(rng, n_src);
            std::uint32_t j = dst_pick.draw(rng, n_dst);
            if (same && i == j) continue;
            if (!used.insert(key(i, j)).second) continue;
            add_edge(type_base[src_type] + i, type_base[dst_type] + j, TypeId(t), et);
            ++made;
        }
    }

    // Fix-up: every node needs at least one incident edge.
    for (NodeId v = 0; v < builder.node_count(); ++v) {
        if (degree[v] != 0) continue;
        TypeId vt = TypeId(0);
        for (std::size_t t = 0; t < cfg.node_types.size(); ++t)
            if (type_base[t] <= v &&
                (t + 1 == cfg.node_types.size() || v < type_base[t + 1]))
                vt = TypeId(t);
        bool fixed = false;
        for (std::size_t t = 0; t < cfg.edge_types.size() && !fixed; ++t) {
            const EdgeTypeSchema& ts = schema.edge_types[t];
            const SynthEdgeType& et = cfg.edge_types[t];
            if (ts.src_type != vt && ts.dst_type != vt) continue;
            bool as_src = ts.src_type == vt;
            std::size_t other_type = std::size_t(as_src ? ts.dst_type : ts.src_type);
            std::uint64_t n_other = cfg.node_types[other_type].count;
            for (int tries = 0; tries < 64 && !fixed; ++tries) {
                NodeId partner = type_base[other_type] + NodeId(rng.below(n_other));
                if (partner == v) continue;
                if (as_src)
                    add_edge(v, partner, TypeId(t), et);
                else
                    add_edge(partner, v, TypeId(t), et);
                fixed = true;
            }
        }
        if (!fixed)
            throw InputError("node type " + schema.node_types[vt].name +
                             " participates in no edge type; config is infeasible");
    }

    return builder.build();
}

inline AttributedGraph generate_graph(const nlohmann::ordered_json& config_json) {
    return generate_graph(parse_synth_config(config_json));
}

}  // namespace graphhypo
