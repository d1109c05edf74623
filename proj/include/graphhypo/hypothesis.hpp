#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "graphhypo/errors.hpp"
#include "graphhypo/graph.hpp"

namespace graphhypo {

enum class Cmp { Eq, Ne, Gt, Lt, Ge, Le };
enum class PredOp { Eq, Ne, Gt, Lt };
enum class Agg { Avg, Min, Max };

inline std::string_view cmp_text(Cmp c) {
    switch (c) {
        case Cmp::Eq: return "=";
        case Cmp::Ne: return "<>";
        case Cmp::Gt: return ">";
        case Cmp::Lt: return "<";
        case Cmp::Ge: return ">=";
        case Cmp::Le: return "<=";
    }
    return "?";
}
inline std::string_view pred_text(PredOp o) {
    switch (o) {
        case PredOp::Eq: return "=";
        case PredOp::Ne: return "<>";
        case PredOp::Gt: return ">";
        case PredOp::Lt: return "<";
    }
    return "?";
}
inline std::string_view agg_text(Agg a) {
    switch (a) {
        case Agg::Avg: return "avg";
        case Agg::Min: return "min";
        case Agg::Max: return "max";
    }
    return "?";
}

// One attribute constraint of a node clause (element of M_{t_i}).
struct Modifier {
    std::string attr;
    Cmp cmp = Cmp::Eq;
    // Literal as written; bind() resolves it against the schema.
    std::variant<double, std::string> value;

    // Bound by bind():
    int attr_idx = -1;
    std::int32_t cat_code = -2;  // category literals; -2 = label absent from data

    bool operator==(const Modifier& o) const {
        return attr == o.attr && cmp == o.cmp && value == o.value;
    }
};

struct NodeClause {
    std::string type_name;
    std::vector<Modifier> modifiers;
    int type_id = -1;  // bound

    bool operator==(const NodeClause& o) const {
        return type_name == o.type_name && modifiers == o.modifiers;
    }
};

struct EdgeClause {
    std::string type_name;
    bool forward = true;  // false = the pattern walks the inverse relation r^-1
    int type_id = -1;     // bound

    bool operator==(const EdgeClause& o) const {
        return type_name == o.type_name && forward == o.forward;
    }
};

struct PathPattern {
    std::vector<NodeClause> steps;  // length l+1
    std::vector<EdgeClause> links;  // length l

    std::size_t length() const { return links.size(); }

    bool operator==(const PathPattern& o) const {
        return steps == o.steps && links == o.links;
    }
};

// Target expression f_P over step/edge attribute references.
struct Expr {
    enum class Kind { Const, NodeAttr, EdgeAttr, Add, Sub, Mul, Div, Mean };
    Kind kind = Kind::Const;
    double constant = 0.0;
    std::size_t ref_index = 0;  // 0-based step or link index
    std::string attr;
    int attr_idx = -1;  // bound
    std::vector<Expr> children;

    bool operator==(const Expr& o) const {
        return kind == o.kind && constant == o.constant && ref_index == o.ref_index &&
               attr == o.attr && children == o.children;
    }
};

struct Hypothesis {
    PathPattern pattern;
    Expr target;
    Agg agg = Agg::Avg;
    PredOp op = PredOp::Gt;
    double constant = 0.0;
    bool bound = false;

    std::size_t length() const { return pattern.length(); }

    bool operator==(const Hypothesis& o) const {
        return pattern == o.pattern && target == o.target && agg == o.agg && op == o.op &&
               constant == o.constant;
    }
};

// ---------------------------------------------------------------------------
// Schema binding
// ---------------------------------------------------------------------------

namespace detail {

inline void bind_clause(NodeClause& c, const GraphSchema& schema, const AttributedGraph* g) {
    int tid = schema.node_type_id(c.type_name);
    if (tid < 0) throw InputError("unknown node type in hypothesis: " + c.type_name);
    c.type_id = tid;
    const NodeTypeSchema& ts = schema.node_types[std::size_t(tid)];
    for (Modifier& m : c.modifiers) {
        m.attr_idx = ts.attr_index(m.attr);
        if (m.attr_idx < 0)
            throw InputError("unknown attribute '" + m.attr + "' on node type " + c.type_name);
        AttrKind kind = ts.attrs[std::size_t(m.attr_idx)].kind;
        if (kind == AttrKind::Category) {
            if (m.cmp != Cmp::Eq && m.cmp != Cmp::Ne)
                throw InputError("string attribute '" + m.attr +
                                 "' supports only = and <> comparisons");
            if (!std::holds_alternative<std::string>(m.value))
                throw InputError("attribute '" + m.attr + "' is a string attribute");
            if (g != nullptr)
                m.cat_code = g->node_column(TypeId(tid), std::size_t(m.attr_idx))
                                 .label_code(std::get<std::string>(m.value));
        } else {
            if (!std::holds_alternative<double>(m.value))
                throw InputError("attribute '" + m.attr + "' is numeric; modifier value '" +
                                 std::get<std::string>(m.value) + "' is not a number");
        }
    }
}

inline void bind_expr(Expr& e, const Hypothesis& h, const GraphSchema& schema) {
    switch (e.kind) {
        case Expr::Kind::NodeAttr: {
            if (e.ref_index >= h.pattern.steps.size())
                throw InputError("target references step " + std::to_string(e.ref_index + 1) +
                                 " but the pattern has " +
                                 std::to_string(h.pattern.steps.size()) + " steps");
            const NodeClause& c = h.pattern.steps[e.ref_index];
            const NodeTypeSchema& ts = schema.node_types[std::size_t(c.type_id)];
            e.attr_idx = ts.attr_index(e.attr);
            if (e.attr_idx < 0)
                throw InputError("unknown attribute '" + e.attr + "' on node type " +
                                 c.type_name);
            if (ts.attrs[std::size_t(e.attr_idx)].kind != AttrKind::Number)
                throw InputError("target attribute '" + e.attr + "' is not numeric");
            break;
        }
        case Expr::Kind::EdgeAttr: {
            if (e.ref_index >= h.pattern.links.size())
                throw InputError("target references edge " + std::to_string(e.ref_index + 1) +
                                 " but the pattern has " +
                                 std::to_string(h.pattern.links.size()) + " links");
            const EdgeClause& c = h.pattern.links[e.ref_index];
            const EdgeTypeSchema& ts = schema.edge_types[std::size_t(c.type_id)];
            e.attr_idx = ts.attr_index(e.attr);
            if (e.attr_idx < 0)
                throw InputError("unknown attribute '" + e.attr + "' on edge type " +
                                 c.type_name);
            if (ts.attrs[std::size_t(e.attr_idx)].kind != AttrKind::Number)
                throw InputError("target attribute '" + e.attr + "' is not numeric");
            break;
        }
        default:
            for (Expr& child : e.children) bind_expr(child, h, schema);
    }
}

}  // namespace detail

// Resolve type/attribute names against a schema. Passing the graph as well
// lets string modifier literals resolve to category codes for fast matching.
inline void bind_hypothesis(Hypothesis& h, const GraphSchema& schema,
                            const AttributedGraph* g = nullptr) {
    if (h.pattern.steps.empty()) throw InputError("hypothesis pattern is empty");
    if (h.pattern.steps.size() != h.pattern.links.size() + 1)
        throw InputError("pattern step/link counts are inconsistent");
    for (NodeClause& c : h.pattern.steps) detail::bind_clause(c, schema, g);
    for (std::size_t i = 0; i < h.pattern.links.size(); ++i) {
        EdgeClause& c = h.pattern.links[i];
        int tid = schema.edge_type_id(c.type_name);
        if (tid < 0) throw InputError("unknown edge type in hypothesis: " + c.type_name);
        c.type_id = tid;
        const EdgeTypeSchema& ts = schema.edge_types[std::size_t(tid)];
        TypeId from = TypeId(h.pattern.steps[i].type_id);
        TypeId to = TypeId(h.pattern.steps[i + 1].type_id);
        TypeId want_src = c.forward ? from : to;
        TypeId want_dst = c.forward ? to : from;
        if (ts.src_type != want_src || ts.dst_type != want_dst)
            throw InputError("edge type " + c.type_name + " does not connect " +
                             schema.node_types[want_src].name + " -> " +
                             schema.node_types[want_dst].name);
    }
    detail::bind_expr(h.target, h, schema);
    h.bound = true;
}

// ---------------------------------------------------------------------------
// Matching and evaluation
// ---------------------------------------------------------------------------

namespace detail {
inline bool compare_num(double a, Cmp cmp, double b) {
    switch (cmp) {
        case Cmp::Eq: return a == b;
        case Cmp::Ne: return a != b;
        case Cmp::Gt: return a > b;
        case Cmp::Lt: return a < b;
        case Cmp::Ge: return a >= b;
        case Cmp::Le: return a <= b;
    }
    return false;
}
}  // namespace detail

// True iff phi(v) equals the clause type and every modifier holds. A missing
// attribute is a mismatch, not an error.
inline bool node_matches(const AttributedGraph& g, NodeId v, const NodeClause& clause) {
    if (g.node_type(v) != TypeId(clause.type_id)) return false;
    std::uint32_t row = g.node_row(v);
    for (const Modifier& m : clause.modifiers) {
        const AttrColumn& col = g.node_column(g.node_type(v), std::size_t(m.attr_idx));
        if (!col.present[row]) return false;
        if (col.kind == AttrKind::Category) {
            bool eq = col.cat[row] == m.cat_code;
            if (m.cmp == Cmp::Eq ? !eq : eq) return false;
        } else {
            if (!detail::compare_num(col.num[row], m.cmp, std::get<double>(m.value)))
                return false;
        }
    }
    return true;
}

// True iff the stored edge can realize link `i` of the pattern when walked in
// `traverse_forward` orientation relative to the pattern (step i -> step i+1).
inline bool edge_matches_link(const AttributedGraph& g, EdgeId e, const EdgeClause& link) {
    return g.edge_type(e) == TypeId(link.type_id);
}

// A full path instance: node ids for each step, edge ids for each link.
struct PathInstance {
    std::span<const NodeId> nodes;
    std::span<const EdgeId> edges;
};

inline double eval_target(const AttributedGraph& g, const Expr& e, const PathInstance& inst) {
    switch (e.kind) {
        case Expr::Kind::Const:
            return e.constant;
        case Expr::Kind::NodeAttr: {
            auto v = g.node_num(inst.nodes[e.ref_index], std::size_t(e.attr_idx));
            if (!v)
                throw EvalError("missing numeric attribute '" + e.attr + "' on node " +
                                g.node_key(inst.nodes[e.ref_index]));
            return *v;
        }
        case Expr::Kind::EdgeAttr: {
            auto v = g.edge_num(inst.edges[e.ref_index], std::size_t(e.attr_idx));
            if (!v)
                throw EvalError("missing numeric attribute '" + e.attr + "' on edge " +
                                std::to_string(inst.edges[e.ref_index]));
            return *v;
        }
        case Expr::Kind::Add:
            return eval_target(g, e.children[0], inst) + eval_target(g, e.children[1], inst);
        case Expr::Kind::Sub:
            return eval_target(g, e.children[0], inst) - eval_target(g, e.children[1], inst);
        case Expr::Kind::Mul:
            return eval_target(g, e.children[0], inst) * eval_target(g, e.children[1], inst);
        case Expr::Kind::Div: {
            double denom = eval_target(g, e.children[1], inst);
            if (denom == 0.0) throw EvalError("division by zero in target expression");
            return eval_target(g, e.children[0], inst) / denom;
        }
        case Expr::Kind::Mean:
            return 0.5 * (eval_target(g, e.children[0], inst) +
                          eval_target(g, e.children[1], inst));
    }
    throw EvalError("corrupt expression");
}

inline double eval_target(const AttributedGraph& g, const Hypothesis& h,
                          const PathInstance& inst) {
    return eval_target(g, h.target, inst);
}

inline bool predicate_holds(double estimate, PredOp op, double c) {
    switch (op) {
        case PredOp::Eq: return estimate == c;
        case PredOp::Ne: return estimate != c;
        case PredOp::Gt: return estimate > c;
        case PredOp::Lt: return estimate < c;
    }
    return false;
}

}  // namespace graphhypo
