#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "graphhypo/graph.hpp"

namespace graphhypo {

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

inline bool parse_number(std::string_view s, double& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

// `key=value;key=value`; an empty cell means no attributes. Values typed by
// the schema kind of the attribute.
template <typename TypeSchema>
std::vector<std::pair<std::string, AttrValue>> parse_attr_cell(
    std::string_view cell, const TypeSchema& ts, const std::string& where) {
    std::vector<std::pair<std::string, AttrValue>> attrs;
    if (cell.empty()) return attrs;
    for (std::string_view item : split(cell, ';')) {
        if (item.empty()) continue;
        std::size_t eq = item.find('=');
        if (eq == std::string_view::npos)
            throw InputError(where + ": malformed attribute '" + std::string(item) + "'");
        std::string name(item.substr(0, eq));
        std::string_view value = item.substr(eq + 1);
        int idx = ts.attr_index(name);
        if (idx < 0)
            throw InputError(where + ": attribute '" + name + "' not declared in schema");
        if (ts.attrs[std::size_t(idx)].kind == AttrKind::Number) {
            double num;
            if (!parse_number(value, num))
                throw InputError(where + ": attribute '" + name + "' expects a number, got '" +
                                 std::string(value) + "'");
            attrs.emplace_back(std::move(name), AttrValue(num));
        } else {
            attrs.emplace_back(std::move(name), AttrValue(std::string(value)));
        }
    }
    return attrs;
}

inline AttrKind parse_kind(const std::string& k, const std::string& where) {
    if (k == "number") return AttrKind::Number;
    if (k == "string") return AttrKind::Category;
    throw InputError(where + ": attribute kind must be 'number' or 'string', got '" + k + "'");
}

}  // namespace detail

inline GraphSchema load_schema(const std::string& schema_path) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(detail::read_file(schema_path));
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError("schema parse error in " + schema_path + ": " + e.what());
    }
    GraphSchema schema;
    for (const auto& nt : j.at("node_types")) {
        NodeTypeSchema ts;
        ts.name = nt.at("name").get<std::string>();
        if (nt.contains("attrs"))
            for (const auto& [name, kind] : nt.at("attrs").items())
                ts.attrs.push_back({name, detail::parse_kind(kind.get<std::string>(),
                                                             "node type " + ts.name)});
        if (schema.node_type_id(ts.name) >= 0)
            throw InputError("duplicate node type: " + ts.name);
        schema.node_types.push_back(std::move(ts));
    }
    for (const auto& et : j.at("edge_types")) {
        EdgeTypeSchema ts;
        ts.name = et.at("name").get<std::string>();
        int src = schema.node_type_id(et.at("src").get<std::string>());
        int dst = schema.node_type_id(et.at("dst").get<std::string>());
        if (src < 0 || dst < 0)
            throw InputError("edge type " + ts.name + ": unknown src/dst node type");
        ts.src_type = TypeId(src);
        ts.dst_type = TypeId(dst);
        if (et.contains("attrs"))
            for (const auto& [name, kind] : et.at("attrs").items())
                ts.attrs.push_back({name, detail::parse_kind(kind.get<std::string>(),
                                                             "edge type " + ts.name)});
        if (schema.edge_type_id(ts.name) >= 0)
            throw InputError("duplicate edge type: " + ts.name);
        schema.edge_types.push_back(std::move(ts));
    }
    return schema;
}

// Nodes TSV: `id <TAB> type <TAB> key=value;...`
// Edges TSV: `src <TAB> dst <TAB> type <TAB> key=value;...`
// `#` lines and blank lines are skipped; row numbers in errors are 1-based.
inline AttributedGraph load_graph(const std::string& schema_path,
                                  const std::string& nodes_path,
                                  const std::string& edges_path,
                                  bool allow_isolated = false) {
    GraphSchema schema = load_schema(schema_path);
    GraphBuilder builder(std::move(schema));
    const GraphSchema& sch = builder.schema();

    std::ifstream nodes_in(nodes_path);
    if (!nodes_in) throw InputError("cannot open nodes file: " + nodes_path);
    std::string line;
    std::size_t row = 0;
    while (std::getline(nodes_in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto cells = detail::split(line, '\t');
        if (cells.size() < 2 || cells.size() > 3)
            throw InputError(nodes_path + " row " + std::to_string(row) +
                             ": expected `id<TAB>type<TAB>attrs`");
        int type = sch.node_type_id(cells[1]);
        if (type < 0)
            throw InputError(nodes_path + " row " + std::to_string(row) +
                             ": unknown node type '" + std::string(cells[1]) + "'");
        std::string where = nodes_path + " row " + std::to_string(row);
        auto attrs = detail::parse_attr_cell(cells.size() > 2 ? cells[2] : std::string_view{},
                                             sch.node_types[std::size_t(type)], where);
        try {
            builder.add_node(std::string(cells[0]), TypeId(type), attrs);
        } catch (const InputError& e) {
            throw InputError(where + ": " + e.what());
        }
    }

    std::ifstream edges_in(edges_path);
    if (!edges_in) throw InputError("cannot open edges file: " + edges_path);
    row = 0;
    while (std::getline(edges_in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto cells = detail::split(line, '\t');
        if (cells.size() < 3 || cells.size() > 4)
            throw InputError(edges_path + " row " + std::to_string(row) +
                             ": expected `src<TAB>dst<TAB>type<TAB>attrs`");
        std::string where = edges_path + " row " + std::to_string(row);
        int type = sch.edge_type_id(cells[2]);
        if (type < 0)
            throw InputError(where + ": unknown edge type '" + std::string(cells[2]) + "'");
        int src = builder.node_by_key(cells[0]);
        int dst = builder.node_by_key(cells[1]);
        if (src < 0)
            throw InputError(where + ": edge endpoint '" + std::string(cells[0]) +
                             "' not found (referential integrity)");
        if (dst < 0)
            throw InputError(where + ": edge endpoint '" + std::string(cells[1]) +
                             "' not found (referential integrity)");
        auto attrs = detail::parse_attr_cell(cells.size() > 3 ? cells[3] : std::string_view{},
                                             sch.edge_types[std::size_t(type)], where);
        try {
            builder.add_edge(NodeId(src), NodeId(dst), TypeId(type), attrs);
        } catch (const InputError& e) {
            throw InputError(where + ": " + e.what());
        }
    }

    return builder.build(allow_isolated);
}

inline void save_schema(const AttributedGraph& g, const std::string& path) {
    nlohmann::ordered_json j;
    j["node_types"] = nlohmann::ordered_json::array();
    for (const auto& nt : g.schema().node_types) {
        nlohmann::ordered_json t;
        t["name"] = nt.name;
        nlohmann::ordered_json attrs = nlohmann::ordered_json::object();
        for (const auto& a : nt.attrs)
            attrs[a.name] = a.kind == AttrKind::Number ? "number" : "string";
        t["attrs"] = std::move(attrs);
        j["node_types"].push_back(std::move(t));
    }
    j["edge_types"] = nlohmann::ordered_json::array();
    for (const auto& et : g.schema().edge_types) {
        nlohmann::ordered_json t;
        t["name"] = et.name;
        t["src"] = g.schema().node_types[et.src_type].name;
        t["dst"] = g.schema().node_types[et.dst_type].name;
        nlohmann::ordered_json attrs = nlohmann::ordered_json::object();
        for (const auto& a : et.attrs)
            attrs[a.name] = a.kind == AttrKind::Number ? "number" : "string";
        t["attrs"] = std::move(attrs);
        j["edge_types"].push_back(std::move(t));
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write: " + path);
    out << j.dump(2) << "\n";
}

namespace detail {
inline std::string format_attr_value(const AttrValue& v) {
    if (std::holds_alternative<double>(v)) {
        std::ostringstream ss;
        ss.precision(17);
        ss << std::get<double>(v);
        return ss.str();
    }
    return std::get<std::string>(v);
}

template <typename GetAttr>
std::string attr_cell(const std::vector<AttrSchema>& attrs, GetAttr&& get) {
    std::string cell;
    for (std::size_t a = 0; a < attrs.size(); ++a) {
        auto v = get(a);
        if (!v) continue;
        if (!cell.empty()) cell += ';';
        cell += attrs[a].name;
        cell += '=';
        cell += format_attr_value(*v);
    }
    return cell;
}
}  // namespace detail

inline void save_graph(const AttributedGraph& g, const std::string& schema_path,
                       const std::string& nodes_path, const std::string& edges_path) {
    save_schema(g, schema_path);
    std::ofstream nodes(nodes_path, std::ios::binary);
    if (!nodes) throw InputError("cannot write: " + nodes_path);
    for (NodeId v = 0; v < g.node_count(); ++v) {
        const auto& nt = g.schema().node_types[g.node_type(v)];
        nodes << g.node_key(v) << '\t' << nt.name << '\t'
              << detail::attr_cell(nt.attrs, [&](std::size_t a) { return g.node_attr(v, a); })
              << '\n';
    }
    std::ofstream edges(edges_path, std::ios::binary);
    if (!edges) throw InputError("cannot write: " + edges_path);
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        const auto& et = g.schema().edge_types[g.edge_type(e)];
        edges << g.node_key(g.edge_src(e)) << '\t' << g.node_key(g.edge_dst(e)) << '\t'
              << et.name << '\t'
              << detail::attr_cell(et.attrs, [&](std::size_t a) { return g.edge_attr(e, a); })
              << '\n';
    }
}

}  // namespace graphhypo
