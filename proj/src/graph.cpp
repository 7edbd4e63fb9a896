#include "qgraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <utility>

#include "qgraph/errors.hpp"
#include "qgraph/json_io.hpp"

namespace qgraph {

VertexCoupling VertexCoupling::delta(double gamma) {
    if (!std::isfinite(gamma)) throw InputError("delta coupling gamma must be finite");
    return VertexCoupling(Kind::delta, gamma);
}

std::string_view to_string(VertexCoupling::Kind kind) {
    switch (kind) {
        case VertexCoupling::Kind::kirchhoff: return "kirchhoff";
        case VertexCoupling::Kind::dirichlet: return "dirichlet";
        case VertexCoupling::Kind::delta: return "delta";
    }
    return "?";
}

std::optional<std::size_t> Graph::index_of(VertexId id) const {
    for (std::size_t i = 0; i < vertices.size(); ++i)
        if (vertices[i].id == id) return i;
    return std::nullopt;
}

const Vertex& Graph::vertex(VertexId id) const {
    const auto idx = index_of(id);
    if (!idx) throw OutOfRange("unknown vertex " + std::to_string(id));
    return vertices[*idx];
}

int Graph::valency(VertexId id) const {
    int n = 0;
    for (const auto& b : bonds) n += (b.from == id) + (b.to == id);
    for (const auto& l : leads) n += (l.vertex == id);
    return n;
}

std::vector<std::string> validate(const Graph& g) {
    std::vector<std::string> out;

    std::set<VertexId> ids;
    for (const auto& v : g.vertices) {
        if (!ids.insert(v.id).second) out.push_back("vertex " + std::to_string(v.id) + ": duplicate id");
        if (v.coupling.kind() == VertexCoupling::Kind::delta && !std::isfinite(v.coupling.gamma()))
            out.push_back("vertex " + std::to_string(v.id) + ": non-finite gamma");
    }

    std::set<std::pair<VertexId, VertexId>> pairs;
    for (std::size_t i = 0; i < g.bonds.size(); ++i) {
        const auto& b = g.bonds[i];
        const std::string tag = "bond " + std::to_string(i) + ": ";
        bool endpoints_ok = true;
        for (VertexId end : {b.from, b.to}) {
            if (!ids.count(end)) {
                out.push_back(tag + "unknown vertex " + std::to_string(end));
                endpoints_ok = false;
            }
        }
        if (b.from == b.to) {
            out.push_back(tag + "loops unsupported");
        } else if (endpoints_ok && !pairs.insert(std::minmax(b.from, b.to)).second) {
            out.push_back(tag + "multi-edges unsupported");
        }
        if (!(b.length > 0.0) || !std::isfinite(b.length)) out.push_back(tag + "non-positive length");
        if (!std::isfinite(b.potential)) out.push_back(tag + "non-finite potential");
    }

    for (std::size_t i = 0; i < g.leads.size(); ++i)
        if (!ids.count(g.leads[i].vertex))
            out.push_back("lead " + std::to_string(i) + ": unknown vertex " + std::to_string(g.leads[i].vertex));

    for (const auto& v : g.vertices)
        if (g.valency(v.id) < 1) out.push_back("vertex " + std::to_string(v.id) + ": isolated (valency 0)");

    return out;
}

double total_length(const Graph& g) {
    double sum = 0.0;
    for (const auto& b : g.bonds) sum += b.length;
    return sum;
}

namespace {

void check_keys(const Json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) throw ParseError(std::string(where) + ": expected an object");
    for (const auto& [key, _] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ParseError(std::string(where) + ": unknown key \"" + key + "\"");
    }
}

const Json& require(const Json& obj, std::string_view where, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(std::string(where) + ": missing field \"" + key + "\"");
    return *it;
}

double number(const Json& v, std::string_view where) {
    if (!v.is_number()) throw ParseError(std::string(where) + ": expected a number");
    return v.get<double>();
}

VertexId integer(const Json& v, std::string_view where) {
    if (!v.is_number_integer()) throw ParseError(std::string(where) + ": expected an integer id");
    return v.get<VertexId>();
}

const Json& array(const Json& obj, const char* key) {
    const auto& v = require(obj, "document", key);
    if (!v.is_array()) throw ParseError(std::string("\"") + key + "\": expected an array");
    return v;
}

VertexCoupling parse_coupling(const Json& c, const std::string& where) {
    check_keys(c, where, {"kind", "gamma"});
    const auto& kind = require(c, where, "kind");
    if (!kind.is_string()) throw ParseError(where + ".kind: expected a string");
    const auto name = kind.get<std::string>();
    const bool has_gamma = c.contains("gamma");
    if (name == "delta") {
        if (!has_gamma) throw ParseError(where + ": missing field \"gamma\" (required for delta)");
        const double gamma = number(c["gamma"], where + ".gamma");
        if (!std::isfinite(gamma)) throw ParseError(where + ".gamma: must be finite");
        return VertexCoupling::delta(gamma);
    }
    if (has_gamma) throw ParseError(where + ": \"gamma\" only allowed for kind delta");
    if (name == "kirchhoff") return VertexCoupling::kirchhoff();
    if (name == "dirichlet") return VertexCoupling::dirichlet();
    throw ParseError(where + ": unknown coupling kind \"" + name + "\"");
}

}  // namespace

Graph parse_graph(std::string_view text) {
    Json doc;
    try {
        doc = Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("syntax error: " + std::string(e.what()), e.byte);
    }

    check_keys(doc, "document", {"vertices", "bonds", "leads"});
    Graph g;

    for (std::size_t i = 0; const auto& v : array(doc, "vertices")) {
        const std::string where = "vertices[" + std::to_string(i++) + "]";
        check_keys(v, where, {"id", "coupling"});
        const VertexId id = integer(require(v, where, "id"), where + ".id");
        g.vertices.push_back({id, parse_coupling(require(v, where, "coupling"), where + ".coupling")});
    }
    for (std::size_t i = 0; const auto& b : array(doc, "bonds")) {
        const std::string where = "bonds[" + std::to_string(i++) + "]";
        check_keys(b, where, {"from", "to", "length", "potential"});
        Bond bond{integer(require(b, where, "from"), where + ".from"),
                  integer(require(b, where, "to"), where + ".to"),
                  number(require(b, where, "length"), where + ".length")};
        if (b.contains("potential")) bond.potential = number(b["potential"], where + ".potential");
        g.bonds.push_back(bond);
    }
    // "leads" may be omitted for compact graphs.
    if (doc.contains("leads")) {
        for (std::size_t i = 0; const auto& l : array(doc, "leads")) {
            const std::string where = "leads[" + std::to_string(i++) + "]";
            check_keys(l, where, {"vertex"});
            g.leads.push_back({integer(require(l, where, "vertex"), where + ".vertex")});
        }
    }

    if (auto diags = validate(g); !diags.empty()) throw ValidationError(std::move(diags));
    return g;
}

std::string emit_graph(const Graph& g) {
    Json doc;
    doc["vertices"] = Json::array();
    for (const auto& v : g.vertices) {
        Json c;
        c["kind"] = std::string(to_string(v.coupling.kind()));
        if (v.coupling.kind() == VertexCoupling::Kind::delta) c["gamma"] = v.coupling.gamma();
        doc["vertices"].push_back({{"id", v.id}, {"coupling", c}});
    }
    doc["bonds"] = Json::array();
    for (const auto& b : g.bonds) {
        Json j{{"from", b.from}, {"to", b.to}, {"length", b.length}};
        if (b.potential != 0.0) j["potential"] = b.potential;
        doc["bonds"].push_back(j);
    }
    doc["leads"] = Json::array();
    for (const auto& l : g.leads) doc["leads"].push_back({{"vertex", l.vertex}});
    return dump_json(doc);
}

Graph load_graph(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read graph file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_graph(buf.str());
}

Graph scaled(const Graph& g, double factor) {
    if (!(factor > 0.0) || !std::isfinite(factor)) throw InputError("scale factor must be positive");
    Graph out = g;
    for (auto& b : out.bonds) b.length *= factor;
    return out;
}

void require_zero_potential(const Graph& g) {
    for (std::size_t i = 0; i < g.bonds.size(); ++i)
        if (g.bonds[i].potential != 0.0)
            throw UnsupportedTopology("bond " + std::to_string(i) + ": nonzero magnetic potential is not supported");
}

}  // namespace qgraph
