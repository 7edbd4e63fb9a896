#ifndef QGRAPH_GRAPH_HPP
#define QGRAPH_GRAPH_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qgraph {

using VertexId = long long;

/// Matching condition at a vertex: continuity of the wavefunction plus
///   sum of outgoing derivatives = gamma * (vertex value).
/// Kirchhoff is gamma = 0. Dirichlet is the gamma -> infinity limit and is
/// kept symbolic so no formula ever sees an infinite coupling.
class VertexCoupling {
public:
    enum class Kind { kirchhoff, dirichlet, delta };

    static VertexCoupling kirchhoff() { return VertexCoupling(Kind::kirchhoff, 0.0); }
    static VertexCoupling dirichlet() { return VertexCoupling(Kind::dirichlet, 0.0); }
    /// Throws InputError unless gamma is finite.
    static VertexCoupling delta(double gamma);

    Kind kind() const noexcept { return kind_; }
    /// Coupling strength entering the vertex formulas; 0 for Kirchhoff.
    /// Meaningless for Dirichlet.
    double gamma() const noexcept { return gamma_; }
    bool is_dirichlet() const noexcept { return kind_ == Kind::dirichlet; }
    /// True when the vertex scattering matrix does not depend on k.
    bool is_scale_free() const noexcept { return kind_ != Kind::delta || gamma_ == 0.0; }

    friend bool operator==(const VertexCoupling&, const VertexCoupling&) = default;

private:
    VertexCoupling(Kind kind, double gamma) : kind_(kind), gamma_(gamma) {}

    Kind kind_;
    double gamma_;
};

std::string_view to_string(VertexCoupling::Kind kind);

struct Vertex {
    VertexId id;
    VertexCoupling coupling;

    friend bool operator==(const Vertex&, const Vertex&) = default;
};

struct Bond {
    VertexId from;
    VertexId to;
    double length;
    /// Magnetic vector potential A_b. Stored, but every computation requires 0.
    double potential = 0.0;

    friend bool operator==(const Bond&, const Bond&) = default;
};

/// Semi-infinite lead attached at a vertex.
struct Lead {
    VertexId vertex;

    friend bool operator==(const Lead&, const Lead&) = default;
};

/// Metric graph description. A plain value: build it, validate it, share it.
struct Graph {
    std::vector<Vertex> vertices;
    std::vector<Bond> bonds;
    std::vector<Lead> leads;

    std::optional<std::size_t> index_of(VertexId id) const;
    const Vertex& vertex(VertexId id) const;
    /// Bonds plus leads meeting the vertex. A bond counts once per endpoint.
    int valency(VertexId id) const;
    bool is_compact() const noexcept { return leads.empty(); }

    friend bool operator==(const Graph&, const Graph&) = default;
};

/// One diagnostic per violated invariant; empty iff the graph is valid.
std::vector<std::string> validate(const Graph& g);

/// Sum of all bond lengths.
double total_length(const Graph& g);

/// Parses and validates a JSON graph document. Unknown keys are rejected.
/// Throws ParseError (syntax, schema) or ValidationError (invariants).
Graph parse_graph(std::string_view text);

/// Serializes to the same JSON schema parse_graph reads.
std::string emit_graph(const Graph& g);

/// Reads a file and parses it. Throws InputError when the file is unreadable.
Graph load_graph(const std::string& path);

/// Copy with every bond length multiplied by factor (> 0).
Graph scaled(const Graph& g, double factor);

/// Throws UnsupportedTopology when any bond carries A_b != 0.
void require_zero_potential(const Graph& g);

}  // namespace qgraph

#endif  // QGRAPH_GRAPH_HPP
