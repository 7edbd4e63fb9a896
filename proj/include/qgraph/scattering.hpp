#ifndef QGRAPH_SCATTERING_HPP
#define QGRAPH_SCATTERING_HPP

#include <complex>

#include <Eigen/Dense>

#include "qgraph/graph.hpp"

namespace qgraph {

using cplx = std::complex<double>;

/// Reflection and transmission amplitudes of a single N-valent vertex.
struct RTPair {
    cplx r;
    cplx t;
    int valency;
    VertexCoupling coupling;
    cplx k;
};

/// Vertex scattering matrix: R on the diagonal, T elsewhere.
struct VertexSMatrix {
    Eigen::MatrixXcd entries;
    cplx k;

    int dim() const noexcept { return static_cast<int>(entries.rows()); }
};

/// Amplitudes that parameterize the two-vertex Green function. Both ends
/// share one scatterer, so a single (s_big, r_big) pair describes them.
///   s_big   transmission-like amplitude (fraktur S)
///   r_big   reflection-like amplitude (fraktur R)
///   f       denominator; g = f / (2ik)
///   loop    1 - g, summed from its own terms so it stays accurate when
///           exp(ik ell) is tiny
///   r_big_asymptotic  r_big in the limit exp(ik ell) -> 0; the Casimir
///                     engine subtracts the contact term it generates.
struct CompositeAmplitudes {
    cplx s_big;
    cplx r_big;
    cplx f;
    cplx g;
    cplx loop;
    cplx r_big_asymptotic;
    double ell;
    cplx k;

    /// Builds from raw values with g = f/(2ik) and no contact term.
    static CompositeAmplitudes from_values(cplx s_big, cplx r_big, cplx f, double ell, cplx k);
};

/// R = (gamma - (N-2) ik) / (N ik - gamma), T = 2ik / (N ik - gamma).
/// Dirichlet returns exactly (-1, 0); Kirchhoff uses gamma = 0.
/// Throws SingularWavenumber for k = 0 and InputError for N < 1.
RTPair vertex_reflection_transmission(int valency, const VertexCoupling& coupling, cplx k);

VertexSMatrix build_vertex_smatrix(int valency, const VertexCoupling& coupling, cplx k);

/// Composite amplitudes of the two-vertex graph from one vertex pair (R, T)
/// and bond length ell, following the closed expressions term by term.
/// Throws PoleProximity when |f| is numerically zero.
CompositeAmplitudes composite_amplitudes(const RTPair& rt, double ell, cplx k);

/// Amplitudes under which the two-vertex Green function reduces to the exact
/// Green function of a single bond of length ell whose two ends reflect with
/// amplitude `end.r`: s_big = 0, r_big = R, g = 1 - R^2 exp(2ik ell).
/// This is the normalization the Casimir engine uses.
CompositeAmplitudes interval_amplitudes(const RTPair& end, double ell, cplx k);

/// Relative pole guard for |f|.
inline constexpr double kPoleTolerance = 1e-12;

}  // namespace qgraph

#endif  // QGRAPH_SCATTERING_HPP
