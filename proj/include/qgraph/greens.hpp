#ifndef QGRAPH_GREENS_HPP
#define QGRAPH_GREENS_HPP

#include "qgraph/scattering.hpp"

namespace qgraph {

/// G = G0 + Gamma at one (k, x_initial, x_final). gamma_part is stored as
/// total - free_part.
struct GreenDecomposition {
    cplx total;
    cplx free_part;
    cplx gamma_part;
    cplx k;
    double x_initial;
    double x_final;
};

/// exp(ik|x_f - x_i|) / (2ik): unit jump in dG/dx across the source.
cplx free_green(cplx k, double x_i, double x_f);

/// Open star graph (one vertex, semi-infinite leads), coordinates measured
/// outward from the vertex:
///   G_nl = [delta_nl exp(ik|x_f - x_i|) + S_nl exp(ik(x_f + x_i))] / (2ik).
GreenDecomposition star_green(int n, int l, cplx k, double x_i, double x_f, const VertexSMatrix& s);

/// How the first and third terms of the two-vertex Green function treat the
/// ordering of source and observation points.
enum class SourceOrdering {
    /// exponents exp(ik(x_f - x_i)) and exp(ik(ell - x_f + x_i)) for every
    /// x_i, x_f, exactly as the closed form is written.
    as_written,
    /// The closed form for x_f >= x_i, mirrored (x_i <-> x_f) otherwise, so
    /// G(x_i, x_f) = G(x_f, x_i).
    reciprocal,
};

/// Two-vertex Green function on [0, ell], x measured from the left vertex:
///   G = [(1 - S e) e^{ik(x_f - x_i)} + R e^{ik(x_f + x_i)}
///        + (S + (R^2 - S^2) e) e^{ik(ell - x_f + x_i)} + R e^{ik(2 ell - x_f - x_i)}] / (2ik g)
/// with e = exp(ik ell), S = s_big, R = r_big.
GreenDecomposition two_vertex_green(cplx k, double x_i, double x_f, const CompositeAmplitudes& ca,
                                    SourceOrdering ordering = SourceOrdering::as_written);

/// Bond wavefunction from its vertex values (A_b = 0):
///   psi(x) = [phi_i sin(k(L - x)) + phi_j sin(kx)] / sin(kL).
/// Throws ResonantBond when |sin kL| < 1e-12.
cplx bond_wavefunction(cplx phi_i, cplx phi_j, double k, double length, double x);

/// Closed-form integral over [0, ell] of the two-vertex Green function
/// diagonal (free line included):
///   -[(1 + (R^2 - S^2) e^2) ik ell + (e^2 - 1) R] / (2 k^2 g).
cplx trace_gamma(cplx k, const CompositeAmplitudes& ca);

}  // namespace qgraph

#endif  // QGRAPH_GREENS_HPP
