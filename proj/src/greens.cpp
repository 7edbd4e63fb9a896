#include "qgraph/greens.hpp"

#include <cmath>
#include <string>

#include "qgraph/errors.hpp"

namespace qgraph {

namespace {

constexpr cplx I{0.0, 1.0};

void require_nonzero(cplx k) {
    if (k == cplx{0.0, 0.0}) throw SingularWavenumber("Green function at k = 0");
}

void guard_composite(const CompositeAmplitudes& ca) {
    if (std::abs(ca.f) < kPoleTolerance * std::abs(2.0 * I * ca.k) || std::abs(ca.g) == 0.0)
        throw PoleProximity("two-vertex Green function evaluated on a pole of f");
}

// gamma_part is defined as total - free_part, so (total - free_part) - gamma_part
// is exactly zero in floating point.
GreenDecomposition assemble(cplx total, cplx free_part, cplx k, double x_i, double x_f) {
    return {total, free_part, total - free_part, k, x_i, x_f};
}

}  // namespace

cplx free_green(cplx k, double x_i, double x_f) {
    require_nonzero(k);
    return std::exp(I * k * std::abs(x_f - x_i)) / (2.0 * I * k);
}

GreenDecomposition star_green(int n, int l, cplx k, double x_i, double x_f, const VertexSMatrix& s) {
    require_nonzero(k);
    if (n < 0 || l < 0 || n >= s.dim() || l >= s.dim())
        throw OutOfRange("lead index out of range for a " + std::to_string(s.dim()) + "-lead star");
    if (x_i < 0.0 || x_f < 0.0) throw OutOfRange("star coordinates are measured outward and must be >= 0");

    const cplx free_part = (n == l) ? free_green(k, x_i, x_f) : cplx{};
    const cplx scattered = s.entries(n, l) * std::exp(I * k * (x_f + x_i)) / (2.0 * I * k);
    return assemble(free_part + scattered, free_part, k, x_i, x_f);
}

GreenDecomposition two_vertex_green(cplx k, double x_i, double x_f, const CompositeAmplitudes& ca,
                                    SourceOrdering ordering) {
    require_nonzero(k);
    const double ell = ca.ell;
    if (x_i < 0.0 || x_f < 0.0 || x_i > ell || x_f > ell)
        throw OutOfRange("two-vertex coordinates must lie in [0, ell]");
    guard_composite(ca);

    double src = x_i, obs = x_f;
    if (ordering == SourceOrdering::reciprocal && obs < src) std::swap(src, obs);

    const cplx S = ca.s_big;
    const cplx R = ca.r_big;
    const cplx e = std::exp(I * k * ell);
    const cplx bracket = (1.0 - S * e) * std::exp(I * k * (obs - src)) + R * std::exp(I * k * (obs + src)) +
                         (S + (R * R - S * S) * e) * std::exp(I * k * (ell - obs + src)) +
                         R * std::exp(I * k * (2.0 * ell - obs - src));
    const cplx total = bracket / (2.0 * I * k * ca.g);
    return assemble(total, free_green(k, x_i, x_f), k, x_i, x_f);
}

cplx bond_wavefunction(cplx phi_i, cplx phi_j, double k, double length, double x) {
    if (!(length > 0.0)) throw InputError("bond length must be positive");
    if (x < 0.0 || x > length) throw OutOfRange("x outside [0, L]");
    const double s = std::sin(k * length);
    if (std::abs(s) < 1e-12) throw ResonantBond("sin(kL) = 0: k is a Dirichlet eigenvalue of the bond");
    return (phi_i * std::sin(k * (length - x)) + phi_j * std::sin(k * x)) / s;
}

cplx trace_gamma(cplx k, const CompositeAmplitudes& ca) {
    require_nonzero(k);
    guard_composite(ca);
    const cplx S = ca.s_big;
    const cplx R = ca.r_big;
    const cplx e2 = std::exp(2.0 * I * k * ca.ell);
    return -((1.0 + (R * R - S * S) * e2) * I * k * ca.ell + (e2 - 1.0) * R) / (2.0 * k * k * ca.g);
}

}  // namespace qgraph
