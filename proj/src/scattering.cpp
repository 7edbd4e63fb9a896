#include "qgraph/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>

#include "qgraph/errors.hpp"

namespace qgraph {

namespace {

constexpr cplx I{0.0, 1.0};

void require_nonzero(cplx k, const char* where) {
    if (k == cplx{0.0, 0.0}) throw SingularWavenumber(std::string(where) + ": k = 0 is singular");
}

double largest_magnitude(std::initializer_list<cplx> terms) {
    double m = 0.0;
    for (const auto& t : terms) m = std::max(m, std::abs(t));
    return m;
}

void guard_pole(cplx f, cplx k, double term_scale) {
    if (!std::isfinite(std::abs(f)) || std::abs(f) < kPoleTolerance * std::abs(2.0 * I * k) * std::max(1.0, term_scale))
        throw PoleProximity("composite denominator f vanishes at k = (" + std::to_string(k.real()) + ", " +
                            std::to_string(k.imag()) + "): spectral resonance");
}

}  // namespace

CompositeAmplitudes CompositeAmplitudes::from_values(cplx s_big, cplx r_big, cplx f, double ell, cplx k) {
    require_nonzero(k, "composite amplitudes");
    const cplx g = f / (2.0 * I * k);
    return {s_big, r_big, f, g, 1.0 - g, cplx{}, ell, k};
}

RTPair vertex_reflection_transmission(int valency, const VertexCoupling& coupling, cplx k) {
    if (valency < 1) throw InputError("vertex valency must be >= 1");
    require_nonzero(k, "vertex_reflection_transmission");
    if (coupling.is_dirichlet()) return {cplx{-1.0, 0.0}, cplx{0.0, 0.0}, valency, coupling, k};

    const double n = valency;
    const double gamma = coupling.gamma();
    const cplx denom = n * I * k - gamma;
    if (denom == cplx{0.0, 0.0})
        throw SingularWavenumber("vertex_reflection_transmission: N ik = gamma");
    const cplx r = (gamma - (n - 2.0) * I * k) / denom;
    const cplx t = 2.0 * I * k / denom;
    return {r, t, valency, coupling, k};
}

VertexSMatrix build_vertex_smatrix(int valency, const VertexCoupling& coupling, cplx k) {
    const auto rt = vertex_reflection_transmission(valency, coupling, k);
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Constant(valency, valency, rt.t);
    s.diagonal().setConstant(rt.r);
    return {std::move(s), k};
}

CompositeAmplitudes composite_amplitudes(const RTPair& rt, double ell, cplx k) {
    require_nonzero(k, "composite_amplitudes");
    if (!(ell > 0.0)) throw InputError("composite_amplitudes: ell must be positive");

    const cplx R = rt.r;
    const cplx T = rt.t;
    const cplx e = std::exp(I * k * ell);
    const cplx e2 = e * e;
    const cplx e3 = e2 * e;
    const cplx R2 = R * R, R3 = R2 * R, R4 = R3 * R;
    const cplx T2 = T * T, T3 = T2 * T, T4 = T3 * T;

    const cplx f1 = R * e;
    const cplx f2 = (R + T) * (R + T) * e2;
    const cplx f3 = (2.0 * T3 + R * T2 - 2.0 * R2 * T - R3) * e3;
    const cplx f = 2.0 * I * k * (1.0 - f1 - f2 - f3);
    guard_pole(f, k, largest_magnitude({f1, f2, f3}));

    const cplx s_big = T2 * std::exp(2.0 * I * k * ell) * ((R + T) * (1.0 - R * e) + 2.0 * T2 * e) / f;
    const cplx r_big = -(R - R2 * e + (T3 - 2.0 * R2 * T - R3) * e2 +
                         (R4 + 2.0 * R3 * T - 2.0 * R2 * T2 - 3.0 * R * T3 + 2.0 * T4) * e3) /
                       f;
    // At exp(ik ell) = 0 only the leading R term of r_big survives and f = 2ik.
    const cplx r_asym = -R / (2.0 * I * k);
    return {s_big, r_big, f, f / (2.0 * I * k), f1 + f2 + f3, r_asym, ell, k};
}

CompositeAmplitudes interval_amplitudes(const RTPair& end, double ell, cplx k) {
    require_nonzero(k, "interval_amplitudes");
    if (!(ell > 0.0)) throw InputError("interval_amplitudes: ell must be positive");
    const cplx rho = end.r;
    const cplx loop = rho * rho * std::exp(2.0 * I * k * ell);
    const cplx g = 1.0 - loop;
    const cplx f = 2.0 * I * k * g;
    guard_pole(f, k, std::abs(loop));
    return {cplx{}, rho, f, g, loop, rho, ell, k};
}

}  // namespace qgraph
