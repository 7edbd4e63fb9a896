#include <catch_amalgamated.hpp>

#include <functional>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qgraph/errors.hpp"
#include "qgraph/greens.hpp"

using namespace qgraph;

namespace {

const cplx I{0.0, 1.0};
constexpr double kPi = 3.14159265358979323846;
constexpr double h = 1e-4;

// |G'' + k^2 G| against 1e-5 max(1, |k^2 G|), centered second difference.
bool ode_ok(const std::function<cplx(double)>& g, cplx k, double x) {
    const cplx second = (g(x + h) - 2.0 * g(x) + g(x - h)) / (h * h);
    const cplx kg = k * k * g(x);
    return std::abs(second + kg) <= 1e-5 * std::max(1.0, std::abs(kg));
}

CompositeAmplitudes dirichlet_paper_composite(cplx k, double ell) {
    return composite_amplitudes({-1.0, 0.0, 3, VertexCoupling::dirichlet(), k}, ell, k);
}

CompositeAmplitudes dirichlet_interval(cplx k, double ell) {
    return interval_amplitudes(vertex_reflection_transmission(1, VertexCoupling::dirichlet(), k), ell, k);
}

cplx quad_diagonal(cplx k, const CompositeAmplitudes& ca) {
    auto part = [&](auto proj) {
        return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            [&](double x) { return proj(two_vertex_green(k, x, x, ca).total); }, 0.0, ca.ell, 15, 1e-14);
    };
    return {part([](cplx z) { return z.real(); }), part([](cplx z) { return z.imag(); })};
}

}  // namespace

TEST_CASE("free Green function") {
    CHECK(std::abs(free_green(1.0, 0.3, 0.3) - cplx(0.0, -0.5)) <= 1e-15);
    CHECK(std::abs(free_green(1.0, 0.0, kPi) - cplx(0.0, 0.5)) <= 1e-15);
    CHECK(std::abs(free_green(I, 0.0, 1.0) - (-std::exp(-1.0) / 2.0)) <= 1e-15);
    CHECK(std::abs(-std::exp(-1.0) / 2.0 - (-0.183940)) <= 1e-6);
    CHECK_THROWS_AS(free_green(0.0, 0.0, 1.0), SingularWavenumber);
}

TEST_CASE("free Green function has unit derivative jump") {
    for (cplx k : {cplx(1.0), cplx(3.7), cplx(0.0, 2.0), cplx(0.5, 0.5)}) {
        const double x0 = 0.4;
        auto g = [&](double x) { return free_green(k, x0, x); };
        // One-sided second-order stencils at the source.
        const cplx right = (-3.0 * g(x0) + 4.0 * g(x0 + h) - g(x0 + 2.0 * h)) / (2.0 * h);
        const cplx left = (3.0 * g(x0) - 4.0 * g(x0 - h) + g(x0 - 2.0 * h)) / (2.0 * h);
        CHECK(std::abs(right - left - 1.0) <= 1e-6);
    }
}

TEST_CASE("star Green function") {
    SECTION("Dirichlet wall vanishes at the vertex") {
        const auto s = build_vertex_smatrix(1, VertexCoupling::dirichlet(), 1.0);
        const auto d = star_green(0, 0, 1.0, 0.0, 0.0, s);
        CHECK(std::abs(d.total) <= 1e-16);
        CHECK(d.total - d.free_part - d.gamma_part == cplx(0.0));
    }
    SECTION("decoupled leads") {
        const auto s = build_vertex_smatrix(2, VertexCoupling::dirichlet(), 1.0);
        CHECK(std::abs(star_green(0, 1, 1.0, 0.2, 0.5, s).total) == 0.0);
    }
    SECTION("Kirchhoff 3-star at the vertex") {
        const auto s = build_vertex_smatrix(3, VertexCoupling::kirchhoff(), 1.0);
        const auto d = star_green(1, 1, 1.0, 0.0, 0.0, s);
        CHECK(std::abs(d.total - cplx(0.0, -1.0 / 3.0)) <= 1e-15);
    }
    SECTION("argument checks") {
        const auto s = build_vertex_smatrix(3, VertexCoupling::kirchhoff(), 1.0);
        CHECK_THROWS_AS(star_green(3, 0, 1.0, 0.0, 0.0, s), OutOfRange);
        CHECK_THROWS_AS(star_green(0, 0, 1.0, -1.0, 0.0, s), OutOfRange);
        CHECK_THROWS_AS(star_green(0, 0, 0.0, 0.0, 0.0, s), SingularWavenumber);
    }
    SECTION("reciprocity") {
        std::mt19937 rng(11);
        std::uniform_real_distribution<double> x(0.0, 3.0), kk(0.2, 6.0);
        for (const auto& c : {VertexCoupling::kirchhoff(), VertexCoupling::delta(0.5), VertexCoupling::delta(-2.0)}) {
            const double k = kk(rng);
            const auto s = build_vertex_smatrix(3, c, k);
            for (int n = 0; n < 3; ++n)
                for (int l = 0; l < 3; ++l) {
                    const double a = x(rng), b = x(rng);
                    CHECK(std::abs(star_green(n, l, k, a, b, s).total - star_green(l, n, k, b, a, s).total) <= 1e-12);
                }
        }
    }
}

TEST_CASE("ODE residuals off the source") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> kr(0.3, 6.0), ki(0.0, 1.0), pos(0.05, 0.95);
    SECTION("Kirchhoff 3-star") {
        for (int trial = 0; trial < 20; ++trial) {
            const cplx k(kr(rng), ki(rng));
            const auto s = build_vertex_smatrix(3, VertexCoupling::kirchhoff(), k);
            const double xi = 2.0 * pos(rng), xf = xi + 0.1 + pos(rng);
            const int n = trial % 3, l = (trial / 3) % 3;
            CHECK(ode_ok([&](double x) { return star_green(n, l, k, xi, x, s).total; }, k, xf));
        }
    }
    SECTION("two-vertex, Dirichlet ends") {
        for (int trial = 0; trial < 20; ++trial) {
            const cplx k(kr(rng), ki(rng) + 0.05);
            const double ell = 1.0;
            for (const auto& ca : {dirichlet_interval(k, ell), dirichlet_paper_composite(k, ell)}) {
                const double xi = pos(rng);
                double xf = pos(rng);
                if (std::abs(xf - xi) < 0.02) xf = xi < 0.5 ? xi + 0.3 : xi - 0.3;
                for (auto ord : {SourceOrdering::as_written, SourceOrdering::reciprocal})
                    CHECK(ode_ok([&](double x) { return two_vertex_green(k, xi, x, ca, ord).total; }, k, xf));
            }
        }
    }
}

TEST_CASE("two-vertex Green function") {
    SECTION("no scatterers") {
        const cplx k(1.3, 0.2);
        const auto ca = CompositeAmplitudes::from_values(0.0, 0.0, 2.0 * I * k, 1.0, k);
        const auto fwd = two_vertex_green(k, 0.2, 0.7, ca);
        CHECK(std::abs(fwd.total - std::exp(I * k * 0.5) / (2.0 * I * k)) <= 1e-15);
        CHECK(std::abs(fwd.gamma_part) <= 1e-15);
        const auto back = two_vertex_green(k, 0.7, 0.2, ca);
        CHECK(std::abs(back.total - std::exp(-I * k * 0.5) / (2.0 * I * k)) <= 1e-15);
        CHECK(std::abs(back.gamma_part) > 1e-3);
    }
    SECTION("Dirichlet composite at the midpoint (50-digit oracle)") {
        const auto ca = dirichlet_paper_composite(1.0, 1.0);
        const auto d = two_vertex_green(1.0, 0.5, 0.5, ca);
        CHECK(std::abs(d.total - cplx(-0.10631648194484406659, -0.3376847127343186753)) <= 1e-14);
        CHECK(d.total - d.free_part - d.gamma_part == cplx(0.0));
    }
    SECTION("interval amplitudes reproduce the exact Dirichlet interval kernel") {
        const double ell = 1.4;
        for (cplx k : {cplx(0.9), cplx(2.5, 0.3), cplx(0.0, 1.2)}) {
            const auto ca = dirichlet_interval(k, ell);
            for (double xi : {0.1, 0.6, 1.1})
                for (double xf : {0.0, 0.3, 0.9, 1.4}) {
                    const double lo = std::min(xi, xf), hi = std::max(xi, xf);
                    const cplx exact = -std::sin(k * lo) * std::sin(k * (ell - hi)) / (k * std::sin(k * ell));
                    CHECK(std::abs(two_vertex_green(k, xi, xf, ca, SourceOrdering::reciprocal).total - exact) <= 1e-13);
                }
            CHECK(std::abs(two_vertex_green(k, 0.3, 0.0, ca, SourceOrdering::reciprocal).total) <= 1e-15);
            CHECK(std::abs(two_vertex_green(k, 0.3, ell, ca, SourceOrdering::reciprocal).total) <= 1e-15);
        }
    }
    SECTION("reciprocal ordering is symmetric") {
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> x(0.0, 1.0), kr(0.2, 5.0);
        for (int trial = 0; trial < 5; ++trial) {
            const cplx k(kr(rng), 0.1);
            for (const auto& ca : {dirichlet_interval(k, 1.0), dirichlet_paper_composite(k, 1.0),
                                   composite_amplitudes(vertex_reflection_transmission(3, VertexCoupling::kirchhoff(), k),
                                                        1.0, k)}) {
                const double a = x(rng), b = x(rng);
                const auto g1 = two_vertex_green(k, a, b, ca, SourceOrdering::reciprocal).total;
                const auto g2 = two_vertex_green(k, b, a, ca, SourceOrdering::reciprocal).total;
                CHECK(std::abs(g1 - g2) <= 1e-12 * std::max(1.0, std::abs(g1)));
            }
        }
    }
    SECTION("as written, the closed form is not symmetric in its arguments") {
        const cplx k(0.0, 2.0);
        const auto ca = dirichlet_interval(k, 1.0);
        const auto g1 = two_vertex_green(k, 0.2, 0.8, ca, SourceOrdering::as_written).total;
        const auto g2 = two_vertex_green(k, 0.8, 0.2, ca, SourceOrdering::as_written).total;
        CHECK(std::abs(g1 - g2) > 1e-3);
        // The forward branch agrees with the reciprocal one.
        CHECK(g1 == two_vertex_green(k, 0.2, 0.8, ca, SourceOrdering::reciprocal).total);
    }
    SECTION("argument checks") {
        const auto ca = dirichlet_interval(cplx(1.0, 0.1), 1.0);
        CHECK_THROWS_AS(two_vertex_green(cplx(1.0, 0.1), -0.1, 0.5, ca), OutOfRange);
        CHECK_THROWS_AS(two_vertex_green(cplx(1.0, 0.1), 0.1, 1.5, ca), OutOfRange);
    }
}

TEST_CASE("bond wavefunction") {
    CHECK(std::abs(bond_wavefunction(cplx(0.3, 1.0), cplx(-2.0, 0.5), 1.7, 1.2, 0.0) - cplx(0.3, 1.0)) <= 1e-15);
    CHECK(std::abs(bond_wavefunction(cplx(0.3, 1.0), cplx(-2.0, 0.5), 1.7, 1.2, 1.2) - cplx(-2.0, 0.5)) <= 1e-14);
    const cplx mid = bond_wavefunction(1.0, 1.0, 1.0, 1.0, 0.5);
    CHECK(std::abs(mid - 1.0 / std::cos(0.5)) <= 1e-15);
    CHECK(std::abs(mid.real() - 1.139494) <= 1e-6);
    CHECK_THROWS_AS(bond_wavefunction(1.0, 1.0, kPi, 1.0, 0.5), ResonantBond);
    CHECK_THROWS_AS(bond_wavefunction(1.0, 1.0, 1.0, 1.0, 1.5), OutOfRange);
}

TEST_CASE("trace closed form") {
    SECTION("free line only") {
        for (double ell : {1.0, 2.0}) {
            const cplx k = 1.7;
            const auto ca = CompositeAmplitudes::from_values(0.0, 0.0, 2.0 * I * k, ell, k);
            CHECK(std::abs(trace_gamma(k, ca) - cplx(0.0, -ell / (2.0 * k.real()))) <= 1e-15);
        }
        const cplx k = 1.7;
        const auto t1 = trace_gamma(k, CompositeAmplitudes::from_values(0.0, 0.0, 2.0 * I * k, 1.0, k));
        const auto t2 = trace_gamma(k, CompositeAmplitudes::from_values(0.0, 0.0, 2.0 * I * k, 2.0, k));
        CHECK(std::abs(t2 - 2.0 * t1) <= 1e-15);
    }
    SECTION("Dirichlet composite at k = i (quadrature oracle)") {
        const cplx k = I;
        const auto t = trace_gamma(k, dirichlet_paper_composite(k, 1.0));
        CHECK(std::abs(t - (-0.25427937305693213232)) <= 1e-10 * 0.2543);
    }
    SECTION("Dirichlet interval matches -1/(2k^2) + ell cot(k ell)/(2k)") {
        for (double ell : {0.5, 1.0, 2.0}) {
            const cplx k(0.0, 1.3);
            const cplx exact = -1.0 / (2.0 * k * k) + ell * std::cos(k * ell) / std::sin(k * ell) / (2.0 * k);
            CHECK(std::abs(trace_gamma(k, dirichlet_interval(k, ell)) - exact) <= 1e-13 * std::abs(exact));
        }
    }
    SECTION("agrees with quadrature of the diagonal") {
        std::mt19937 rng(77);
        std::uniform_real_distribution<double> kappa(0.2, 5.0), len(0.3, 3.0);
        for (int trial = 0; trial < 10; ++trial) {
            const cplx k(0.0, kappa(rng));
            const double ell = len(rng);
            for (const auto& ca : {dirichlet_interval(k, ell), dirichlet_paper_composite(k, ell),
                                   composite_amplitudes(vertex_reflection_transmission(3, VertexCoupling::kirchhoff(), k),
                                                        ell, k)}) {
                const cplx closed = trace_gamma(k, ca);
                CHECK(std::abs(closed - quad_diagonal(k, ca)) <= 1e-8 * std::abs(closed));
            }
        }
    }
}
