#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "qgraph/errors.hpp"
#include "qgraph/spectrum.hpp"

using namespace qgraph;

namespace {

constexpr double kPi = 3.14159265358979323846;

Graph load(const char* name) { return load_graph(std::string(QGRAPH_TEST_DATA) + "/" + name); }

// Kirchhoff centre, Dirichlet tips, lengths L_j: psi_j = a_j sin(k(L_j - x)),
// continuity a_j sin(k L_j) = phi and sum a_j cos(k L_j) = 0, which is
// sum cot(k L_j) = 0 when no sin vanishes. For equal lengths this is
// cos(kL) sin^2(kL) = 0: simple roots (n + 1/2) pi / L, double roots n pi / L.
double bisect(double (*f)(double), double a, double b) {
    double fa = f(a);
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if ((fm < 0) == (fa < 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

double cot_sum_unequal(double k) {
    return std::cos(k * 0.7) / std::sin(k * 0.7) + std::cos(k * 1.3) / std::sin(k * 1.3) + std::cos(k) / std::sin(k);
}

Graph unequal_star() {
    Graph g = load("star3.json");
    g.bonds[0].length = 0.7;
    g.bonds[1].length = 1.3;
    return g;
}

int count_below(const std::vector<double>& ev, double k) {
    return static_cast<int>(std::upper_bound(ev.begin(), ev.end(), k) - ev.begin());
}

}  // namespace

TEST_CASE("Dirichlet eigenvalues") {
    const auto a = dirichlet_eigenvalues(kPi, 3);
    REQUIRE(a.size() == 3);
    for (int n = 0; n < 3; ++n) CHECK(std::abs(a[n] - (n + 1)) <= 1e-15);
    CHECK(dirichlet_eigenvalues(1.0, 1) == std::vector<double>{kPi});
    const auto c = dirichlet_eigenvalues(2.0, 2);
    CHECK(std::abs(c[0] - kPi / 2) <= 1e-15);
    CHECK(std::abs(c[1] - kPi) <= 1e-15);
}

TEST_CASE("secular function") {
    const Graph interval = load("interval.json");
    for (int n = 1; n <= 4; ++n) {
        CHECK(std::abs(secular_function(interval, n * kPi)) <= 1e-12);
        CHECK(std::abs(secular_function(interval, n * kPi + 0.3)) > 1e-3);
    }
    const Graph star = load("star3.json");
    CHECK(std::abs(secular_function(star, kPi / 2)) <= 1e-12);
    CHECK(std::abs(secular_function(star, kPi / 2 + 0.3)) > 1e-3);
    CHECK_THROWS_AS(secular_function(load("wall.json"), 1.0), UnsupportedTopology);
    CHECK_THROWS_AS(secular_function(interval, 0.0), InputError);
}

TEST_CASE("phase-stripped secular function is real and tracks the determinant modulus") {
    const SecularSystem sys(load("delta_star.json"));
    for (double k = 0.05; k < 12.0; k += 0.37) {
        CHECK(std::abs(std::abs(sys.real_secular(k)) - std::abs(sys.determinant(k)) / std::pow(2.0, 6)) <= 1e-12);
    }
}

TEST_CASE("interval spectrum") {
    const Graph g = load("interval.json");
    const auto r = find_eigenvalues(g, 10.0, 1e-10);
    REQUIRE(r.eigenvalues.size() == 3);
    for (int n = 0; n < 3; ++n) CHECK(std::abs(r.eigenvalues[n] - (n + 1) * kPi) <= 1e-10);
    for (double res : r.residuals) CHECK(res <= 1e-10);
    CHECK(find_eigenvalues(g, 0.5, 1e-10).eigenvalues.empty());

    const auto deep = find_eigenvalues(g, 20.5 * kPi, 1e-10);
    const auto oracle = dirichlet_eigenvalues(1.0, 20);
    REQUIRE(deep.eigenvalues.size() == oracle.size());
    for (std::size_t i = 0; i < oracle.size(); ++i) CHECK(std::abs(deep.eigenvalues[i] - oracle[i]) <= 1e-10);
}

TEST_CASE("equal-length 3-star spectrum") {
    const auto r = find_eigenvalues(load("star3.json"), 5.0, 1e-10);
    const std::vector<double> expected{kPi / 2, kPi, kPi, 3 * kPi / 2};
    REQUIRE(r.eigenvalues.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) CHECK(std::abs(r.eigenvalues[i] - expected[i]) <= 1e-10);
}

TEST_CASE("unequal 3-star matches the cotangent-sum oracle") {
    const Graph g = unequal_star();
    const auto r = find_eigenvalues(g, 12.0, 1e-10);
    // Between consecutive poles of the cot sum it decreases monotonically and
    // has exactly one root; poles sit at multiples of pi/0.7, pi/1.3, pi.
    std::vector<double> poles{0.0};
    for (double len : {0.7, 1.3, 1.0})
        for (int n = 1; n * kPi / len < 12.0 + kPi; ++n) poles.push_back(n * kPi / len);
    std::sort(poles.begin(), poles.end());
    std::vector<double> oracle;
    for (std::size_t i = 0; i + 1 < poles.size(); ++i) {
        const double root = bisect(cot_sum_unequal, poles[i] + 1e-12, poles[i + 1] - 1e-12);
        if (root <= 12.0) oracle.push_back(root);
    }
    REQUIRE(r.eigenvalues.size() == oracle.size());
    for (std::size_t i = 0; i < oracle.size(); ++i) CHECK(std::abs(r.eigenvalues[i] - oracle[i]) <= 1e-9);
}

TEST_CASE("Weyl counting stays within V + B") {
    for (const char* name : {"interval.json", "interval_neumann.json", "star3.json", "delta_star.json"}) {
        const Graph g = load(name);
        const double k_max = 60.0;
        const auto r = find_eigenvalues(g, k_max, 1e-10);
        const double bound = static_cast<double>(g.vertices.size() + g.bonds.size());
        CHECK(r.weyl_bound == bound);
        CHECK(r.weyl_max_deviation <= bound);
        for (double k = 0.0; k <= k_max; k += 0.01)
            CHECK(std::abs(count_below(r.eigenvalues, k) - weyl_count(g, k)) <= bound + 1e-9);
    }
}

TEST_CASE("weyl_count") {
    const Graph interval = load("interval.json");
    CHECK(std::abs(weyl_count(interval, kPi) - 1.0) <= 1e-15);
    CHECK(std::abs(weyl_count(load("star3.json"), kPi) - 3.0) <= 1e-15);
    CHECK(weyl_count(scaled(interval, 2.0), 0.0) == 0.0);
}

TEST_CASE("eigenvalues scale as 1/c") {
    for (const char* name : {"interval.json", "interval_neumann.json", "star3.json"}) {
        const Graph g = load(name);
        const auto base = find_eigenvalues(g, 30.0, 1e-12);
        for (double c : {0.5, 2.0}) {
            const auto s = find_eigenvalues(scaled(g, c), 30.0 / c, 1e-12);
            REQUIRE(s.eigenvalues.size() == base.eigenvalues.size());
            for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
                CHECK(std::abs(s.eigenvalues[i] - base.eigenvalues[i] / c) <= 1e-10);
        }
    }
}

TEST_CASE("Neumann interval spectrum") {
    const auto r = find_eigenvalues(load("interval_neumann.json"), 10.0, 1e-10);
    REQUIRE(r.eigenvalues.size() == 3);
    for (int n = 0; n < 3; ++n) CHECK(std::abs(r.eigenvalues[n] - (n + 1) * kPi) <= 1e-10);
}

TEST_CASE("spectrum rejects open graphs") {
    CHECK_THROWS_AS(find_eigenvalues(load("wall.json"), 5.0, 1e-10), UnsupportedTopology);
    CHECK_THROWS_AS(find_eigenvalues(load("interval.json"), 0.0, 1e-10), InputError);
}
