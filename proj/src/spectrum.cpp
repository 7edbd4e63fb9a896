#include "qgraph/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "qgraph/errors.hpp"
#include "qgraph/parallel.hpp"
#include "qgraph/scattering.hpp"

namespace qgraph {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxRescans = 4;

void require_valid(const Graph& g) {
    if (auto d = validate(g); !d.empty()) throw ValidationError(std::move(d));
}

double golden_minimize(const auto& f, double a, double b) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 200 && (b - a) > 4e-16 * std::max(1.0, std::abs(a)); ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc < fd ? c : d;
}

struct Candidate {
    double k;
    bool from_sign_change;
};

}  // namespace

std::vector<double> dirichlet_eigenvalues(double length, int n_max) {
    if (!(length > 0.0)) throw InputError("dirichlet_eigenvalues: length must be positive");
    if (n_max < 1) throw InputError("dirichlet_eigenvalues: n_max must be >= 1");
    std::vector<double> out(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) out[static_cast<std::size_t>(n - 1)] = n * kPi / length;
    return out;
}

SecularSystem::SecularSystem(const Graph& g) {
    require_valid(g);
    if (!g.is_compact()) throw UnsupportedTopology("spectrum requires compact graph (no leads)");
    require_zero_potential(g);
    if (g.bonds.empty()) throw UnsupportedTopology("spectrum requires at least one bond");

    bonds_ = static_cast<int>(g.bonds.size());
    outgoing_.resize(g.vertices.size());
    for (const auto& v : g.vertices) {
        coupling_.push_back(v.coupling);
        valency_.push_back(g.valency(v.id));
    }
    for (const auto& b : g.bonds) {
        const int from = static_cast<int>(*g.index_of(b.from));
        const int to = static_cast<int>(*g.index_of(b.to));
        const int d = static_cast<int>(head_.size());
        head_.push_back(to);
        head_.push_back(from);
        length_.push_back(b.length);
        length_.push_back(b.length);
        outgoing_[static_cast<std::size_t>(from)].push_back(d);
        outgoing_[static_cast<std::size_t>(to)].push_back(d + 1);
        total_length_ += b.length;
    }
}

Eigen::MatrixXcd SecularSystem::matrix(double k) const {
    const int n = directed_bonds();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n, n);
    std::vector<RTPair> rt;
    rt.reserve(coupling_.size());
    for (std::size_t v = 0; v < coupling_.size(); ++v)
        rt.push_back(vertex_reflection_transmission(valency_[v], coupling_[v], k));

    for (int d = 0; d < n; ++d) {
        const auto& vertex_rt = rt[static_cast<std::size_t>(head_[static_cast<std::size_t>(d)])];
        const std::complex<double> propagate = std::exp(std::complex<double>(0.0, k * length_[static_cast<std::size_t>(d)]));
        for (int out : outgoing_[static_cast<std::size_t>(head_[static_cast<std::size_t>(d)])]) {
            const auto amplitude = (out == (d ^ 1)) ? vertex_rt.r : vertex_rt.t;
            m(out, d) -= amplitude * propagate;
        }
    }
    return m;
}

std::complex<double> SecularSystem::determinant(double k) const {
    return matrix(k).partialPivLu().determinant();
}

// Half the phase of det(S D): sum over vertices of arg(gamma + i N k) plus k L.
// Dirichlet vertices (S = -1) contribute nothing.
double SecularSystem::phase(double k) const {
    double alpha = k * total_length_;
    for (std::size_t v = 0; v < coupling_.size(); ++v) {
        if (coupling_[v].is_dirichlet()) continue;
        alpha += std::atan2(valency_[v] * k, coupling_[v].gamma());
    }
    return alpha;
}

double SecularSystem::real_secular(double k) const {
    // (i/2)^{2B} det(I - U) / sqrt(det U), sqrt(det U) = i^B exp(i phase).
    const double magnitude = std::pow(0.25, bonds_) * ((bonds_ % 2) ? -1.0 : 1.0);
    std::complex<double> minus_i_pow{1.0, 0.0};
    for (int b = 0; b < bonds_ % 4; ++b) minus_i_pow *= std::complex<double>(0.0, -1.0);
    const auto z = magnitude * minus_i_pow * std::exp(std::complex<double>(0.0, -phase(k))) * determinant(k);
    return z.real();
}

Eigen::VectorXd SecularSystem::singular_values(double k) const {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(matrix(k));
    Eigen::VectorXd s = svd.singularValues();
    std::sort(s.begin(), s.end());
    return s;
}

std::complex<double> secular_function(const Graph& g, double k) {
    if (!(k > 0.0)) throw InputError("secular_function requires k > 0");
    return SecularSystem(g).determinant(k);
}

double weyl_count(const Graph& g, double k) {
    if (k < 0.0) throw InputError("weyl_count requires k >= 0");
    return total_length(g) * k / kPi;
}

namespace {

std::vector<Candidate> scan(const SecularSystem& sys, double k_max, double step) {
    const double k0 = 1e-3 * step;
    const auto points = static_cast<std::size_t>(std::ceil((k_max - k0) / step)) + 1;
    std::vector<double> grid(points), zeta(points);
    for (std::size_t j = 0; j < points; ++j) grid[j] = k0 + static_cast<double>(j) * step;

    constexpr std::size_t chunk = 256;
    const std::size_t chunks = (points + chunk - 1) / chunk;
    parallel_for(chunks, [&](std::size_t c) {
        for (std::size_t j = c * chunk; j < std::min(points, (c + 1) * chunk); ++j) zeta[j] = sys.real_secular(grid[j]);
    });

    std::vector<Candidate> out;
    for (std::size_t j = 0; j + 1 < points; ++j) {
        if (zeta[j] == 0.0) {
            out.push_back({grid[j], true});
        } else if ((zeta[j] < 0.0) != (zeta[j + 1] < 0.0) && zeta[j + 1] != 0.0) {
            out.push_back({grid[j], true});
        } else if (j > 0 && std::abs(zeta[j]) <= std::abs(zeta[j - 1]) && std::abs(zeta[j]) <= std::abs(zeta[j + 1]) &&
                   (zeta[j - 1] < 0.0) == (zeta[j] < 0.0)) {
            // sign-preserving dip: an even-multiplicity root or a near miss
            out.push_back({grid[j], false});
        }
    }
    return out;
}

struct Root {
    double k;
    int multiplicity;
    double residual;
};

std::optional<Root> refine(const SecularSystem& sys, const Candidate& c, double step, double tol) {
    double k = 0.0;
    if (c.from_sign_change) {
        const double a = c.k, b = c.k + step;
        const double fa = sys.real_secular(a);
        if (fa == 0.0) {
            k = a;
        } else {
            std::uintmax_t iters = 200;
            auto f = [&](double x) { return sys.real_secular(x); };
            const auto [lo, hi] = boost::math::tools::toms748_solve(
                f, a, b, fa, f(b), boost::math::tools::eps_tolerance<double>(std::numeric_limits<double>::digits - 2),
                iters);
            k = 0.5 * (lo + hi);
        }
    } else {
        const auto smallest = [&](double x) { return sys.singular_values(x)(0); };
        k = golden_minimize(smallest, c.k - step, c.k + step);
        if (smallest(k) > 10.0 * tol) return std::nullopt;
    }

    const Eigen::VectorXd sv = sys.singular_values(k);
    int multiplicity = 0;
    while (multiplicity < sv.size() && sv(multiplicity) <= 10.0 * tol) ++multiplicity;
    // A sign change always brackets a genuine root even when its singular value
    // sits just above the threshold (very steep secular functions).
    multiplicity = std::max(multiplicity, c.from_sign_change ? 1 : 0);
    if (multiplicity == 0) return std::nullopt;
    return Root{k, multiplicity, std::abs(sys.determinant(k))};
}

double weyl_deviation(const std::vector<double>& eig, double total_len, double k_max) {
    double worst = 0.0;
    for (std::size_t i = 0; i < eig.size(); ++i) {
        const double smooth = total_len * eig[i] / kPi;
        // left limit counts roots strictly below; right limit includes all copies
        const auto below = static_cast<double>(std::lower_bound(eig.begin(), eig.end(), eig[i]) - eig.begin());
        const auto upto = static_cast<double>(std::upper_bound(eig.begin(), eig.end(), eig[i]) - eig.begin());
        worst = std::max({worst, std::abs(below - smooth), std::abs(upto - smooth)});
    }
    worst = std::max(worst, std::abs(static_cast<double>(eig.size()) - total_len * k_max / kPi));
    return worst;
}

}  // namespace

SpectrumResult find_eigenvalues(const Graph& g, double k_max, double tol) {
    if (!(k_max > 0.0) || !std::isfinite(k_max)) throw InputError("find_eigenvalues: k_max must be positive");
    if (!(tol > 0.0)) throw InputError("find_eigenvalues: tol must be positive");
    const SecularSystem sys(g);
    const double total_len = total_length(g);

    SpectrumResult result;
    result.k_max = k_max;
    result.tolerance = tol;
    result.weyl_expected = total_len * k_max / kPi;
    result.weyl_bound = static_cast<double>(g.vertices.size() + g.bonds.size());

    double step = kPi / (8.0 * total_len);
    for (int attempt = 0; attempt <= kMaxRescans; ++attempt, step *= 0.5) {
        const auto candidates = scan(sys, k_max, step);
        std::vector<std::optional<Root>> refined(candidates.size());
        parallel_for(candidates.size(), [&](std::size_t i) { refined[i] = refine(sys, candidates[i], step, tol); });

        std::vector<Root> roots;
        for (const auto& r : refined) {
            if (!r || r->k <= 0.0 || r->k > k_max) continue;
            if (!roots.empty() && std::abs(r->k - roots.back().k) <= 1e3 * tol * std::max(1.0, r->k)) {
                if (r->multiplicity > roots.back().multiplicity) roots.back() = *r;
                continue;
            }
            roots.push_back(*r);
        }

        result.eigenvalues.clear();
        result.residuals.clear();
        for (const auto& r : roots) {
            for (int m = 0; m < r.multiplicity; ++m) {
                result.eigenvalues.push_back(r.k);
                result.residuals.push_back(r.residual);
            }
        }
        result.scan_step = step;
        result.weyl_max_deviation = weyl_deviation(result.eigenvalues, total_len, k_max);
        if (result.weyl_max_deviation <= result.weyl_bound) return result;
    }
    throw RootFindingError("Weyl audit failed after " + std::to_string(kMaxRescans) +
                           " rescans: count deviates from total_length*k/pi by " +
                           std::to_string(result.weyl_max_deviation));
}

}  // namespace qgraph
