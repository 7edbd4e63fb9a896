#include "qgraph/casimir.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qgraph/greens.hpp"
#include "qgraph/parallel.hpp"

namespace qgraph {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx I{0.0, 1.0};
constexpr unsigned kQuadMaxDepth = 20;

std::vector<int> basis_powers(TauBasis basis, int fit_order) {
    std::vector<int> powers;
    for (int j = 0; j < fit_order; ++j) {
        if (basis == TauBasis::polynomial)
            powers.push_back(j + 1);
        else
            powers.push_back(j == 0 ? -2 : 2 * j);
    }
    return powers;
}

// Neumaier compensated sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        comp_ += (std::abs(sum_) >= std::abs(x)) ? (sum_ - t) + x : (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Smallest kappa with exp(-2 kappa ell) / kappa < tol.
double default_kappa_max(double ell, double tol) {
    double kappa = 1.0 / ell;
    for (int it = 0; it < 100; ++it) {
        const double next = std::max(1.0 / ell, std::log(1.0 / (tol * kappa)) / (2.0 * ell));
        if (std::abs(next - kappa) < 1e-12 * kappa) break;
        kappa = next;
    }
    return kappa;
}

}  // namespace

std::vector<double> RegularizationConfig::default_tau_values() {
    std::vector<double> taus;
    for (int j = 0; j < 8; ++j) taus.push_back(0.2 * std::pow(std::numbers::sqrt2 / 2.0, j));
    return taus;
}

std::vector<double> RegularizationConfig::geometric_tau_values(double tau_min, double tau_max, int n) {
    if (!(tau_min > 0.0) || !(tau_max > tau_min) || n < 3)
        throw InputError("tau range needs 0 < tau_min < tau_max and at least 3 steps");
    std::vector<double> taus;
    const double ratio = std::pow(tau_min / tau_max, 1.0 / (n - 1));
    for (int j = 0; j < n; ++j) taus.push_back(j == n - 1 ? tau_min : tau_max * std::pow(ratio, j));
    return taus;
}

void RegularizationConfig::validate() const {
    if (tau_values.size() < 3) throw InputError("regularization needs at least 3 tau values");
    for (std::size_t i = 0; i < tau_values.size(); ++i) {
        if (!(tau_values[i] > 0.0) || !std::isfinite(tau_values[i])) throw InputError("tau values must be positive");
        if (i > 0 && !(tau_values[i] < tau_values[i - 1])) throw InputError("tau values must be strictly decreasing");
    }
    if (!(quadrature_tol > 0.0)) throw InputError("quadrature tolerance must be positive");
    if (kappa_max && !(*kappa_max > 0.0)) throw InputError("kappa_max must be positive");
    if (fit_order < 1) throw InputError("fit_order must be >= 1");
    if (tau_values.size() < static_cast<std::size_t>(fit_order) + 1)
        throw InputError("fit_order needs at least fit_order + 1 tau values");
}

std::string_view to_string(CasimirMethod m) {
    return m == CasimirMethod::green_trace ? "green" : "modesum";
}

double CasimirResult::coefficient(int power) const {
    for (std::size_t i = 0; i < fit_powers.size(); ++i)
        if (fit_powers[i] == power) return fit_coefficients[i];
    return 0.0;
}

namespace {

struct LinearFit {
    Eigen::VectorXd coeffs;  // constant first, then the basis powers
    double residual;
    double max_value;
};

// Least squares on a column-equilibrated design; the constant term is linear
// in the sample values, which lets error budgets be pushed through the fit.
LinearFit solve_fit(std::span<const TauSample> samples, const std::vector<int>& powers) {
    const auto rows = static_cast<Eigen::Index>(samples.size());
    const auto cols = static_cast<Eigen::Index>(powers.size() + 1);
    Eigen::MatrixXd design(rows, cols);
    Eigen::VectorXd rhs(rows);
    double max_value = 0.0;
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& s = samples[static_cast<std::size_t>(r)];
        design(r, 0) = 1.0;
        for (std::size_t j = 0; j < powers.size(); ++j)
            design(r, static_cast<Eigen::Index>(j) + 1) = std::pow(s.tau, powers[j]);
        rhs(r) = s.value;
        max_value = std::max(max_value, std::abs(s.value));
    }

    // Column equilibration keeps tau^-2 and tau^10 columns comparable.
    const Eigen::VectorXd scale = design.cwiseAbs().colwise().maxCoeff().transpose();
    const Eigen::MatrixXd scaled = design * scale.cwiseInverse().asDiagonal();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= 1e-12 * sv(0))
        throw ExtrapolationError("rank-deficient tau fit (tau values too clustered)",
                                 std::vector<TauSample>(samples.begin(), samples.end()));
    const Eigen::VectorXd coeffs = svd.solve(rhs).cwiseQuotient(scale);
    return {coeffs, (design * coeffs - rhs).cwiseAbs().maxCoeff(), max_value};
}

}  // namespace

TauFit extrapolate_tau(std::span<const TauSample> samples, int fit_order, TauBasis basis) {
    const std::vector<TauSample> copy(samples.begin(), samples.end());
    if (fit_order < 1) throw ExtrapolationError("fit_order must be >= 1", copy);
    if (samples.size() < static_cast<std::size_t>(fit_order) + 1)
        throw ExtrapolationError("extrapolation needs at least fit_order + 1 samples, got " +
                                     std::to_string(samples.size()),
                                 copy);
    for (const auto& s : samples)
        if (!(s.tau > 0.0) || !std::isfinite(s.value))
            throw ExtrapolationError("samples need positive tau and finite values", copy);

    const auto powers = basis_powers(basis, fit_order);
    const auto solved = solve_fit(samples, powers);
    const Eigen::VectorXd& coeffs = solved.coeffs;
    const double residual = solved.residual;
    if (residual > 1e-6 * solved.max_value)
        throw ExtrapolationError("tau fit residual " + std::to_string(residual) + " exceeds 1e-6 * max|value|", copy);

    TauFit fit;
    fit.limit = coeffs(0);
    fit.coefficients.assign(coeffs.data(), coeffs.data() + coeffs.size());
    fit.powers.push_back(0);
    fit.powers.insert(fit.powers.end(), powers.begin(), powers.end());
    fit.residual = residual;
    return fit;
}

cplx casimir_integrand(cplx k, double tau, const CompositeAmplitudes& ca) {
    if (tau < 0.0) throw InputError("casimir_integrand: tau must be >= 0");
    if (std::abs(ca.f) < kPoleTolerance * std::abs(2.0 * I * k))
        throw PoleProximity("casimir_integrand: composite denominator vanishes");
    // trace_gamma - ell/(2ik) - r_asym/(2k^2) over the common denominator
    // 2k^2 g, with g = 1 - loop, so the k-independent parts cancel exactly.
    const cplx e2 = std::exp(2.0 * I * k * ca.ell);
    const cplx ikl = I * k * ca.ell;
    const cplx n = ca.r_big, s = ca.s_big, ra = ca.r_big_asymptotic;
    const cplx num = -ikl * (ca.loop + (n * n - s * s) * e2) - e2 * n + (n - ra) + ra * ca.loop;
    return num / (2.0 * k * k * ca.g) * std::exp(I * k * tau);
}

TwoVertexConfig reduce_to_two_vertex(const Graph& g) {
    if (auto d = validate(g); !d.empty()) throw ValidationError(std::move(d));
    require_zero_potential(g);
    if (g.vertices.size() != 2 || g.bonds.size() != 1 || !g.leads.empty())
        throw UnsupportedTopology("green method supports two-vertex reduction only");
    const auto& a = g.vertices[0].coupling;
    const auto& b = g.vertices[1].coupling;
    if (!(a == b)) throw UnsupportedTopology("green method needs identical couplings at both ends");
    if (!a.is_scale_free())
        throw UnsupportedTopology("green method supports Dirichlet or Kirchhoff ends only (k-independent reflection)");
    return {a, g.bonds[0].length};
}

cplx green_trace_calibration() {
    // E = C * integral (ik)^2 integrand dk along k = i kappa, dk = i dkappa,
    // (ik)^2 = kappa^2. The Dirichlet interval requires C * i = 1/pi.
    return cplx{0.0, -1.0 / kPi};
}

CasimirResult casimir_green_method(const TwoVertexConfig& cfg2, const RegularizationConfig& cfg) {
    cfg.validate();
    if (!(cfg2.ell > 0.0)) throw InputError("interval length must be positive");
    if (!cfg2.coupling.is_scale_free())
        throw UnsupportedTopology("green method supports Dirichlet or Kirchhoff ends only (k-independent reflection)");

    const double ell = cfg2.ell;
    const double kappa_max = cfg.kappa_max.value_or(default_kappa_max(ell, cfg.quadrature_tol));
    const cplx weight = green_trace_calibration() * I;

    const auto integrand = [&](double kappa, double tau) {
        const cplx k = I * kappa;
        const auto end = vertex_reflection_transmission(1, cfg2.coupling, k);
        const auto ca = interval_amplitudes(end, ell, k);
        return (weight * kappa * kappa * casimir_integrand(k, tau, ca)).real();
    };

    const auto& taus = cfg.tau_values;
    std::vector<double> values(taus.size()), quad_err(taus.size()), tail(taus.size());
    parallel_for(taus.size(), [&](std::size_t i) {
        const double tau = taus[i];
        auto f = [&](double kappa) { return integrand(kappa, tau); };
        double err = 0.0;
        values[i] = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, kappa_max, kQuadMaxDepth,
                                                                                   cfg.quadrature_tol, &err);
        quad_err[i] = err;
        tail[i] = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            f, kappa_max, std::numeric_limits<double>::infinity(), 10, 1e-6);
    });

    std::vector<TauSample> samples;
    for (std::size_t i = 0; i < taus.size(); ++i) samples.push_back({taus[i], values[i]});
    const auto fit = extrapolate_tau(samples, cfg.fit_order, TauBasis::polynomial);

    double extrapolation_err = 0.0;
    if (cfg.fit_order >= 2)
        extrapolation_err = std::abs(fit.limit - extrapolate_tau(samples, cfg.fit_order - 1, TauBasis::polynomial).limit);

    CasimirResult out;
    out.energy = fit.limit;
    out.fit_coefficients = fit.coefficients;
    out.fit_powers = fit.powers;
    out.per_tau_samples = std::move(samples);
    out.method = CasimirMethod::green_trace;
    out.fit_residual = fit.residual;
    // The truncated tail at each tau, carried through the same fit, is the
    // shift truncation causes in the limit.
    std::vector<TauSample> tail_samples;
    for (std::size_t i = 0; i < taus.size(); ++i) tail_samples.push_back({taus[i], tail[i]});
    const double truncation_err =
        std::abs(solve_fit(tail_samples, basis_powers(TauBasis::polynomial, cfg.fit_order)).coeffs(0));
    out.estimated_error = extrapolation_err + *std::max_element(quad_err.begin(), quad_err.end()) + truncation_err;
    out.kappa_max = kappa_max;
    out.quadrature_tol = cfg.quadrature_tol;
    return out;
}

CasimirResult casimir_green_method(const Graph& g, const RegularizationConfig& cfg) {
    return casimir_green_method(reduce_to_two_vertex(g), cfg);
}

CasimirResult casimir_mode_sum(std::span<const double> eigenvalues, double total_len,
                               const RegularizationConfig& cfg) {
    cfg.validate();
    if (!(total_len > 0.0)) throw InputError("total length must be positive");
    if (eigenvalues.empty()) throw InsufficientSpectrum("mode sum needs a nonempty spectrum");
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
        if (!(eigenvalues[i] > 0.0)) throw InputError("mode sum eigenvalues must be positive");
        if (i > 0 && eigenvalues[i] < eigenvalues[i - 1]) throw InputError("mode sum eigenvalues must be sorted");
    }
    const double tau_min = cfg.tau_values.back();
    const double k_top = eigenvalues.back();
    if (k_top * tau_min < kModeSumTailFactor)
        throw InsufficientSpectrum("spectrum too short: max k * min tau = " + std::to_string(k_top * tau_min) +
                                   " < " + std::to_string(kModeSumTailFactor));

    std::vector<TauSample> samples;
    for (double tau : cfg.tau_values) {
        CompensatedSum sum;
        for (double k : eigenvalues) sum.add(0.5 * k * std::exp(-k * tau));
        const double weyl = total_len / (2.0 * kPi * tau * tau);
        samples.push_back({tau, sum.value() - weyl});
    }
    auto fit = extrapolate_tau(samples, cfg.fit_order, TauBasis::inverse_square_even);

    double extrapolation_err = 0.0;
    if (cfg.fit_order >= 2)
        extrapolation_err =
            std::abs(fit.limit - extrapolate_tau(samples, cfg.fit_order - 1, TauBasis::inverse_square_even).limit);
    // Weyl-density bound on the sum beyond the last eigenvalue at the smallest tau.
    const double tail = total_len / (2.0 * kPi) * (k_top / tau_min + 1.0 / (tau_min * tau_min)) * std::exp(-k_top * tau_min);

    for (std::size_t i = 0; i < fit.powers.size(); ++i)
        if (fit.powers[i] == -2) fit.coefficients[i] += total_len / (2.0 * kPi);

    CasimirResult out;
    out.energy = fit.limit;
    out.fit_coefficients = std::move(fit.coefficients);
    out.fit_powers = std::move(fit.powers);
    out.per_tau_samples = std::move(samples);
    out.method = CasimirMethod::mode_sum;
    out.fit_residual = fit.residual;
    out.estimated_error = extrapolation_err + tail;
    out.quadrature_tol = cfg.quadrature_tol;
    return out;
}

}  // namespace qgraph
