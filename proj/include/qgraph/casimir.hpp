#ifndef QGRAPH_CASIMIR_HPP
#define QGRAPH_CASIMIR_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qgraph/errors.hpp"
#include "qgraph/graph.hpp"
#include "qgraph/scattering.hpp"

namespace qgraph {

struct TauSample {
    double tau;
    double value;
};

/// Regulator settings shared by both Casimir routes.
struct RegularizationConfig {
    /// Strictly decreasing, positive, at least 3 entries.
    std::vector<double> tau_values = default_tau_values();
    double quadrature_tol = 1e-10;
    /// Imaginary-axis truncation; unset means chosen from quadrature_tol.
    std::optional<double> kappa_max;
    /// Number of fitted terms besides the finite part.
    int fit_order = 6;

    /// 0.2 * (1/sqrt 2)^j, j = 0..7
    static std::vector<double> default_tau_values();
    /// n points geometric between tau_max and tau_min, decreasing.
    static std::vector<double> geometric_tau_values(double tau_min, double tau_max, int n);

    /// Throws InputError when an invariant is violated.
    void validate() const;
};

enum class CasimirMethod { green_trace, mode_sum };

std::string_view to_string(CasimirMethod m);

struct CasimirResult {
    double energy = 0.0;
    /// Fitted coefficients, paired with their powers of tau (see TauBasis).
    std::vector<double> fit_coefficients;
    std::vector<int> fit_powers;
    /// Regulated energy at each configured tau, same order as tau_values.
    std::vector<TauSample> per_tau_samples;
    CasimirMethod method = CasimirMethod::mode_sum;
    double estimated_error = 0.0;
    double fit_residual = 0.0;
    /// Green route only: truncation actually used.
    double kappa_max = 0.0;
    double quadrature_tol = 0.0;

    /// Coefficient of tau^power, or 0 when that power is not in the fit.
    double coefficient(int power) const;
};

/// Which powers of tau the extrapolation fits besides the constant.
enum class TauBasis {
    /// tau^-2, tau^2, tau^4, ...: mode-sum cutoff expansion.
    inverse_square_even,
    /// tau, tau^2, tau^3, ...: convergent (fully subtracted) integrals.
    polynomial,
};

struct TauFit {
    double limit;
    std::vector<double> coefficients;  // constant term first, then by basis order
    std::vector<int> powers;
    double residual;  // max |fit - sample|
};

/// Raised when the tau -> 0 extrapolation cannot be trusted. Carries the
/// samples for diagnostics.
class ExtrapolationError : public NumericalError {
public:
    ExtrapolationError(const std::string& what, std::vector<TauSample> samples)
        : NumericalError(what), samples_(std::move(samples)) {}

    const std::vector<TauSample>& samples() const noexcept { return samples_; }

private:
    std::vector<TauSample> samples_;
};

/// Least-squares fit of value(tau) = c0 + sum_j c_j tau^{p_j}, fit_order terms
/// besides c0; returns c0 as the tau -> 0 limit. Throws ExtrapolationError
/// for too few samples, a rank-deficient design or a residual above
/// 1e-6 * max |value|.
TauFit extrapolate_tau(std::span<const TauSample> samples, int fit_order,
                       TauBasis basis = TauBasis::inverse_square_even);

/// Subtracted, tau-regulated Casimir integrand
///   [trace_gamma(k) - ell/(2ik) - r_big_asymptotic/(2k^2)] exp(ik tau):
/// the two-vertex Green function diagonal integrated over the bond, minus the
/// free line and the k-independent contact term.
cplx casimir_integrand(cplx k, double tau, const CompositeAmplitudes& ca);

/// The only configuration with a closed-form Green function: one bond of
/// length ell whose two end vertices share a k-independent coupling.
struct TwoVertexConfig {
    VertexCoupling coupling;
    double ell;
};

/// Throws UnsupportedTopology unless g is a symmetric Dirichlet or Kirchhoff
/// interval with zero potential.
TwoVertexConfig reduce_to_two_vertex(const Graph& g);

/// Overall constant multiplying i * integral of kappa^2 * integrand, fixed
/// once so the Dirichlet interval gives -pi/(24 ell).
cplx green_trace_calibration();

/// Green-function route: for each tau, integrate kappa^2 * integrand(i kappa)
/// exp(-kappa tau) over (0, kappa_max] on the imaginary axis, then fit
/// tau -> 0 with the polynomial basis.
CasimirResult casimir_green_method(const TwoVertexConfig& cfg2, const RegularizationConfig& cfg);
CasimirResult casimir_green_method(const Graph& g, const RegularizationConfig& cfg);

/// Cutoff mode sum E(tau) = 1/2 sum k_n exp(-k_n tau) - total_len/(2 pi tau^2),
/// extrapolated with the even basis. Requires max(k_n) * min(tau) >= 30.
/// The reported tau^-2 coefficient is that of the unsubtracted sum.
CasimirResult casimir_mode_sum(std::span<const double> eigenvalues, double total_len,
                               const RegularizationConfig& cfg);

/// Tail condition for casimir_mode_sum.
inline constexpr double kModeSumTailFactor = 30.0;

/// Spectrum depth used by callers that solve for eigenvalues first:
/// k_max = kModeSumSpectrumFactor / min(tau).
inline constexpr double kModeSumSpectrumFactor = 50.0;

}  // namespace qgraph

#endif  // QGRAPH_CASIMIR_HPP
