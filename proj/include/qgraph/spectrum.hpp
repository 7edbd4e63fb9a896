#ifndef QGRAPH_SPECTRUM_HPP
#define QGRAPH_SPECTRUM_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qgraph/graph.hpp"

namespace qgraph {

/// Sorted positive eigenvalues of a compact graph, degenerate values repeated
/// once per multiplicity.
struct SpectrumResult {
    std::vector<double> eigenvalues;
    /// |det(I - S D)| at each reported eigenvalue.
    std::vector<double> residuals;
    double k_max = 0.0;
    double tolerance = 0.0;
    /// total_length * k_max / pi
    double weyl_expected = 0.0;
    /// max over k <= k_max of |N(k) - total_length * k / pi|
    double weyl_max_deviation = 0.0;
    /// V + B
    double weyl_bound = 0.0;
    /// Grid step of the final scan (halved on every failed Weyl audit).
    double scan_step = 0.0;
};

/// pi/L, 2 pi/L, ..., n_max pi/L.
std::vector<double> dirichlet_eigenvalues(double length, int n_max);

/// Bond-scattering quantization matrix of a compact graph. Directed bond 2b
/// runs from bonds[b].from to bonds[b].to, 2b+1 runs back. Amplitude leaving
/// on d picks up exp(ik L_d) and is scattered at its head vertex by the
/// vertex R/T amplitudes into every outgoing directed bond.
class SecularSystem {
public:
    /// Throws UnsupportedTopology for open graphs or nonzero potentials and
    /// ValidationError for invalid graphs.
    explicit SecularSystem(const Graph& g);

    int directed_bonds() const noexcept { return static_cast<int>(head_.size()); }

    /// I - S(k) D(k)
    Eigen::MatrixXcd matrix(double k) const;
    /// det(I - S(k) D(k))
    std::complex<double> determinant(double k) const;
    /// The determinant with its unimodular phase removed. Equals the product
    /// of sin(theta_j / 2) over the eigenphases of S D, so it is real,
    /// continuous in k, bounded by 1 and changes sign at every odd-multiplicity
    /// eigenvalue.
    double real_secular(double k) const;
    /// Singular values of I - S(k) D(k), ascending.
    Eigen::VectorXd singular_values(double k) const;

private:
    double phase(double k) const;

    std::vector<int> head_;             // head vertex index of each directed bond
    std::vector<double> length_;        // length of each directed bond
    std::vector<VertexCoupling> coupling_;
    std::vector<int> valency_;
    std::vector<std::vector<int>> outgoing_;  // per vertex: directed bonds leaving it
    double total_length_ = 0.0;
    int bonds_ = 0;
};

/// det(I - S_bond(k) D(k)); zeros on the real axis are the eigenvalues.
/// Throws InputError for k <= 0 and UnsupportedTopology for open graphs.
std::complex<double> secular_function(const Graph& g, double k);

/// total_length * k / pi
double weyl_count(const Graph& g, double k);

/// All eigenvalues in (0, k_max]. Scans the phase-stripped secular function
/// on a grid of step pi/(8 total_length); sign changes are refined by TOMS 748,
/// sign-preserving local minima by golden-section search on the smallest
/// singular value. Multiplicity is the number of singular values below
/// 10 tol. A failed Weyl audit halves the step, up to four times, before
/// RootFindingError is thrown.
SpectrumResult find_eigenvalues(const Graph& g, double k_max, double tol);

}  // namespace qgraph

#endif  // QGRAPH_SPECTRUM_HPP
