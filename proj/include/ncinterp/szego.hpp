#ifndef NCINTERP_SZEGO_HPP
#define NCINTERP_SZEGO_HPP

#include "ncinterp/core.hpp"
#include "ncinterp/interp_oracle.hpp"
#include "ncinterp/variational.hpp"

#include <vector>

namespace ncinterp {

// Positive definite matrix function on the unit circle, sampled at the
// angles 2 pi j / N, j = 0..N-1, with N a power of two.
class BoundaryFunction {
public:
    explicit BoundaryFunction(std::vector<ComplexMatrix> samples);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return samples_.size(); }
    double angle(std::size_t j) const;
    const ComplexMatrix& operator[](std::size_t j) const { return samples_[j]; }
    const std::vector<ComplexMatrix>& samples() const { return samples_; }

    /// Smallest eigenvalue over all samples.
    double least_eigenvalue() const;

    /// Entrywise complex conjugate (= transpose, samples being Hermitian).
    BoundaryFunction conjugated() const;

private:
    std::size_t dim_;
    std::vector<ComplexMatrix> samples_;
};

/// sum_{|m| <= degree} c_m e^{i m w} sampled on n points, given c_0..c_degree
/// (c_{-m} = c_m^*).
BoundaryFunction sample_trig_polynomial(const std::vector<ComplexMatrix>& coeffs, std::size_t n_samples);

// Phi(w) = sum_{m=0}^{N} Phi_m w^m, analytic in the disk.
class OuterFactor {
public:
    OuterFactor() = default;
    explicit OuterFactor(std::vector<ComplexMatrix> coeffs) : coeffs_(std::move(coeffs)) {}

    const std::vector<ComplexMatrix>& coeffs() const { return coeffs_; }
    int cutoff() const { return static_cast<int>(coeffs_.size()) - 1; }
    ComplexMatrix evaluate(Complex w) const;
    ComplexMatrix at_origin() const { return coeffs_.front(); }

    /// Psi(w) = Phi(w)^T; Phi Phi^* = conj(f) implies Psi^* Psi = f.
    OuterFactor transposed() const;

private:
    std::vector<ComplexMatrix> coeffs_;
};

struct SzegoConfig {
    double tol = 1e-10;        // sup-norm reconstruction residual
    int max_iters = 100;
    int cutoff = 64;           // Fourier cutoff N
    int max_cutoff = 512;
    double damping = 0.5;      // step scaling after a failed update
};

struct WilsonResult {
    OuterFactor factor;
    double residual = 0;       // max_j ||Phi Phi^* - f||_inf over the samples
    int iterations = 0;
    bool converged = false;
    int damped_steps = 0;
};

/**
 * Wilson's Newton-type iteration for Phi Phi^* = f:
 *
 *   Phi <- Phi [Phi^{-1} f Phi^{-*} + I]_+
 *
 * where [.]_+ keeps positive frequencies and the upper triangle (half
 * diagonal) of the zero-lag coefficient. The result is gauge-fixed so that
 * Phi(0) is positive definite.
 */
WilsonResult wilson_factorize(const BoundaryFunction& f, int cutoff, const SzegoConfig& cfg = {});

/// Winding number of det Phi along the unit circle (argument principle).
int determinant_winding_number(const OuterFactor& phi, int n_points = 0);

/// Zeros of the polynomial det Phi(w), with negligible top coefficients trimmed.
std::vector<Complex> determinant_zeros(const OuterFactor& phi);

struct CertificateReport {
    Factorization factorization;
    double oracle_value = 0;      // boundary maximum of the analytic candidate
    double objective = 0;
    double eta = 0;               // objective / oracle_value - 1
    double epsilon = 0;
    double reconstruction = 0;    // relative || a y b - x ||
    double contractivity = 0;     // max over samples of ||sum u_k^* u_k|| (resp. v v^*)
    WilsonResult left;            // Phi, Phi Phi^* = A^2
    WilsonResult right;           // Phi~, Phi~ Phi~^* = conj(B^2), Psi = Phi~^T
    bool converged = false;
};

/**
 * Factorization x_k = a y_k b for p <= 2 assembled from an analytic
 * candidate F with F(theta) = x:
 *
 *   X = (eps + sum F^* F)^{1/2} on Re z = 0,  (eps + sum F F^*)^{1/2} on Re z = 1
 *   A = 1 | X^{1-p/2},  B = X^{1-p/2} | 1
 *   Phi Phi^* = A^2, Psi^* Psi = B^2 (outer factors)
 *   a = Phi(theta), b = Psi(theta), y_k = a^{-1} x_k b^{-1}.
 *
 * The candidate comes from oracle_upper; cfg.fourier_cutoff overrides szego.cutoff.
 */
CertificateReport build_certificate(const MatrixTuple& x, Exponent p, double theta, double epsilon,
                                    const SolverConfig& cfg = {}, const SzegoConfig& szego = {});

/// Same pipeline from a given candidate and its boundary maximum.
CertificateReport build_certificate(const AnalyticCandidate& candidate, double boundary_value, Exponent p,
                                    double theta, double epsilon, const SzegoConfig& szego = {});

}  // namespace ncinterp

#endif  // NCINTERP_SZEGO_HPP
