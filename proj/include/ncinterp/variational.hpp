#ifndef NCINTERP_VARIATIONAL_HPP
#define NCINTERP_VARIATIONAL_HPP

#include "ncinterp/core.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ncinterp {

/**
 * Exponent bundle for the interpolation parameter theta:
 *
 *   1/r  = 1 - 2/max(p, p')
 *   1/r0 = theta / (2r)
 *   1/r1 = (1 - theta) / (2r)
 *
 * For p <= 2 this gives 1/r0 + 1/2 + 1/r1 = 1/p, for p >= 2
 * 1/r0 + 1/p + 1/r1 = 1/2.
 */
struct Exponents {
    Exponent p;
    Exponent p_conj;
    double theta = 0.5;
    Exponent r;
    Exponent r0;
    Exponent r1;
};

Exponents derive_exponents(Exponent p, double theta);

/// x_k = a y_k b with its objective ||a||_{r0} ||b||_{r1} (sum ||y_k||_2^2)^{1/2}.
struct Factorization {
    ComplexMatrix a;
    MatrixTuple ys;
    ComplexMatrix b;
    double objective = 0;

    MatrixTuple product() const { return ys.sandwiched(a, b); }
};

double factorization_objective(const ComplexMatrix& a, const MatrixTuple& ys, const ComplexMatrix& b,
                               const Exponents& ex);

/// a and b in the unit balls of L_{r0} and L_{r1}.
struct UnitBallPair {
    ComplexMatrix a;
    ComplexMatrix b;
};

/// (sum_k ||a x_k b||_2^2)^{1/2}
double unit_ball_objective(const MatrixTuple& x, const UnitBallPair& pair);

enum class EstimateKind { exact, upper, lower };

std::string to_string(EstimateKind kind);

struct NormEstimate {
    double value = 0;
    EstimateKind kind = EstimateKind::exact;
    std::optional<Factorization> factorization;
    std::optional<UnitBallPair> unit_ball_pair;
    int iterations = 0;
    bool converged = true;
    // Objective after every half-step of the winning restart (alternating solvers only).
    std::vector<double> history;
    std::vector<std::string> warnings;
};

struct SolverConfig {
    double tol = 1e-8;
    int max_iters = 500;
    int restarts = 8;
    double gap_tol = 5e-2;
    std::uint64_t seed = 0;
    // Fourier / boundary parameters used by the oracle and the certificate pipeline.
    int degree = 8;
    int samples = 256;
    int fourier_cutoff = 64;

    bool operator==(const SolverConfig&) const = default;
};

/// Relative reconstruction tolerance for factorization witnesses.
inline constexpr double kFactorizationTolerance = 1e-8;

/**
 * Lower bound on sup (sum_k ||a x_k b||_2^2)^{1/2} over the unit balls of
 * L_{r0} x L_{r1} (p >= 2).
 *
 * With h = a^* a and k = b b^* the objective is tr(h sum_k x_k k x_k^*),
 * linear in each of h and k separately. Each half-step replaces h (resp. k)
 * by the exact maximizer over the PSD unit ball of L_{r0/2} (resp.
 * L_{r1/2}), given by the Hölder-dual power of the current Gram matrix, so
 * the objective never decreases.
 */
NormEstimate alpha_sup(const MatrixTuple& x, Exponent p, double theta, const SolverConfig& cfg = {});

/**
 * Upper bound on inf ||a||_{r0} ||b||_{r1} (sum ||y_k||_2^2)^{1/2} over
 * factorizations x_k = a y_k b (p <= 2), with the factorization as witness.
 *
 * Restricted to positive invertible a, b; then y_k = a^{-1} x_k b^{-1} and,
 * writing h = a^2, k = b^2 normalized to the unit spheres of L_{r0/2} and
 * L_{r1/2}, the squared objective is tr(k^{-1} sum_k x_k^* h^{-1} x_k).
 * Minimizing over k for fixed h has the closed form k ~ G^{1/(s+1)}, so we
 * alternate exact half-steps as in alpha_sup, on an eps-regularized Gram
 * matrix with eps driven towards zero.
 */
NormEstimate alpha_inf(const MatrixTuple& x, Exponent p, double theta, const SolverConfig& cfg = {});

/// Dispatch on the regime; exact l2 value at p = 2.
NormEstimate alpha(const MatrixTuple& x, Exponent p, double theta, const SolverConfig& cfg = {});

/**
 * Lower estimate of alpha_{p,theta}(x) through the dual norm
 * alpha_{p',theta}: |<x, z>| / alpha(z, p', theta) for dual candidates z
 * built from the primal optimizer. For p > 2 the denominator is an
 * alpha_inf upper bound, so the result is a certified lower bound.
 */
NormEstimate dual_norm_estimate(const MatrixTuple& x, Exponent p, double theta, const SolverConfig& cfg = {});

/// Dual candidates used by dual_norm_estimate and the oracle lower bound.
std::vector<MatrixTuple> dual_candidates(const MatrixTuple& x, Exponent p, double theta, const NormEstimate& primal);

}  // namespace ncinterp

#endif  // NCINTERP_VARIATIONAL_HPP
