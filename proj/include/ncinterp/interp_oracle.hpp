#ifndef NCINTERP_INTERP_ORACLE_HPP
#define NCINTERP_INTERP_ORACLE_HPP

#include "ncinterp/core.hpp"
#include "ncinterp/variational.hpp"

#include <vector>

namespace ncinterp {

struct BoundarySample {
    double angle = 0;   // disk angle phi, w = e^{i phi}
    Complex w;          // point on the unit circle
    Complex z;          // preimage on the boundary of the strip
    double weight = 0;  // quadrature weight (harmonic measure at w = 0)
};

/**
 * Conformal map from the strip {0 <= Re z <= 1} onto the closed unit disk,
 * sending theta to 0:
 *
 *   zeta = exp(i pi z),   w = (zeta - zeta_theta) / (zeta - conj(zeta_theta)).
 *
 * The line Re z = 0 goes to the arc of angles (2 pi theta, 2 pi) and
 * Re z = 1 to (0, 2 pi theta); the harmonic measure of the latter seen from
 * w = 0 is theta. The C-norm lives on Re z = 0 and the R-norm on Re z = 1, so
 * theta -> 0 recovers the column space.
 */
class StripMap {
public:
    StripMap(double theta, int n_samples);

    double theta() const { return theta_; }

    Complex forward(Complex z) const;
    Complex inverse(Complex w) const;

    /// Samples on the image of Re z = 0 (column side).
    const std::vector<BoundarySample>& edge0() const { return edge0_; }
    /// Samples on the image of Re z = 1 (row side).
    const std::vector<BoundarySample>& edge1() const { return edge1_; }

    /// End angle of the edge-1 arc (0, 2 pi theta).
    double junction_angle() const;

    /// Total quadrature weight of the edge-1 samples.
    double edge1_weight() const;

private:
    double theta_;
    Complex zeta_theta_;
    std::vector<BoundarySample> edge0_;
    std::vector<BoundarySample> edge1_;
};

StripMap strip_disk_map(double theta, int n_samples);

// F(w) = x + sum_{m=1}^{M} c_m w^m in the disk variable, so F(theta) = x.
class AnalyticCandidate {
public:
    AnalyticCandidate(MatrixTuple base, int degree);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const MatrixTuple& base() const { return coeffs_.front(); }

    /// coeffs()[0] is the pinned base point x.
    const std::vector<MatrixTuple>& coeffs() const { return coeffs_; }
    MatrixTuple& coefficient(int m);

    MatrixTuple evaluate(Complex w) const;

    /// Same candidate padded with zero coefficients up to the given degree.
    AnalyticCandidate padded(int degree) const;

    /// G(w) = F(conj w)^*, the candidate for the adjoint tuple.
    AnalyticCandidate reflected() const;

private:
    std::vector<MatrixTuple> coeffs_;
};

/// max over edge0 of column_norm(F, p) and over edge1 of row_norm(F, p).
double boundary_max(const AnalyticCandidate& f, const StripMap& map, Exponent p);

struct OracleResult {
    NormEstimate estimate;
    AnalyticCandidate candidate;
    double column_side = 0;  // max column norm over edge 0
    double row_side = 0;     // max row norm over edge 1
};

/**
 * Upper bound on the (C_p^n, R_p^n)_theta norm of x: minimizes the boundary
 * maximum over polynomial candidates of the given degree with F(theta) = x.
 *
 * The objective is convex in the coefficients. It is smoothed by a power
 * mean over the boundary samples (and, for p = inf, a large Schatten
 * exponent in place of the operator norm) and minimized with L-BFGS under a
 * continuation in the smoothing exponent, pushed to 65536 on the last rung.
 * Degrees are solved as a warm-started ladder degree mod 2, ..., degree - 2,
 * degree, so that raising the degree by two never increases the returned
 * value. (x, theta) and (x^*, 1 - theta) are the same problem; the one with
 * theta < 1/2 is the one solved.
 */
OracleResult oracle_upper(const MatrixTuple& x, Exponent p, double theta, int degree, int n_samples,
                          const SolverConfig& cfg = {});

/// |<x, z>| / upper, the quantity maximized by oracle_lower.
double duality_ratio(const MatrixTuple& x, const MatrixTuple& z, double dual_upper);

/**
 * Lower bound on the interpolation norm by duality with the couple of
 * conjugate index: |<x, z>| / (upper bound on ||z||_{p', theta}). For p > 2
 * the denominator is an alpha_inf factorization (Hölder gives
 * ||z||_{p',theta} <= alpha_{p',theta}(z)); for p < 2 it is oracle_upper at
 * p'. Either way the bound does not depend on the equality being tested.
 */
NormEstimate oracle_lower(const MatrixTuple& x, Exponent p, double theta, const SolverConfig& cfg = {});

struct SandwichReport {
    NormEstimate lower;
    NormEstimate alpha;
    NormEstimate upper;
    double relative_gap = 0;      // (upper - lower) / upper
    double alpha_position = 0;    // (alpha - lower) / (upper - lower), 0.5 when the gap closes
};

inline constexpr double kSandwichTolerance = 1e-6;

/// Runs all three estimators. Throws InconsistencyError if lower > upper (1 + 1e-6).
SandwichReport sandwich(const MatrixTuple& x, Exponent p, double theta, const SolverConfig& cfg = {});

}  // namespace ncinterp

#endif  // NCINTERP_INTERP_ORACLE_HPP
