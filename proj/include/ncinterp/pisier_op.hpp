#ifndef NCINTERP_PISIER_OP_HPP
#define NCINTERP_PISIER_OP_HPP

#include "ncinterp/core.hpp"
#include "ncinterp/variational.hpp"

#include <optional>

namespace ncinterp {

// The map y -> sum_k x_k^* y x_k as a d^2 x d^2 matrix acting on
// column-stacked vec(y), using vec(a y b) = (b^T (x) a) vec(y).
class Superoperator {
public:
    explicit Superoperator(ComplexMatrix matrix, std::optional<MatrixTuple> kraus = std::nullopt);

    std::size_t dim() const { return dim_; }
    const ComplexMatrix& matrix() const { return matrix_; }

    /// Kraus tuple x when the operator was built from one.
    const std::optional<MatrixTuple>& kraus() const { return kraus_; }

    ComplexMatrix apply(const ComplexMatrix& y) const;

    /// Adjoint for the trace pairing <y, z> = tr(z^* y).
    Superoperator adjoint() const;

    /// Choi-type reshuffle sum_k vec(x_k^*) vec(x_k^*)^*, PSD iff completely positive.
    ComplexMatrix choi() const;

private:
    std::size_t dim_;
    ComplexMatrix matrix_;
    std::optional<MatrixTuple> kraus_;
};

ComplexMatrix vec(const ComplexMatrix& m);
ComplexMatrix unvec(const ComplexMatrix& v, std::size_t d);

Superoperator build_superoperator(const MatrixTuple& x);

/**
 * Norm of T on S_p(M_d).
 *
 * p = 2: largest singular value (exact). For completely positive T built
 * from a Kraus tuple, p = inf gives ||T(1)||_inf and p = 1 gives
 * ||T^*(1)||_inf (exact). Otherwise a nonlinear power iteration on the PSD
 * cone, y -> T(y) -> dual element -> T^*(.) -> dual element, which is a
 * lower bound.
 */
NormEstimate superop_norm(const Superoperator& t, Exponent p, const SolverConfig& cfg = {});

struct CorollaryReport {
    double theta = 0.5;
    Exponent p;
    double alpha_squared = 0;
    double superop = 0;
    EstimateKind superop_kind = EstimateKind::exact;
    double deviation = 0;  // |alpha^2 - superop| / superop
    bool converged = true;
};

/// alpha_sup(x, inf, theta)^2 against ||sum L_{x_k^*} R_{x_k}||_{B(L_{1/theta})}.
CorollaryReport corollary_check(const MatrixTuple& x, double theta, const SolverConfig& cfg = {});

}  // namespace ncinterp

#endif  // NCINTERP_PISIER_OP_HPP
