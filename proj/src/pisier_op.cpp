#include "ncinterp/pisier_op.hpp"

#include "ncinterp/random.hpp"

#include <algorithm>
#include <cmath>

namespace ncinterp {

namespace {

// Duality map of S_p: the unit-norm element of S_{p'} that norms z.
ComplexMatrix duality_element(const ComplexMatrix& z, Exponent p)
{
    auto pd = polar(z);
    const double norm = schatten_norm(z, p);
    if (norm == 0.0)
        return ComplexMatrix::Zero(z.rows(), z.cols());
    if (p.is_infinite()) {
        // top singular subspace, trace-normalized
        auto es = hermitian_eigensystem(pd.modulus);
        const double top = es.values.maxCoeff();
        RealVector w = RealVector::Zero(es.values.size());
        int mult = 0;
        for (Eigen::Index i = 0; i < w.size(); ++i)
            if (es.values[i] >= top * (1 - 1e-12)) {
                w[i] = 1;
                ++mult;
            }
        w /= mult;
        return pd.isometry * es.vectors * w.cast<Complex>().asDiagonal() * es.vectors.adjoint();
    }
    if (p.reciprocal() == 1.0)
        return pd.isometry;
    auto es = hermitian_eigensystem(pd.modulus / norm);
    const double q = p.value() - 1.0;
    return pd.isometry * psd_apply(es, [q](double v) { return v > 0 ? std::pow(v, q) : 0.0; });
}

bool is_completely_positive(const Superoperator& t)
{
    auto es = hermitian_eigensystem(t.choi());
    const double top = std::max(es.values.cwiseAbs().maxCoeff(), 1e-300);
    return es.values.minCoeff() >= -1e-10 * top;
}

}  // namespace

Superoperator::Superoperator(ComplexMatrix matrix, std::optional<MatrixTuple> kraus)
    : dim_(0), matrix_(std::move(matrix)), kraus_(std::move(kraus))
{
    if (matrix_.rows() != matrix_.cols())
        throw ShapeError("superoperator matrix must be square");
    const auto d = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(matrix_.rows()))));
    if (d * d != static_cast<std::size_t>(matrix_.rows()) || d == 0)
        throw ShapeError("superoperator matrix size must be a perfect square");
    dim_ = d;
    require_finite(matrix_, "superoperator");
    if (kraus_ && kraus_->dim() != dim_)
        throw ShapeError("Kraus tuple dimension does not match the superoperator");
}

ComplexMatrix vec(const ComplexMatrix& m)
{
    return m.reshaped();  // column-major storage = column stacking
}

ComplexMatrix unvec(const ComplexMatrix& v, std::size_t d)
{
    const auto n = static_cast<Eigen::Index>(d);
    if (v.size() != n * n)
        throw ShapeError("unvec: size mismatch");
    return v.reshaped(n, n);
}

ComplexMatrix Superoperator::apply(const ComplexMatrix& y) const
{
    if (static_cast<std::size_t>(y.rows()) != dim_ || static_cast<std::size_t>(y.cols()) != dim_)
        throw ShapeError("superoperator applied to a matrix of the wrong size");
    return unvec(matrix_ * vec(y), dim_);
}

Superoperator Superoperator::adjoint() const
{
    std::optional<MatrixTuple> k;
    if (kraus_)
        k = kraus_->adjoint();
    return Superoperator(matrix_.adjoint(), std::move(k));
}

ComplexMatrix Superoperator::choi() const
{
    const auto d = static_cast<Eigen::Index>(dim_);
    ComplexMatrix c(d * d, d * d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) {
            ComplexMatrix e = ComplexMatrix::Zero(d, d);
            e(i, j) = 1.0;
            c.block(i * d, j * d, d, d) = apply(e);
        }
    return c;
}

Superoperator build_superoperator(const MatrixTuple& x)
{
    const auto d = static_cast<Eigen::Index>(x.dim());
    ComplexMatrix m = ComplexMatrix::Zero(d * d, d * d);
    for (const auto& xk : x) {
        // L_{x^*} R_{x}: y -> x^* y x, i.e. x^T (x) x^*
        const ComplexMatrix left = xk.adjoint();
        const ComplexMatrix right = xk.transpose();
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j)
                m.block(i * d, j * d, d, d) += right(i, j) * left;
    }
    return Superoperator(std::move(m), x);
}

NormEstimate superop_norm(const Superoperator& t, Exponent p, const SolverConfig& cfg)
{
    NormEstimate est;
    const auto d = static_cast<Eigen::Index>(t.dim());
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    if (p.reciprocal() == 0.5) {
        Eigen::JacobiSVD<ComplexMatrix> svd(t.matrix());
        est.value = svd.singularValues()[0];
        est.kind = EstimateKind::exact;
        return est;
    }
    if (p.is_infinite() || p.reciprocal() == 1.0) {
        // Russo-Dye: a positive map attains its L_inf norm at the identity.
        if (!t.kraus() && !is_completely_positive(t))
            throw InputError("endpoint superoperator norms are only implemented for completely positive maps");
        const Superoperator& side = p.is_infinite() ? t : t.adjoint();
        ComplexMatrix image = t.kraus() ? (p.is_infinite() ? t.kraus()->column_gram() : t.kraus()->row_gram())
                                        : side.apply(id);
        est.value = schatten_norm(image, Exponent::infinity());
        est.kind = EstimateKind::exact;
        return est;
    }

    const Exponent q = conjugate_exponent(p);
    const Superoperator adj = t.adjoint();
    Rng rng(cfg.seed ^ 0x9015E7ull);
    est.kind = EstimateKind::lower;
    est.value = 0;
    est.converged = false;
    for (int restart = 0; restart < std::max(1, cfg.restarts); ++restart) {
        ComplexMatrix y = restart == 0 ? id : random_psd(rng, t.dim());
        y /= schatten_norm(y, p);
        double previous = -1, value = 0;
        bool converged = false;
        int iter = 0;
        for (; iter < cfg.max_iters; ++iter) {
            const ComplexMatrix z = t.apply(y);
            value = schatten_norm(z, p);
            if (previous >= 0 && std::abs(value - previous) <= cfg.tol * value) {
                converged = true;
                break;
            }
            previous = value;
            const ComplexMatrix v = adj.apply(duality_element(z, p));
            ComplexMatrix next = duality_element(v, q);
            const double n = schatten_norm(next, p);
            if (n == 0.0)
                break;
            y = next / n;
        }
        est.iterations += iter;
        if (value > est.value) {
            est.value = value;
            est.converged = converged;
        }
    }
    if (!est.converged)
        est.warnings.push_back("power iteration did not converge within max_iters");
    return est;
}

CorollaryReport corollary_check(const MatrixTuple& x, double theta, const SolverConfig& cfg)
{
    if (!(theta > 0.0 && theta < 1.0))
        throw InputError("corollary_check requires 0 < theta < 1");
    CorollaryReport rep;
    rep.theta = theta;
    rep.p = Exponent::from_reciprocal(theta);
    const NormEstimate a = alpha_sup(x, Exponent::infinity(), theta, cfg);
    const NormEstimate s = superop_norm(build_superoperator(x), rep.p, cfg);
    rep.alpha_squared = a.value * a.value;
    rep.superop = s.value;
    rep.superop_kind = s.kind;
    rep.deviation = s.value > 0 ? std::abs(rep.alpha_squared - s.value) / s.value : std::abs(rep.alpha_squared);
    rep.converged = a.converged && s.converged;
    return rep;
}

}  // namespace ncinterp
