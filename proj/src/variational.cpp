#include "ncinterp/variational.hpp"

#include "ncinterp/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ncinterp {

namespace {

bool is_two(Exponent p)
{
    return p.reciprocal() == 0.5;
}

// L_{r/2} for r >= 2, as an exponent in [1, inf].
Exponent half_exponent(Exponent r)
{
    return Exponent::from_reciprocal(2.0 * r.reciprocal());
}

double trace_real(const ComplexMatrix& m)
{
    return m.trace().real();
}

// Maximizer of tr(h G) over PSD h with ||h||_s <= 1, s = ball. Returns the
// maximal value. A degenerate top eigenvalue (s = 1) is resolved by spreading
// weight uniformly over the whole top eigenspace.
double sup_half_step(const ComplexMatrix& gram, Exponent ball, ComplexMatrix& out)
{
    const auto d = gram.rows();
    const Exponent dual = conjugate_exponent(ball);
    if (dual.reciprocal() == 1.0) {  // ball = L_inf
        out = ComplexMatrix::Identity(d, d);
        return std::max(trace_real(gram), 0.0);
    }
    auto es = hermitian_eigensystem(gram);
    RealVector lambda = es.values.cwiseMax(0.0);
    const double top = lambda.maxCoeff();
    if (top <= 0.0) {
        out = ComplexMatrix::Identity(d, d) / std::pow(static_cast<double>(d), ball.reciprocal());
        return 0.0;
    }
    if (dual.is_infinite()) {  // ball = L_1, weight on the top eigenspace
        RealVector w = RealVector::Zero(d);
        int mult = 0;
        for (Eigen::Index i = 0; i < d; ++i)
            if (lambda[i] >= top * (1.0 - 1e-12)) {
                w[i] = 1.0;
                ++mult;
            }
        w /= mult;
        out = es.vectors * w.cast<Complex>().asDiagonal() * es.vectors.adjoint();
        return top;
    }
    const double t = dual.value();
    // h = G^{t-1} / ||G^{t-1}||_s and ||G^{t-1}||_s^s = tr G^t.
    RealVector scaled = lambda / top;
    RealVector powered(d);
    double trace_t = 0;
    for (Eigen::Index i = 0; i < d; ++i) {
        powered[i] = scaled[i] > 0 ? std::pow(scaled[i], t - 1.0) : 0.0;
        trace_t += scaled[i] > 0 ? std::pow(scaled[i], t) : 0.0;
    }
    const double norm = std::pow(trace_t, ball.reciprocal());
    powered /= norm;
    out = es.vectors * powered.cast<Complex>().asDiagonal() * es.vectors.adjoint();
    return top * std::pow(trace_t, dual.reciprocal());
}

// Minimizer of tr(k^{-1} G) over PD k with ||k||_s = 1 for PD G:
// k = G^{1/(s+1)} / ||G^{1/(s+1)}||_s.
ComplexMatrix inf_half_step(const ComplexMatrix& gram, Exponent ball)
{
    const auto d = gram.rows();
    const double sigma = ball.reciprocal();
    if (sigma == 0.0)
        return ComplexMatrix::Identity(d, d);
    auto es = hermitian_eigensystem(gram);
    RealVector lambda = es.values.cwiseMax(0.0);
    const double top = lambda.maxCoeff();
    const double e = sigma / (1.0 + sigma);
    RealVector powered(d);
    double acc = 0;
    for (Eigen::Index i = 0; i < d; ++i) {
        powered[i] = std::pow(std::max(lambda[i] / top, 1e-300), e);
        acc += std::pow(powered[i], ball.value());
    }
    powered /= std::pow(acc, sigma);
    return es.vectors * powered.cast<Complex>().asDiagonal() * es.vectors.adjoint();
}

ComplexMatrix regularized(const ComplexMatrix& gram, double eps)
{
    ComplexMatrix g = hermitian_part(gram);
    const double scale = std::max(g.cwiseAbs().maxCoeff(), 1e-300);
    g.diagonal().array() += eps * scale;
    return g;
}

ComplexMatrix psd_normalized(const ComplexMatrix& m, Exponent s)
{
    const double norm = schatten_norm(m, s);
    return norm > 0 ? ComplexMatrix(m / norm) : m;
}

ComplexMatrix inverse_pd(const ComplexMatrix& m)
{
    auto es = hermitian_eigensystem(m);
    return psd_apply(es, [](double v) { return 1.0 / std::max(v, 1e-300); });
}

// sum_k x_k^* h x_k
ComplexMatrix column_weighted(const MatrixTuple& x, const ComplexMatrix& h)
{
    const auto d = static_cast<Eigen::Index>(x.dim());
    ComplexMatrix g = ComplexMatrix::Zero(d, d);
    for (const auto& m : x)
        g.noalias() += m.adjoint() * h * m;
    return hermitian_part(g);
}

// sum_k x_k k x_k^*
ComplexMatrix row_weighted(const MatrixTuple& x, const ComplexMatrix& k)
{
    const auto d = static_cast<Eigen::Index>(x.dim());
    ComplexMatrix g = ComplexMatrix::Zero(d, d);
    for (const auto& m : x)
        g.noalias() += m * k * m.adjoint();
    return hermitian_part(g);
}

NormEstimate exact_l2(const MatrixTuple& x)
{
    NormEstimate est;
    est.value = x.l2_norm();
    est.kind = EstimateKind::exact;
    const auto d = static_cast<Eigen::Index>(x.dim());
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    est.factorization = Factorization{id, x, id, est.value};
    est.unit_ball_pair = UnitBallPair{id, id};
    est.iterations = 0;
    est.converged = true;
    return est;
}

}  // namespace

Exponents derive_exponents(Exponent p, double theta)
{
    if (!(theta >= 0.0 && theta <= 1.0))
        throw InputError("theta must lie in [0, 1], got " + std::to_string(theta));
    Exponents ex;
    ex.p = p;
    ex.p_conj = conjugate_exponent(p);
    ex.theta = theta;
    // 1/max(p, p') = min(1/p, 1/p')
    const double inv_max = std::min(p.reciprocal(), ex.p_conj.reciprocal());
    const double inv_r = std::max(0.0, 1.0 - 2.0 * inv_max);
    ex.r = Exponent::from_reciprocal(inv_r);
    ex.r0 = Exponent::from_reciprocal(theta * inv_r / 2.0);
    ex.r1 = Exponent::from_reciprocal((1.0 - theta) * inv_r / 2.0);
    return ex;
}

double factorization_objective(const ComplexMatrix& a, const MatrixTuple& ys, const ComplexMatrix& b,
                               const Exponents& ex)
{
    return schatten_norm(a, ex.r0) * schatten_norm(b, ex.r1) * ys.l2_norm();
}

double unit_ball_objective(const MatrixTuple& x, const UnitBallPair& pair)
{
    return x.sandwiched(pair.a, pair.b).l2_norm();
}

std::string to_string(EstimateKind kind)
{
    switch (kind) {
    case EstimateKind::exact: return "exact";
    case EstimateKind::upper: return "upper";
    case EstimateKind::lower: return "lower";
    }
    return "exact";
}

NormEstimate alpha_sup(const MatrixTuple& x, Exponent p, double theta, const SolverConfig& cfg)
{
    if (p.reciprocal() > 0.5)
        throw InputError("alpha_sup requires p >= 2");
    const Exponents ex = derive_exponents(p, theta);
    const Exponent ball_a = half_exponent(ex.r0);
    const Exponent ball_b = half_exponent(ex.r1);
    const auto d = static_cast<Eigen::Index>(x.dim());

    const double scale = x.l2_norm();
    if (scale == 0.0)
        return exact_l2(x);
    MatrixTuple xs = (1.0 / scale) * x;

    Rng rng(cfg.seed ^ 0x5eedA17Aull);
    NormEstimate best;
    best.kind = EstimateKind::lower;
    best.value = -1;
    bool all_monotone = true;
    int total_iters = 0;

    const int restarts = std::max(1, cfg.restarts);
    for (int restart = 0; restart < restarts; ++restart) {
        ComplexMatrix k = restart == 0 ? ComplexMatrix(ComplexMatrix::Identity(d, d)) : random_psd(rng, x.dim());
        k = psd_normalized(k, ball_b);
        ComplexMatrix h;
        std::vector<double> history;
        double previous = -1;
        bool converged = false;
        int iter = 0;
        for (; iter < cfg.max_iters; ++iter) {
            const double after_h = sup_half_step(row_weighted(xs, k), ball_a, h);
            const double after_k = sup_half_step(column_weighted(xs, h), ball_b, k);
            if (!history.empty() && after_h < history.back() * (1.0 - 1e-12))
                all_monotone = false;
            if (after_k < after_h * (1.0 - 1e-12))
                all_monotone = false;
            history.push_back(after_h);
            history.push_back(after_k);
            if (previous >= 0 && std::abs(after_k - previous) <= cfg.tol * std::max(after_k, 1e-300)) {
                converged = true;
                ++iter;
                break;
            }
            previous = after_k;
        }
        total_iters += iter;
        UnitBallPair pair{psd_power(h, 0.5), psd_power(k, 0.5)};
        const double value = unit_ball_objective(xs, pair);
        if (value > best.value) {
            best.value = value;
            best.unit_ball_pair = pair;
            best.converged = converged;
            best.history = history;
            for (auto& v : best.history)
                v = scale * std::sqrt(std::max(v, 0.0));
        }
    }
    best.value *= scale;
    best.iterations = total_iters;
    if (!all_monotone)
        best.warnings.push_back("alternating objective decreased across a half-step");
    if (!best.converged)
        best.warnings.push_back("alpha_sup did not converge within max_iters");
    return best;
}

NormEstimate alpha_inf(const MatrixTuple& x, Exponent p, double theta, const SolverConfig& cfg)
{
    if (p.reciprocal() < 0.5)
        throw InputError("alpha_inf requires p <= 2");
    const Exponents ex = derive_exponents(p, theta);
    const Exponent ball_a = half_exponent(ex.r0);
    const Exponent ball_b = half_exponent(ex.r1);
    const auto d = static_cast<Eigen::Index>(x.dim());

    const double scale = x.l2_norm();
    if (scale == 0.0)
        return exact_l2(x);
    MatrixTuple xs = (1.0 / scale) * x;

    constexpr double kEpsSchedule[] = {1e-6, 1e-9, 1e-12};
    constexpr double kCondMax = 1e12;

    Rng rng(cfg.seed ^ 0x1AF1A17Aull);
    NormEstimate best;
    best.kind = EstimateKind::upper;
    best.value = std::numeric_limits<double>::infinity();
    int total_iters = 0;

    const int restarts = std::max(1, cfg.restarts);
    for (int restart = 0; restart < restarts; ++restart) {
        ComplexMatrix k;
        if (restart == 0) {
            // b0 = (eps + sum x^* x)^{p/(2 r1)}, which is exact for n = 1.
            ComplexMatrix g = regularized(xs.column_gram(), kEpsSchedule[0]);
            k = psd_power(g, p.value() * ex.r1.reciprocal());
        } else {
            k = random_psd(rng, x.dim());
            k = regularized(k, 1e-3);
        }
        k = psd_normalized(k, ball_b);
        ComplexMatrix h = ComplexMatrix::Identity(d, d);
        std::vector<double> history;
        bool converged = false;
        for (double eps : kEpsSchedule) {
            double previous = -1;
            converged = false;
            for (int iter = 0; iter < cfg.max_iters; ++iter, ++total_iters) {
                const ComplexMatrix row = row_weighted(xs, inverse_pd(k));
                h = inf_half_step(regularized(row, eps), ball_a);
                const ComplexMatrix col = column_weighted(xs, inverse_pd(h));
                k = inf_half_step(regularized(col, eps), ball_b);
                const double value = trace_real(inverse_pd(k) * col);
                history.push_back(value);
                if (previous >= 0 && std::abs(value - previous) <= cfg.tol * value) {
                    converged = true;
                    break;
                }
                previous = value;
            }
        }
        ComplexMatrix a = psd_power(h, 0.5);
        ComplexMatrix b = psd_power(k, 0.5);
        auto ea = hermitian_eigensystem(a);
        auto eb = hermitian_eigensystem(b);
        std::vector<std::string> warnings;
        if (ea.values.maxCoeff() > kCondMax * ea.values.minCoeff() ||
            eb.values.maxCoeff() > kCondMax * eb.values.minCoeff())
            warnings.push_back("ill-conditioned factor in alpha_inf witness");
        const ComplexMatrix a_inv = psd_apply(ea, [](double v) { return 1.0 / v; });
        const ComplexMatrix b_inv = psd_apply(eb, [](double v) { return 1.0 / v; });
        MatrixTuple ys = xs.sandwiched(a_inv, b_inv);
        const double objective = factorization_objective(a, ys, b, ex);
        if (objective < best.value) {
            best.value = objective;
            best.converged = converged;
            best.history = history;
            for (auto& v : best.history)
                v = scale * std::sqrt(std::max(v, 0.0));
            best.warnings = warnings;
            // rescale y so that a y b reproduces x itself
            best.factorization = Factorization{a, scale * ys, b, objective * scale};
        }
    }
    best.value *= scale;
    best.iterations = total_iters;
    const double residual = best.factorization->product().relative_distance(x);
    if (residual > kFactorizationTolerance)
        best.warnings.push_back("alpha_inf witness reconstructs x only to " + std::to_string(residual));
    if (!best.converged)
        best.warnings.push_back("alpha_inf did not converge within max_iters");
    return best;
}

NormEstimate alpha(const MatrixTuple& x, Exponent p, double theta, const SolverConfig& cfg)
{
    derive_exponents(p, theta);
    if (is_two(p))
        return exact_l2(x);
    return p.reciprocal() < 0.5 ? alpha_sup(x, p, theta, cfg) : alpha_inf(x, p, theta, cfg);
}

std::vector<MatrixTuple> dual_candidates(const MatrixTuple& x, Exponent p, double theta, const NormEstimate& primal)
{
    (void)theta;
    std::vector<MatrixTuple> out{x};
    if (is_two(p))
        return out;
    if (p.reciprocal() < 0.5 && primal.unit_ball_pair) {
        // z = a^2 x b^2 saturates <x, z> = alpha(x)^2 at the optimal (a, b).
        const auto& pair = *primal.unit_ball_pair;
        out.push_back(x.sandwiched(pair.a * pair.a, pair.b * pair.b));
    } else if (p.reciprocal() > 0.5 && primal.factorization) {
        // z = a^{-2} x b^{-2} = a^{-1} y b^{-1}
        const auto& f = *primal.factorization;
        const ComplexMatrix a_inv = psd_power(f.a, -1.0);
        const ComplexMatrix b_inv = psd_power(f.b, -1.0);
        out.push_back(f.ys.sandwiched(a_inv, b_inv));
    }
    return out;
}

NormEstimate dual_norm_estimate(const MatrixTuple& x, Exponent p, double theta, const SolverConfig& cfg)
{
    const Exponent q = conjugate_exponent(p);
    if (is_two(p)) {
        NormEstimate est = exact_l2(x);
        est.factorization.reset();
        est.unit_ball_pair.reset();
        return est;
    }
    const NormEstimate primal = alpha(x, p, theta, cfg);
    NormEstimate best;
    best.kind = EstimateKind::lower;
    best.value = 0;
    best.converged = true;
    for (const auto& z : dual_candidates(x, p, theta, primal)) {
        if (z.l2_norm() == 0.0)
            continue;
        const NormEstimate dual = alpha(z, q, theta, cfg);
        best.iterations += dual.iterations;
        if (dual.value <= 0)
            continue;
        const double ratio = std::abs(trace_pairing(x, z)) / dual.value;
        if (ratio > best.value) {
            best.value = ratio;
            best.converged = dual.converged;
            best.factorization = dual.factorization;
            best.unit_ball_pair = dual.unit_ball_pair;
        }
    }
    if (p.reciprocal() > 0.5)
        best.warnings.push_back("denominator is a lower estimate of alpha_{p',theta}; bound is not certified");
    return best;
}

}  // namespace ncinterp
