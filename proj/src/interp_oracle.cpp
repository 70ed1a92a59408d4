#include "ncinterp/interp_oracle.hpp"

#include "ncinterp/tuple_norms.hpp"

#include <ceres/gradient_problem.h>
#include <ceres/gradient_problem_solver.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ncinterp {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_two(Exponent p)
{
    return p.reciprocal() == 0.5;
}

// One boundary point as seen by the optimizer.
struct Node {
    std::vector<Complex> powers;  // w^1 .. w^M
    bool row_side = false;
    double weight = 0;
};

std::vector<Node> make_nodes(const StripMap& map, int degree)
{
    std::vector<Node> nodes;
    auto add = [&](const BoundarySample& s, bool row_side) {
        Node n;
        n.row_side = row_side;
        n.weight = s.weight;
        Complex power = 1.0;
        for (int m = 1; m <= degree; ++m) {
            power *= s.w;
            n.powers.push_back(power);
        }
        nodes.push_back(std::move(n));
    };
    for (const auto& s : map.edge0())
        add(s, false);
    for (const auto& s : map.edge1())
        add(s, true);
    return nodes;
}

// Smoothed boundary maximum
//
//   S(c) = ( sum_j mu_j N_j(c)^q )^{1/q},   N_j = || G_j^{1/2} ||_P,
//
// where G_j is the column (edge 0) or row (edge 1) Gram matrix of F(w_j) and
// P is p, or the smoothing exponent q when p = inf.
//
// Coefficients are laid out as a (d^2 n) x M complex matrix C whose column m
// stacks vec(c_{m,1}), ..., vec(c_{m,n}); all boundary values are then
// base + C W with W(m, j) = w_j^m, and the gradient is G W^*.
class SmoothedBoundaryMax final : public ceres::FirstOrderFunction {
public:
    SmoothedBoundaryMax(const MatrixTuple& x, const std::vector<Node>& nodes, int degree, Exponent p, double q)
        : nodes_(nodes), degree_(degree), q_(q)
    {
        inner_ = p.is_infinite() ? q : p.value();
        d_ = static_cast<Eigen::Index>(x.dim());
        n_ = static_cast<Eigen::Index>(x.size());
        const Eigen::Index rows = d_ * d_ * n_;
        const auto count = static_cast<Eigen::Index>(nodes.size());
        base_.resize(rows);
        for (Eigen::Index k = 0; k < n_; ++k)
            base_.segment(k * d_ * d_, d_ * d_) = x[static_cast<std::size_t>(k)].reshaped();
        powers_.resize(degree, count);
        for (Eigen::Index j = 0; j < count; ++j)
            for (int m = 0; m < degree; ++m)
                powers_(m, j) = nodes[static_cast<std::size_t>(j)].powers[static_cast<std::size_t>(m)];
        values_.resize(rows, count);
        grads_.resize(rows, count);
        norms_.resize(count);
        weights_.resize(static_cast<std::size_t>(count));
        gram_.resize(d_, d_);
    }

    int NumParameters() const override
    {
        return static_cast<int>(degree_ * n_ * d_ * d_ * 2);
    }

    bool Evaluate(const double* params, double* cost, double* gradient) const override
    {
        const Eigen::Index rows = d_ * d_ * n_;
        const Eigen::Index count = values_.cols();
        Eigen::Map<const Eigen::MatrixXcd> coeffs(reinterpret_cast<const Complex*>(params), rows, degree_);
        values_.noalias() = coeffs * powers_;
        values_.colwise() += base_;

        for (Eigen::Index j = 0; j < count; ++j) {
            const bool row_side = nodes_[static_cast<std::size_t>(j)].row_side;
            gram_.setZero();
            for (Eigen::Index k = 0; k < n_; ++k) {
                Eigen::Map<const Eigen::MatrixXcd> f(values_.col(j).data() + k * d_ * d_, d_, d_);
                if (row_side)
                    gram_.noalias() += f * f.adjoint();
                else
                    gram_.noalias() += f.adjoint() * f;
            }
            eigen_(gram_);
            const RealVector lambda = lambda_.cwiseMax(0.0);
            const double top = lambda.maxCoeff();
            double norm = 0;
            if (top > 0) {
                double acc = 0;
                for (double l : lambda)
                    acc += std::pow(l / top, inner_ / 2);
                norm = std::sqrt(top) * std::pow(acc, 1.0 / inner_);
            }
            norms_[j] = norm;
            if (gradient && norm > 0) {
                // grad_F N = F W (column side) or W F (row side),
                // W = V diag((lambda / N^2)^{P/2 - 1} / N) V^*
                const double n2 = norm * norm;
                RealVector omega(lambda.size());
                for (Eigen::Index i = 0; i < lambda.size(); ++i)
                    omega[i] = std::pow(std::max(lambda[i], 1e-12 * n2) / n2, inner_ / 2 - 1) / norm;
                weights_[static_cast<std::size_t>(j)].noalias() =
                    vectors_ * omega.cast<Complex>().asDiagonal() * vectors_.adjoint();
            }
        }

        const double top = norms_.maxCoeff();
        if (!(top > 0) || !std::isfinite(top)) {
            *cost = top;
            if (gradient)
                std::fill(gradient, gradient + NumParameters(), 0.0);
            return std::isfinite(top);
        }
        double z = 0;
        for (Eigen::Index j = 0; j < count; ++j)
            z += nodes_[static_cast<std::size_t>(j)].weight * std::pow(norms_[j] / top, q_);
        *cost = top * std::pow(z, 1.0 / q_);

        if (gradient) {
            const double denom = std::pow(z, 1.0 - 1.0 / q_);
            for (Eigen::Index j = 0; j < count; ++j) {
                const auto& node = nodes_[static_cast<std::size_t>(j)];
                const double coef =
                    norms_[j] > 0 ? node.weight * std::pow(norms_[j] / top, q_ - 1) / denom : 0.0;
                if (coef < 1e-300) {
                    grads_.col(j).setZero();
                    continue;
                }
                const auto& w = weights_[static_cast<std::size_t>(j)];
                for (Eigen::Index k = 0; k < n_; ++k) {
                    Eigen::Map<const Eigen::MatrixXcd> f(values_.col(j).data() + k * d_ * d_, d_, d_);
                    Eigen::Map<Eigen::MatrixXcd> g(grads_.col(j).data() + k * d_ * d_, d_, d_);
                    if (node.row_side)
                        g.noalias() = coef * (w * f);
                    else
                        g.noalias() = coef * (f * w);
                }
            }
            Eigen::Map<Eigen::MatrixXcd> out(reinterpret_cast<Complex*>(gradient), rows, degree_);
            out.noalias() = grads_ * powers_.adjoint();
        }
        return true;
    }

private:
    // Hermitian eigensystem, closed form for 2 x 2.
    void eigen_(const ComplexMatrix& g) const
    {
        if (g.rows() != 2) {
            solver_.compute(g);
            lambda_ = solver_.eigenvalues();
            vectors_ = solver_.eigenvectors();
            return;
        }
        const double a = g(0, 0).real(), c = g(1, 1).real();
        const Complex b = 0.5 * (g(0, 1) + std::conj(g(1, 0)));
        const double mean = 0.5 * (a + c), half = 0.5 * (a - c);
        const double radius = std::hypot(half, std::abs(b));
        lambda_.resize(2);
        lambda_ << mean - radius, mean + radius;
        vectors_.resize(2, 2);
        if (radius == 0.0) {
            vectors_.setIdentity();
            return;
        }
        // top eigenvector of [[a, b], [conj b, c]]
        Eigen::Vector2cd top;
        if (half >= 0)
            top << half + radius, std::conj(b);
        else
            top << b, radius - half;
        top.normalize();
        vectors_.col(1) = top;
        vectors_(0, 0) = -std::conj(top(1));
        vectors_(1, 0) = std::conj(top(0));
    }

    mutable RealVector lambda_;
    mutable ComplexMatrix vectors_;
    const std::vector<Node>& nodes_;
    int degree_;
    double q_;
    double inner_;
    Eigen::Index d_;
    Eigen::Index n_;
    Eigen::VectorXcd base_;
    Eigen::MatrixXcd powers_;
    mutable Eigen::MatrixXcd values_;
    mutable Eigen::MatrixXcd grads_;
    mutable RealVector norms_;
    mutable std::vector<ComplexMatrix> weights_;
    mutable ComplexMatrix gram_;
    mutable Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver_;
};

std::vector<double> pack(const AnalyticCandidate& f)
{
    const auto& cs = f.coeffs();
    std::vector<double> out;
    for (std::size_t m = 1; m < cs.size(); ++m)
        for (const auto& c : cs[m])
            for (Eigen::Index i = 0; i < c.size(); ++i) {
                out.push_back(c.data()[i].real());
                out.push_back(c.data()[i].imag());
            }
    return out;
}

void unpack(const std::vector<double>& params, AnalyticCandidate& f)
{
    std::size_t pos = 0;
    for (int m = 1; m <= f.degree(); ++m) {
        MatrixTuple& c = f.coefficient(m);
        for (std::size_t k = 0; k < c.size(); ++k)
            for (Eigen::Index i = 0; i < c[k].size(); ++i, pos += 2)
                c[k].data()[i] = Complex(params[pos], params[pos + 1]);
    }
}

struct StepResult {
    AnalyticCandidate candidate;
    double value;
    int iterations;
    bool converged;
};

// Minimizes the boundary maximum at a fixed degree, warm-started from `start`.
StepResult minimize_degree(const AnalyticCandidate& start, const StripMap& map, Exponent p, const SolverConfig& cfg,
                           const std::vector<double>& stages)
{
    const int degree = start.degree();
    StepResult best{start, boundary_max(start, map, p), 0, true};
    if (degree == 0)
        return best;

    const std::vector<Node> nodes = make_nodes(map, degree);
    AnalyticCandidate current = start;
    std::vector<double> params = pack(current);
    bool converged = true;
    for (double q : stages) {
        ceres::GradientProblemSolver::Options options;
        options.line_search_direction_type = ceres::LBFGS;
        options.max_num_iterations = std::max(10, cfg.max_iters);
        options.function_tolerance = q > 1024 ? 1e-14 : 1e-9;
        options.gradient_tolerance = 1e-12;
        options.parameter_tolerance = 1e-12;
        options.logging_type = ceres::SILENT;
        ceres::GradientProblem problem(new SmoothedBoundaryMax(start.base(), nodes, degree, p, q));
        ceres::GradientProblemSolver::Summary summary;
        ceres::Solve(options, problem, params.data(), &summary);
        best.iterations += summary.iterations.empty() ? 0 : static_cast<int>(summary.iterations.size()) - 1;
        converged = summary.termination_type == ceres::CONVERGENCE;
        unpack(params, current);
        const double value = boundary_max(current, map, p);
        if (value < best.value) {
            best.value = value;
            best.candidate = current;
        }
    }
    best.converged = converged;
    return best;
}

}  // namespace

StripMap::StripMap(double theta, int n_samples) : theta_(theta)
{
    if (!(theta > 0.0 && theta < 1.0))
        throw InputError("strip map needs 0 < theta < 1, got " + std::to_string(theta));
    if (n_samples < 16)
        throw InputError("strip map needs at least 16 boundary samples");
    zeta_theta_ = std::polar(1.0, kPi * theta);
    const double junction = junction_angle();
    // Midpoint angles keep the grid symmetric under conjugation and off w = 1.
    for (int j = 0; j < n_samples; ++j) {
        BoundarySample s;
        s.angle = 2 * kPi * (j + 0.5) / n_samples;
        s.w = std::polar(1.0, s.angle);
        s.z = inverse(s.w);
        s.weight = 1.0 / n_samples;
        const double gap = std::abs(s.angle - junction);
        if (gap < 1e-12) {
            edge0_.push_back(s);
            edge1_.push_back(s);
        } else if (s.angle < junction) {
            edge1_.push_back(s);
        } else {
            edge0_.push_back(s);
        }
    }
}

Complex StripMap::forward(Complex z) const
{
    const Complex zeta = std::exp(Complex(0, kPi) * z);
    return (zeta - zeta_theta_) / (zeta - std::conj(zeta_theta_));
}

Complex StripMap::inverse(Complex w) const
{
    const Complex zeta = (zeta_theta_ - w * std::conj(zeta_theta_)) / (1.0 - w);
    // arg in [0, pi] for |w| <= 1; clamp roundoff on the boundary lines
    double arg = std::arg(zeta);
    if (arg < 0)
        arg = std::abs(arg) < 1e-9 ? 0.0 : arg + 2 * kPi;
    return Complex(arg / kPi, -std::log(std::abs(zeta)) / kPi);
}

double StripMap::junction_angle() const
{
    return 2 * kPi * theta_;
}

double StripMap::edge1_weight() const
{
    double s = 0;
    for (const auto& b : edge1_)
        s += b.weight;
    return s;
}

StripMap strip_disk_map(double theta, int n_samples)
{
    return StripMap(theta, n_samples);
}

AnalyticCandidate::AnalyticCandidate(MatrixTuple base, int degree)
{
    if (degree < 0)
        throw InputError("candidate degree must be nonnegative");
    const std::size_t d = base.dim(), n = base.size();
    coeffs_.push_back(std::move(base));
    for (int m = 1; m <= degree; ++m)
        coeffs_.push_back(MatrixTuple::zeros(d, n));
}

MatrixTuple& AnalyticCandidate::coefficient(int m)
{
    if (m < 1 || m > degree())
        throw InputError("coefficient index out of range (the base point is pinned)");
    return coeffs_[static_cast<std::size_t>(m)];
}

MatrixTuple AnalyticCandidate::evaluate(Complex w) const
{
    // Horner
    MatrixTuple acc = coeffs_.back();
    for (int m = degree() - 1; m >= 0; --m) {
        acc *= w;
        acc += coeffs_[static_cast<std::size_t>(m)];
    }
    return acc;
}

AnalyticCandidate AnalyticCandidate::padded(int degree) const
{
    AnalyticCandidate out(base(), std::max(degree, this->degree()));
    for (int m = 1; m <= this->degree(); ++m)
        out.coeffs_[static_cast<std::size_t>(m)] = coeffs_[static_cast<std::size_t>(m)];
    return out;
}

AnalyticCandidate AnalyticCandidate::reflected() const
{
    AnalyticCandidate out = *this;
    for (auto& c : out.coeffs_)
        c = c.adjoint();
    return out;
}

double boundary_max(const AnalyticCandidate& f, const StripMap& map, Exponent p)
{
    double best = 0;
    for (const auto& s : map.edge0())
        best = std::max(best, column_norm(f.evaluate(s.w), p));
    for (const auto& s : map.edge1())
        best = std::max(best, row_norm(f.evaluate(s.w), p));
    return best;
}

namespace {

// Lexicographic order on the entries, used to break the tie at theta = 1/2.
bool precedes(const MatrixTuple& a, const MatrixTuple& b)
{
    for (std::size_t k = 0; k < a.size(); ++k)
        for (Eigen::Index i = 0; i < a[k].size(); ++i) {
            const Complex u = a[k].data()[i], v = b[k].data()[i];
            if (u.real() != v.real())
                return u.real() < v.real();
            if (u.imag() != v.imag())
                return u.imag() < v.imag();
        }
    return false;
}

OracleResult oracle_upper_oriented(const MatrixTuple& x, Exponent p, double theta, int degree, int n_samples,
                                   const SolverConfig& cfg)
{
    if (degree < 0)
        throw InputError("oracle degree must be nonnegative");
    const StripMap map(theta, n_samples);
    const double scale = x.l2_norm();

    OracleResult result{NormEstimate{}, AnalyticCandidate(x, degree), 0, 0};
    result.estimate.kind = EstimateKind::upper;
    if (scale == 0.0) {
        result.estimate.value = 0;
        return result;
    }

    MatrixTuple xs = (1.0 / scale) * x;
    StepResult step{AnalyticCandidate(xs, degree % 2), 0, 0, true};
    step.value = boundary_max(step.candidate, map, p);
    int iterations = 0;
    bool converged = true;
    for (int m = degree % 2; m <= degree; m += 2) {
        if (m == 0)
            continue;
        // The first rung starts from the constant candidate and needs the full
        // smoothing continuation; later rungs are warm-started near the optimum.
        const bool cold = m <= 2;
        std::vector<double> stages = cold ? std::vector<double>{16.0, 64.0, 256.0, 1024.0}
                                          : std::vector<double>{1024.0};
        if (m == degree)
            stages.insert(stages.end(), {4096.0, 16384.0, 65536.0});
        StepResult next = minimize_degree(step.candidate.padded(m), map, p, cfg, stages);
        iterations += next.iterations;
        converged = next.converged;
        if (next.value <= step.value)
            step = std::move(next);
        else
            step.candidate = step.candidate.padded(m);
    }
    step.candidate = step.candidate.padded(degree);

    AnalyticCandidate f(x, degree);
    for (int m = 1; m <= degree; ++m)
        f.coefficient(m) = scale * step.candidate.coeffs()[static_cast<std::size_t>(m)];

    double col = 0, row = 0;
    for (const auto& s : map.edge0())
        col = std::max(col, column_norm(f.evaluate(s.w), p));
    for (const auto& s : map.edge1())
        row = std::max(row, row_norm(f.evaluate(s.w), p));
    result.candidate = std::move(f);
    result.column_side = col;
    result.row_side = row;
    result.estimate.value = std::max(col, row);
    result.estimate.iterations = iterations;
    result.estimate.converged = converged;
    if (!converged)
        result.estimate.warnings.push_back("oracle_upper: smoothing solver stopped before convergence");
    return result;
}

}  // namespace

OracleResult oracle_upper(const MatrixTuple& x, Exponent p, double theta, int degree, int n_samples,
                          const SolverConfig& cfg)
{
    if (!(theta > 0.0 && theta < 1.0))
        throw InputError("oracle_upper needs 0 < theta < 1, got " + std::to_string(theta));
    // (x, theta) and (x^*, 1 - theta) are the same problem under w -> conj w;
    // always solve the canonical one.
    const bool mirror = theta > 0.5 || (theta == 0.5 && precedes(x.adjoint(), x));
    if (!mirror)
        return oracle_upper_oriented(x, p, theta, degree, n_samples, cfg);
    OracleResult r = oracle_upper_oriented(x.adjoint(), p, 1.0 - theta, degree, n_samples, cfg);
    r.candidate = r.candidate.reflected();
    std::swap(r.column_side, r.row_side);
    return r;
}

double duality_ratio(const MatrixTuple& x, const MatrixTuple& z, double dual_upper)
{
    if (!(dual_upper > 0))
        throw InputError("duality_ratio needs a positive dual norm bound");
    return std::abs(trace_pairing(x, z)) / dual_upper;
}

NormEstimate oracle_lower(const MatrixTuple& x, Exponent p, double theta, const SolverConfig& cfg)
{
    if (!(theta > 0.0 && theta < 1.0))
        throw InputError("oracle_lower needs 0 < theta < 1");
    NormEstimate est;
    est.kind = EstimateKind::lower;
    if (is_two(p)) {
        est.value = x.l2_norm();
        est.kind = EstimateKind::exact;
        return est;
    }
    const Exponent q = conjugate_exponent(p);
    const NormEstimate primal = alpha(x, p, theta, cfg);
    const auto candidates = dual_candidates(x, p, theta, primal);
    est.value = 0;
    if (p.reciprocal() < 0.5) {
        for (const auto& z : candidates) {
            if (z.l2_norm() == 0.0)
                continue;
            const NormEstimate dual = alpha_inf(z, q, theta, cfg);
            est.iterations += dual.iterations;
            const double ratio = duality_ratio(x, z, dual.value);
            if (ratio > est.value) {
                est.value = ratio;
                est.factorization = dual.factorization;
                est.converged = dual.converged;
            }
        }
        return est;
    }
    // p < 2: screen candidates with alpha_sup, certify the best one with the
    // oracle, in the same orientation oracle_upper would use.
    if (theta > 0.5 || (theta == 0.5 && precedes(x.adjoint(), x)))
        return oracle_lower(x.adjoint(), p, 1.0 - theta, cfg);
    const MatrixTuple* chosen = nullptr;
    double screen = -1;
    for (const auto& z : candidates) {
        if (z.l2_norm() == 0.0)
            continue;
        const double r = duality_ratio(x, z, alpha_sup(z, q, theta, cfg).value);
        if (r > screen) {
            screen = r;
            chosen = &z;
        }
    }
    if (!chosen)
        return est;
    const OracleResult dual = oracle_upper(*chosen, q, theta, cfg.degree, cfg.samples, cfg);
    est.value = duality_ratio(x, *chosen, dual.estimate.value);
    est.iterations = dual.estimate.iterations;
    est.converged = dual.estimate.converged;
    return est;
}

SandwichReport sandwich(const MatrixTuple& x, Exponent p, double theta, const SolverConfig& cfg)
{
    SandwichReport rep;
    rep.lower = oracle_lower(x, p, theta, cfg);
    rep.alpha = alpha(x, p, theta, cfg);
    rep.upper = oracle_upper(x, p, theta, cfg.degree, cfg.samples, cfg).estimate;
    if (rep.lower.value > rep.upper.value * (1.0 + kSandwichTolerance))
        throw InconsistencyError("sandwich: lower bound " + std::to_string(rep.lower.value) +
                                 " exceeds upper bound " + std::to_string(rep.upper.value));
    const double u = rep.upper.value;
    rep.relative_gap = u > 0 ? std::max(0.0, u - rep.lower.value) / u : 0.0;
    const double width = u - rep.lower.value;
    rep.alpha_position = width > 1e-15 * std::max(u, 1e-300) ? (rep.alpha.value - rep.lower.value) / width : 0.5;
    return rep;
}

}  // namespace ncinterp
