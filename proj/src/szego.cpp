#include "ncinterp/szego.hpp"

#include <unsupported/Eigen/FFT>
#include <unsupported/Eigen/Polynomials>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ncinterp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Fourier coefficients c_m = (1/N) sum_j f_j e^{-i m w_j}, m = 0..N-1 (index
// m >= N/2 holds frequency m - N).
std::vector<ComplexMatrix> to_coefficients(const std::vector<ComplexMatrix>& samples)
{
    const std::size_t n = samples.size();
    const auto rows = samples.front().rows(), cols = samples.front().cols();
    std::vector<ComplexMatrix> out(n, ComplexMatrix(rows, cols));
    Eigen::FFT<double> fft;
    std::vector<Complex> in(n), spec(n);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) {
            for (std::size_t j = 0; j < n; ++j)
                in[j] = samples[j](r, c);
            fft.fwd(spec, in);
            for (std::size_t m = 0; m < n; ++m)
                out[m](r, c) = spec[m] / static_cast<double>(n);
        }
    return out;
}

// f_j = sum_m c_m e^{i m w_j} on n points; coefficients beyond n are ignored.
std::vector<ComplexMatrix> to_samples(const std::vector<ComplexMatrix>& coeffs, std::size_t n)
{
    const auto rows = coeffs.front().rows(), cols = coeffs.front().cols();
    std::vector<ComplexMatrix> out(n, ComplexMatrix(rows, cols));
    Eigen::FFT<double> fft;
    std::vector<Complex> spec(n), vals(n);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) {
            std::fill(spec.begin(), spec.end(), Complex(0));
            for (std::size_t m = 0; m < std::min(n, coeffs.size()); ++m)
                spec[m] = coeffs[m](r, c);
            fft.inv(vals, spec);
            for (std::size_t j = 0; j < n; ++j)
                out[j](r, c) = vals[j] * static_cast<double>(n);
        }
    return out;
}

double operator_norm_hermitian(const ComplexMatrix& m)
{
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

double reconstruction_residual(const std::vector<ComplexMatrix>& phi, const BoundaryFunction& f)
{
    double worst = 0;
    for (std::size_t j = 0; j < f.size(); ++j)
        worst = std::max(worst, operator_norm_hermitian(phi[j] * phi[j].adjoint() - f[j]));
    return worst;
}

// Candidate update Phi [I + step (P_+[g] - I)] with g = Phi^{-1} f Phi^{-*} + I.
// Returns false when some Phi_j is numerically singular.
bool wilson_step(const std::vector<ComplexMatrix>& phi_samples, const BoundaryFunction& f, int cutoff,
                 double step, std::vector<ComplexMatrix>& next_coeffs)
{
    const std::size_t n = f.size();
    const auto d = static_cast<Eigen::Index>(f.dim());
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    std::vector<ComplexMatrix> g(n);
    for (std::size_t j = 0; j < n; ++j) {
        Eigen::PartialPivLU<ComplexMatrix> lu(phi_samples[j]);
        const double det = std::abs(lu.determinant());
        const double scale = std::pow(std::max(phi_samples[j].norm(), 1e-300), static_cast<double>(d));
        if (!(det > 1e-13 * scale))
            return false;
        const ComplexMatrix t = lu.solve(f[j]);
        g[j] = lu.solve(t.adjoint()).adjoint() + id;
    }
    auto gc = to_coefficients(g);
    // causal projection
    ComplexMatrix zero = gc[0];
    for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index c = 0; c < d; ++c)
            zero(r, c) = r < c ? gc[0](r, c) : (r == c ? 0.5 * gc[0](r, c) : Complex(0));
    gc[0] = zero;
    for (std::size_t m = n / 2; m < n; ++m)
        gc[m].setZero();
    auto plus = to_samples(gc, n);
    for (std::size_t j = 0; j < n; ++j)
        plus[j] = phi_samples[j] * (id + step * (plus[j] - id));
    next_coeffs = to_coefficients(plus);
    next_coeffs.resize(static_cast<std::size_t>(cutoff) + 1);
    return true;
}

// Right unitary gauge making Phi(0) positive semidefinite.
void fix_gauge(std::vector<ComplexMatrix>& coeffs)
{
    Eigen::JacobiSVD<ComplexMatrix> svd(coeffs.front(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    const ComplexMatrix v = svd.matrixU() * svd.matrixV().adjoint();
    for (auto& c : coeffs)
        c = c * v.adjoint();
}

}  // namespace

BoundaryFunction::BoundaryFunction(std::vector<ComplexMatrix> samples) : dim_(0), samples_(std::move(samples))
{
    if (!is_power_of_two(samples_.size()))
        throw InputError("boundary function sample count must be a power of two");
    dim_ = static_cast<std::size_t>(samples_.front().rows());
    for (auto& s : samples_) {
        if (static_cast<std::size_t>(s.rows()) != dim_ || s.rows() != s.cols())
            throw ShapeError("boundary samples must be square of a common size");
        require_finite(s, "boundary sample");
        s = hermitian_part(s);
    }
}

double BoundaryFunction::angle(std::size_t j) const
{
    return kTwoPi * static_cast<double>(j) / static_cast<double>(samples_.size());
}

double BoundaryFunction::least_eigenvalue() const
{
    double least = std::numeric_limits<double>::infinity();
    for (const auto& s : samples_) {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(s, Eigen::EigenvaluesOnly);
        least = std::min(least, es.eigenvalues().minCoeff());
    }
    return least;
}

BoundaryFunction BoundaryFunction::conjugated() const
{
    std::vector<ComplexMatrix> c;
    c.reserve(samples_.size());
    for (const auto& s : samples_)
        c.push_back(s.conjugate());
    return BoundaryFunction(std::move(c));
}

BoundaryFunction sample_trig_polynomial(const std::vector<ComplexMatrix>& coeffs, std::size_t n_samples)
{
    if (coeffs.empty())
        throw InputError("trigonometric polynomial needs at least one coefficient");
    if (2 * coeffs.size() > n_samples)
        throw InputError("too few samples for the trigonometric polynomial degree");
    std::vector<ComplexMatrix> full(n_samples, ComplexMatrix::Zero(coeffs[0].rows(), coeffs[0].cols()));
    full[0] = coeffs[0];
    for (std::size_t m = 1; m < coeffs.size(); ++m) {
        full[m] = coeffs[m];
        full[n_samples - m] = coeffs[m].adjoint();
    }
    return BoundaryFunction(to_samples(full, n_samples));
}

ComplexMatrix OuterFactor::evaluate(Complex w) const
{
    ComplexMatrix acc = coeffs_.back();
    for (auto it = coeffs_.rbegin() + 1; it != coeffs_.rend(); ++it)
        acc = acc * w + *it;
    return acc;
}

OuterFactor OuterFactor::transposed() const
{
    std::vector<ComplexMatrix> t;
    t.reserve(coeffs_.size());
    for (const auto& c : coeffs_)
        t.push_back(c.transpose());
    return OuterFactor(std::move(t));
}

WilsonResult wilson_factorize(const BoundaryFunction& f, int cutoff, const SzegoConfig& cfg)
{
    const std::size_t n = f.size();
    if (cutoff < 0)
        throw InputError("cutoff must be nonnegative");
    if (n < 4)
        throw InputError("wilson_factorize needs at least 4 samples");
    cutoff = std::min(cutoff, static_cast<int>(n / 2) - 1);
    const double least = f.least_eigenvalue();
    double scale = 0;
    for (const auto& s : f.samples())
        scale = std::max(scale, operator_norm_hermitian(s));
    if (!(least > 1e-14 * scale))
        throw InputError("wilson_factorize: boundary function is not uniformly positive definite");

    WilsonResult res;
    const auto d = static_cast<Eigen::Index>(f.dim());
    std::vector<ComplexMatrix> coeffs(static_cast<std::size_t>(cutoff) + 1, ComplexMatrix::Zero(d, d));
    {
        ComplexMatrix mean = ComplexMatrix::Zero(d, d);
        for (const auto& s : f.samples())
            mean += s;
        mean /= static_cast<double>(n);
        coeffs[0] = Eigen::LLT<ComplexMatrix>(hermitian_part(mean)).matrixL();
    }
    auto samples = to_samples(coeffs, n);
    double residual = reconstruction_residual(samples, f);
    double best = residual;
    int stall = 0;
    const double target = cfg.tol * std::max(1.0, scale);

    for (int iter = 0; iter < cfg.max_iters && residual > target; ++iter) {
        res.iterations = iter + 1;
        std::vector<ComplexMatrix> next;
        std::vector<ComplexMatrix> next_samples;
        double next_residual = std::numeric_limits<double>::infinity();
        double step = 1.0;
        for (int attempt = 0; attempt < 8; ++attempt, step *= cfg.damping) {
            if (wilson_step(samples, f, cutoff, step, next)) {
                next_samples = to_samples(next, n);
                next_residual = reconstruction_residual(next_samples, f);
                if (next_residual < residual || attempt == 7)
                    break;
            }
            ++res.damped_steps;
        }
        if (next_samples.empty())
            break;
        coeffs = std::move(next);
        samples = std::move(next_samples);
        residual = next_residual;
        if (residual < best * (1 - 1e-3)) {
            best = residual;
            stall = 0;
        } else if (++stall >= 5) {
            break;
        }
    }
    fix_gauge(coeffs);
    res.factor = OuterFactor(std::move(coeffs));
    res.residual = residual;
    res.converged = residual <= target;
    return res;
}

int determinant_winding_number(const OuterFactor& phi, int n_points)
{
    if (n_points <= 0)
        n_points = std::max(1024, 16 * std::max(1, phi.cutoff()) * static_cast<int>(phi.at_origin().rows()));
    auto det_at = [&](int j) {
        const double t = kTwoPi * j / n_points;
        return phi.evaluate(std::polar(1.0, t)).determinant();
    };
    const Complex first = det_at(0);
    if (std::abs(first) == 0.0)
        throw SingularityError("det Phi vanishes on the circle");
    double total = 0;
    Complex prev = first;
    for (int j = 1; j <= n_points; ++j) {
        const Complex cur = j == n_points ? first : det_at(j);
        if (std::abs(cur) == 0.0)
            throw SingularityError("det Phi vanishes on the circle");
        total += std::arg(cur / prev);
        prev = cur;
    }
    return static_cast<int>(std::lround(total / kTwoPi));
}

std::vector<Complex> determinant_zeros(const OuterFactor& phi)
{
    const auto d = static_cast<std::size_t>(phi.at_origin().rows());
    const std::size_t degree = d * static_cast<std::size_t>(std::max(0, phi.cutoff()));
    if (degree == 0)
        return {};
    std::size_t n = 1;
    while (n < degree + 1)
        n *= 2;
    std::vector<ComplexMatrix> dets(n, ComplexMatrix(1, 1));
    for (std::size_t j = 0; j < n; ++j)
        dets[j](0, 0) = phi.evaluate(std::polar(1.0, kTwoPi * j / n)).determinant();
    const auto c = to_coefficients(dets);
    double top = 0;
    for (std::size_t m = 0; m <= degree; ++m)
        top = std::max(top, std::abs(c[m](0, 0)));
    std::size_t deg = degree;
    while (deg > 0 && std::abs(c[deg](0, 0)) <= 1e-10 * top)
        --deg;
    if (deg == 0)
        return {};
    Eigen::VectorXcd poly(static_cast<Eigen::Index>(deg) + 1);
    for (std::size_t m = 0; m <= deg; ++m)
        poly[static_cast<Eigen::Index>(m)] = c[m](0, 0);
    Eigen::PolynomialSolver<Complex, Eigen::Dynamic> solver(poly);
    const auto& roots = solver.roots();
    return {roots.data(), roots.data() + roots.size()};
}

CertificateReport build_certificate(const MatrixTuple& x, Exponent p, double theta, double epsilon,
                                    const SolverConfig& cfg, const SzegoConfig& szego)
{
    if (p.reciprocal() < 0.5)
        throw InputError("build_certificate requires p <= 2");
    if (!(theta > 0.0 && theta < 1.0))
        throw InputError("build_certificate requires 0 < theta < 1");
    const OracleResult oracle = oracle_upper(x, p, theta, cfg.degree, cfg.samples, cfg);
    SzegoConfig sc = szego;
    sc.cutoff = cfg.fourier_cutoff;
    return build_certificate(oracle.candidate, oracle.estimate.value, p, theta, epsilon, sc);
}

CertificateReport build_certificate(const AnalyticCandidate& candidate, double boundary_value, Exponent p,
                                    double theta, double epsilon, const SzegoConfig& szego)
{
    if (p.reciprocal() < 0.5)
        throw InputError("build_certificate requires p <= 2");
    if (!(theta > 0.0 && theta < 1.0))
        throw InputError("build_certificate requires 0 < theta < 1");
    if (!(epsilon > 0.0))
        throw InputError("build_certificate requires epsilon > 0");

    const MatrixTuple& x = candidate.base();
    const Exponents ex = derive_exponents(p, theta);
    CertificateReport rep;
    rep.oracle_value = boundary_value;
    if (boundary_value == 0.0) {
        const auto d = static_cast<Eigen::Index>(x.dim());
        rep.factorization = {ComplexMatrix::Identity(d, d), x, ComplexMatrix::Identity(d, d), 0.0};
        rep.converged = true;
        return rep;
    }

    const auto d = static_cast<Eigen::Index>(x.dim());
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    std::size_t n = 1024;
    while (n < 2 * static_cast<std::size_t>(szego.max_cutoff) + 2)
        n *= 2;
    const double power = 2.0 - 1.0 / p.reciprocal();  // 2 - p
    const double junction = theta * static_cast<double>(n);  // edge 1 is (0, junction) in sample units
    const double half = static_cast<double>(n) / 2;

    for (double eps = epsilon;; eps *= 100) {
        rep.epsilon = eps;
        std::vector<ComplexMatrix> a2(n), b2(n);
        double contractivity = 0;
        bool singular = false;
        for (std::size_t j = 0; j < n && !singular; ++j) {
            const double u = static_cast<double>(j);
            MatrixTuple fj = candidate.evaluate(std::polar(1.0, kTwoPi * u / n));
            fj *= Complex(1.0 / boundary_value);
            // signed distance to the nearest junction, positive on the edge-1 side
            double da = u >= half ? u - n : u;
            double db = junction - u;
            if (db < -half)
                db += n;
            const double delta = std::abs(da) < std::abs(db) ? da : db;
            const double tau = std::clamp((delta + 2.0) / 4.0, 0.0, 1.0);

            ComplexMatrix a_sq = id, b_sq = id;
            try {
                if (tau < 1.0) {
                    const ComplexMatrix g = eps * id + fj.column_gram();
                    const ComplexMatrix xinv = psd_power(g, -0.5);
                    contractivity = std::max(contractivity,
                                             operator_norm_hermitian(xinv * fj.column_gram() * xinv));
                    b_sq = (1 - tau) * psd_power(g, power / 2) + tau * id;
                }
                if (tau > 0.0) {
                    const ComplexMatrix g = eps * id + fj.row_gram();
                    const ComplexMatrix xinv = psd_power(g, -0.5);
                    contractivity = std::max(contractivity,
                                             operator_norm_hermitian(xinv * fj.row_gram() * xinv));
                    a_sq = (1 - tau) * id + tau * psd_power(g, power / 2);
                }
            } catch (const SingularityError&) {
                singular = true;
            }
            a2[j] = a_sq;
            b2[j] = b_sq;
        }
        if (singular) {
            if (eps > 1e-2)
                throw SingularityError("build_certificate: boundary data singular even after raising epsilon");
            continue;
        }
        rep.contractivity = contractivity;

        const BoundaryFunction fa(std::move(a2));
        const BoundaryFunction fb = BoundaryFunction(std::move(b2)).conjugated();
        auto factor = [&](const BoundaryFunction& f) {
            WilsonResult w;
            for (int cutoff = szego.cutoff;; cutoff *= 2) {
                w = wilson_factorize(f, cutoff, szego);
                if (w.converged || cutoff * 2 > szego.max_cutoff)
                    return w;
            }
        };
        rep.left = factor(fa);
        rep.right = factor(fb);

        const ComplexMatrix a = rep.left.factor.at_origin();
        const ComplexMatrix b = rep.right.factor.transposed().at_origin();
        Eigen::PartialPivLU<ComplexMatrix> la(a), lb(b.adjoint());
        MatrixTuple ys = x;
        for (std::size_t k = 0; k < x.size(); ++k) {
            const ComplexMatrix t = la.solve(x[k]);
            ys[k] = lb.solve(t.adjoint()).adjoint();
        }
        Factorization fac{a, ys, b, 0.0};
        fac.objective = factorization_objective(a, ys, b, ex);
        rep.reconstruction = fac.product().relative_distance(x);
        rep.objective = fac.objective;
        rep.eta = fac.objective / boundary_value - 1.0;
        rep.factorization = std::move(fac);
        rep.converged = rep.left.converged && rep.right.converged;
        return rep;
    }
}

}  // namespace ncinterp
