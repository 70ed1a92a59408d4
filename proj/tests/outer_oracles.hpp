#ifndef NCINTERP_TESTS_OUTER_ORACLES_HPP
#define NCINTERP_TESTS_OUTER_ORACLES_HPP

#include "support.hpp"

#include "ncinterp/szego.hpp"

#include <limits>
#include <numbers>

namespace testing {

inline ComplexMatrix horner(const std::vector<ComplexMatrix>& c, Complex w)
{
    ComplexMatrix acc = c.back();
    for (auto it = c.rbegin() + 1; it != c.rend(); ++it)
        acc = acc * w + *it;
    return acc;
}

// Accumulated change of arg det Phi around the circle of radius r, in turns.
inline double winding(const std::vector<ComplexMatrix>& c, double r, int n)
{
    double total = 0;
    Complex prev = horner(c, r).determinant();
    for (int j = 1; j <= n; ++j) {
        const Complex cur = horner(c, std::polar(r, 2 * std::numbers::pi * j / n)).determinant();
        total += std::arg(cur / prev);
        prev = cur;
    }
    return total / (2 * std::numbers::pi);
}

// Smallest |det Phi| on a polar grid of the closed disk.
inline double min_det_modulus(const std::vector<ComplexMatrix>& c)
{
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 20; ++i)
        for (int j = 0; j < 128; ++j)
            best = std::min(best, std::abs(horner(c, std::polar(i / 20.0, 2 * std::numbers::pi * j / 128)).determinant()));
    return best;
}

inline double max_residual(const OuterFactor& phi, const BoundaryFunction& f)
{
    double worst = 0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        const ComplexMatrix v = phi.evaluate(std::polar(1.0, f.angle(j)));
        worst = std::max(worst, schatten_norm(v * v.adjoint() - f[j], Exponent::infinity()));
    }
    return worst;
}

inline std::vector<ComplexMatrix> random_positive_coeffs(Rng& rng, std::size_t d, int degree)
{
    // Q(w) Q(w)^* + 0.05 I with Q of the given degree.
    std::vector<ComplexMatrix> q;
    for (int m = 0; m <= degree; ++m)
        q.push_back(random_gaussian(rng, d) / std::sqrt(double(degree + 1)));
    std::vector<ComplexMatrix> c(static_cast<std::size_t>(degree) + 1, ComplexMatrix::Zero(d, d));
    for (int m = 0; m <= degree; ++m)
        for (int l = 0; l + m <= degree; ++l)
            c[m] += q[l + m] * q[l].adjoint();
    c[0] += 0.05 * ComplexMatrix::Identity(d, d);
    return c;
}

}  // namespace testing

#endif  // NCINTERP_TESTS_OUTER_ORACLES_HPP
