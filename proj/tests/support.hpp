#ifndef NCINTERP_TESTS_SUPPORT_HPP
#define NCINTERP_TESTS_SUPPORT_HPP

#include "ncinterp/core.hpp"
#include "ncinterp/random.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

namespace testing {

using namespace ncinterp;

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline ComplexMatrix unit(Eigen::Index i, Eigen::Index j, Eigen::Index d)
{
    ComplexMatrix e = ComplexMatrix::Zero(d, d);
    e(i, j) = 1.0;
    return e;
}

// Schatten norm from the eigenvalues of m^* m, without any SVD.
inline double brute_schatten(const ComplexMatrix& m, Exponent p)
{
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m.adjoint() * m);
    std::vector<double> s;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        s.push_back(std::sqrt(std::max(0.0, es.eigenvalues()[i])));
    if (p.is_infinite())
        return *std::max_element(s.begin(), s.end());
    double acc = 0;
    for (double v : s)
        acc += std::pow(v, p.value());
    return std::pow(acc, 1.0 / p.value());
}

// Schatten norm of the square root of a PSD matrix, by eigenvalues.
inline double brute_gram_norm(const ComplexMatrix& gram, Exponent p)
{
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gram);
    double top = 0, acc = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double s = std::sqrt(std::max(0.0, es.eigenvalues()[i]));
        top = std::max(top, s);
        if (!p.is_infinite())
            acc += std::pow(s, p.value());
    }
    return p.is_infinite() ? top : std::pow(acc, 1.0 / p.value());
}

// sum_k sum_ij conj(y_k(i,j)) x_k(i,j)
inline Complex elementwise_pairing(const MatrixTuple& x, const MatrixTuple& y)
{
    Complex acc = 0;
    for (std::size_t k = 0; k < x.size(); ++k)
        for (Eigen::Index i = 0; i < x[k].rows(); ++i)
            for (Eigen::Index j = 0; j < x[k].cols(); ++j)
                acc += std::conj(y[k](i, j)) * x[k](i, j);
    return acc;
}

inline MatrixTuple tuple_of(std::initializer_list<ComplexMatrix> ms) { return MatrixTuple(std::vector<ComplexMatrix>(ms)); }

// (e11, e21) in M_2: column Gram 2 e11, row Gram I.
inline MatrixTuple column_pair() { return tuple_of({unit(0, 0, 2), unit(1, 0, 2)}); }

inline double l2(const MatrixTuple& x)
{
    double acc = 0;
    for (const auto& m : x)
        acc += m.squaredNorm();
    return std::sqrt(acc);
}

inline std::vector<Exponent> all_exponents()
{
    return {Exponent(1.0), Exponent::from_reciprocal(0.75), Exponent(2.0), Exponent(4.0), Exponent::infinity()};
}

}  // namespace testing

#endif  // NCINTERP_TESTS_SUPPORT_HPP
