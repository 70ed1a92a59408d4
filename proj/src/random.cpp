#include "ncinterp/random.hpp"

#include <cmath>
#include <numbers>

namespace ncinterp {

Family parse_family(const std::string& name)
{
    if (name == "gaussian")
        return Family::gaussian;
    if (name == "psd")
        return Family::psd;
    if (name == "unitary")
        return Family::unitary;
    throw InputError("unknown instance family '" + name + "'");
}

std::string to_string(Family f)
{
    switch (f) {
    case Family::gaussian: return "gaussian";
    case Family::psd: return "psd";
    case Family::unitary: return "unitary";
    }
    return "gaussian";
}

ComplexMatrix random_gaussian(Rng& rng, std::size_t d)
{
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    const auto n = static_cast<Eigen::Index>(d);
    ComplexMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const double re = normal(rng);
            const double im = normal(rng);
            m(i, j) = Complex(re, im);
        }
    return m;
}

ComplexMatrix random_psd(Rng& rng, std::size_t d)
{
    ComplexMatrix g = random_gaussian(rng, d);
    return hermitian_part(g * g.adjoint() / static_cast<double>(d));
}

ComplexMatrix random_unitary(Rng& rng, std::size_t d)
{
    ComplexMatrix g = random_gaussian(rng, d);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < q.cols(); ++i) {
        const Complex diag = r(i, i);
        const double mod = std::abs(diag);
        if (mod > 0)
            q.col(i) *= diag / mod;
    }
    return q;
}

ComplexMatrix random_matrix(Rng& rng, std::size_t d, Family family)
{
    switch (family) {
    case Family::gaussian: return random_gaussian(rng, d);
    case Family::psd: return random_psd(rng, d);
    case Family::unitary: return random_unitary(rng, d);
    }
    return random_gaussian(rng, d);
}

MatrixTuple random_tuple(Rng& rng, std::size_t d, std::size_t n, Family family)
{
    std::vector<ComplexMatrix> entries;
    entries.reserve(n);
    for (std::size_t k = 0; k < n; ++k)
        entries.push_back(random_matrix(rng, d, family));
    return MatrixTuple(std::move(entries));
}

Complex random_scalar(Rng& rng)
{
    std::uniform_real_distribution<double> modulus(0.1, 3.0);
    std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
    return std::polar(modulus(rng), angle(rng));
}

}  // namespace ncinterp
