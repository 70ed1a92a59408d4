#include "ncinterp/tuple_norms.hpp"

#include <cmath>

namespace ncinterp {

double gram_root_norm(const ComplexMatrix& gram, Exponent p)
{
    auto es = hermitian_eigensystem(gram);
    const double top = std::max(es.values.cwiseAbs().maxCoeff(), 1e-300);
    if (es.values.minCoeff() < -kPsdTolerance * top)
        throw InputError("Gram matrix is not positive semidefinite");
    RealVector roots = es.values.cwiseMax(0.0).cwiseSqrt();
    return schatten_norm_of_spectrum(roots, p);
}

double column_norm(const MatrixTuple& x, Exponent p)
{
    return gram_root_norm(x.column_gram(), p);
}

double row_norm(const MatrixTuple& x, Exponent p)
{
    return gram_root_norm(x.row_gram(), p);
}

}  // namespace ncinterp
