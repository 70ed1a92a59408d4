#ifndef NCINTERP_TUPLE_NORMS_HPP
#define NCINTERP_TUPLE_NORMS_HPP

#include "ncinterp/core.hpp"

namespace ncinterp {

/// || (sum_k x_k^* x_k)^{1/2} ||_p, the norm of C_p^n[L_p].
double column_norm(const MatrixTuple& x, Exponent p);

/// || (sum_k x_k x_k^*)^{1/2} ||_p, the norm of R_p^n[L_p].
double row_norm(const MatrixTuple& x, Exponent p);

/// Schatten norm of G^{1/2} for a PSD Gram matrix G. G is symmetrized first.
double gram_root_norm(const ComplexMatrix& gram, Exponent p);

}  // namespace ncinterp

#endif  // NCINTERP_TUPLE_NORMS_HPP
