#ifndef NCINTERP_CORE_HPP
#define NCINTERP_CORE_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ncinterp {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

// Error hierarchy. Everything thrown by the library derives from Error.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad argument values: non-finite entries, exponents out of range, ...
class InputError : public Error {
public:
    using Error::Error;
};

/// Tuple/matrix dimensions that do not fit together.
class ShapeError : public InputError {
public:
    using InputError::InputError;
};

/// Negative power of a numerically singular matrix.
class SingularityError : public Error {
public:
    using Error::Error;
};

/// Two estimators disagree in a way that weak duality forbids.
class InconsistencyError : public Error {
public:
    using Error::Error;
};

// Exponent in [1, inf]. Infinity is stored exactly, never as a large float;
// the reciprocal is the primary representation so that Hölder arithmetic is
// exact at the endpoints.
class Exponent {
public:
    Exponent() = default;
    explicit Exponent(double value);

    static Exponent infinity() { return from_reciprocal(0.0); }
    static Exponent from_reciprocal(double inverse);

    bool is_infinite() const { return inverse_ == 0.0; }
    double value() const;
    double reciprocal() const { return inverse_; }

    friend bool operator==(const Exponent& a, const Exponent& b) { return a.inverse_ == b.inverse_; }

    std::string to_string() const;

private:
    double inverse_ = 1.0;
};

/// Hölder conjugate, 1/p + 1/p' = 1.
Exponent conjugate_exponent(Exponent p);

/// Parses "inf", integers, decimals and rationals like "4/3".
Exponent parse_exponent(const std::string& text);

// n-tuple of d x d complex matrices.
class MatrixTuple {
public:
    MatrixTuple() = default;
    explicit MatrixTuple(std::vector<ComplexMatrix> entries);
    static MatrixTuple zeros(std::size_t d, std::size_t n);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return entries_.size(); }

    const ComplexMatrix& operator[](std::size_t k) const { return entries_[k]; }
    ComplexMatrix& operator[](std::size_t k) { return entries_[k]; }

    const std::vector<ComplexMatrix>& entries() const { return entries_; }

    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

    /// (x_1^*, ..., x_n^*)
    MatrixTuple adjoint() const;

    /// (sum_k ||x_k||_2^2)^{1/2}
    double l2_norm() const;

    /// sum_k x_k^* x_k
    ComplexMatrix column_gram() const;
    /// sum_k x_k x_k^*
    ComplexMatrix row_gram() const;

    MatrixTuple& operator+=(const MatrixTuple& other);
    MatrixTuple& operator-=(const MatrixTuple& other);
    MatrixTuple& operator*=(Complex scale);

    friend MatrixTuple operator+(MatrixTuple a, const MatrixTuple& b) { return a += b; }
    friend MatrixTuple operator-(MatrixTuple a, const MatrixTuple& b) { return a -= b; }
    friend MatrixTuple operator*(Complex s, MatrixTuple a) { return a *= s; }

    /// (l x_k r)_k
    MatrixTuple sandwiched(const ComplexMatrix& left, const ComplexMatrix& right) const;

    /// max_k ||x_k - y_k||_F / max(1, max_k ||y_k||_F)
    double relative_distance(const MatrixTuple& other) const;

private:
    std::size_t dim_ = 0;
    std::vector<ComplexMatrix> entries_;
};

void require_same_shape(const MatrixTuple& a, const MatrixTuple& b);
void require_finite(const ComplexMatrix& m, const char* what);

/// Singular values, descending.
RealVector singular_values(const ComplexMatrix& m);

/// Schatten p-norm with the unnormalized trace.
double schatten_norm(const ComplexMatrix& m, Exponent p);

/// Schatten norm of a PSD matrix given by its eigenvalues (clamped at 0).
double schatten_norm_of_spectrum(const RealVector& eigenvalues, Exponent p);

inline constexpr double kPsdTolerance = 1e-10;
inline constexpr double kPinvThreshold = 1e-12;

struct Eigensystem {
    RealVector values;      // ascending
    ComplexMatrix vectors;  // columns
};

/// Eigendecomposition of the Hermitian part of m.
Eigensystem hermitian_eigensystem(const ComplexMatrix& m);

/// (m + m^*)/2
ComplexMatrix hermitian_part(const ComplexMatrix& m);

/// m^s for Hermitian PSD m. Eigenvalues in [-tol_psd ||m||, 0] are clamped to
/// zero; more negative ones raise InputError. For s < 0 the smallest
/// eigenvalue has to exceed kPinvThreshold times the largest.
ComplexMatrix psd_power(const ComplexMatrix& m, double s);

/// Applies f to the (clamped) eigenvalues of a PSD matrix.
template <class F>
ComplexMatrix psd_apply(const Eigensystem& es, F&& f)
{
    RealVector mapped(es.values.size());
    for (Eigen::Index i = 0; i < es.values.size(); ++i)
        mapped[i] = f(std::max(es.values[i], 0.0));
    return es.vectors * mapped.asDiagonal() * es.vectors.adjoint();
}

struct PolarDecomposition {
    ComplexMatrix isometry;  // partial isometry u
    ComplexMatrix modulus;   // h = (m^* m)^{1/2}
};

/// m = u h with u a partial isometry supported on the range of h.
PolarDecomposition polar(const ComplexMatrix& m);

/// sum_k tr(y_k^* x_k)
Complex trace_pairing(const MatrixTuple& x, const MatrixTuple& y);

}  // namespace ncinterp

#endif  // NCINTERP_CORE_HPP
