#include "ncinterp/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ncinterp {

Exponent::Exponent(double value)
{
    if (std::isinf(value) && value > 0) {
        inverse_ = 0.0;
        return;
    }
    if (!std::isfinite(value) || value < 1.0)
        throw InputError("exponent must lie in [1, inf], got " + std::to_string(value));
    inverse_ = 1.0 / value;
}

Exponent Exponent::from_reciprocal(double inverse)
{
    if (!std::isfinite(inverse) || inverse < 0.0 || inverse > 1.0 + 1e-15)
        throw InputError("exponent reciprocal must lie in [0, 1], got " + std::to_string(inverse));
    Exponent e;
    e.inverse_ = std::min(inverse, 1.0);
    return e;
}

double Exponent::value() const
{
    return is_infinite() ? std::numeric_limits<double>::infinity() : 1.0 / inverse_;
}

std::string Exponent::to_string() const
{
    if (is_infinite())
        return "inf";
    std::ostringstream os;
    os.precision(17);
    os << value();
    return os.str();
}

Exponent conjugate_exponent(Exponent p)
{
    return Exponent::from_reciprocal(1.0 - p.reciprocal());
}

Exponent parse_exponent(const std::string& text)
{
    if (text == "inf" || text == "infinity" || text == "Inf")
        return Exponent::infinity();
    auto parse_number = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            throw InputError("cannot parse exponent '" + text + "'");
        }
        if (used != s.size())
            throw InputError("cannot parse exponent '" + text + "'");
        return v;
    };
    if (auto slash = text.find('/'); slash != std::string::npos) {
        double num = parse_number(text.substr(0, slash));
        double den = parse_number(text.substr(slash + 1));
        if (num <= 0 || den <= 0)
            throw InputError("cannot parse exponent '" + text + "'");
        // keep the reciprocal exact for rationals such as 4/3
        return Exponent::from_reciprocal(den / num);
    }
    return Exponent(parse_number(text));
}

MatrixTuple::MatrixTuple(std::vector<ComplexMatrix> entries) : entries_(std::move(entries))
{
    if (entries_.empty())
        throw ShapeError("matrix tuple must have at least one entry");
    dim_ = static_cast<std::size_t>(entries_.front().rows());
    if (dim_ == 0)
        throw ShapeError("matrix dimension must be positive");
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        const auto& m = entries_[k];
        if (static_cast<std::size_t>(m.rows()) != dim_ || static_cast<std::size_t>(m.cols()) != dim_)
            throw ShapeError("tuple entry " + std::to_string(k) + " is " + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()) + ", expected " + std::to_string(dim_) + "x" +
                             std::to_string(dim_));
        require_finite(m, "tuple entry");
    }
}

MatrixTuple MatrixTuple::zeros(std::size_t d, std::size_t n)
{
    const auto di = static_cast<Eigen::Index>(d);
    return MatrixTuple(std::vector<ComplexMatrix>(n, ComplexMatrix::Zero(di, di)));
}

MatrixTuple MatrixTuple::adjoint() const
{
    MatrixTuple out = *this;
    for (auto& m : out.entries_)
        m.adjointInPlace();
    return out;
}

double MatrixTuple::l2_norm() const
{
    double s = 0;
    for (const auto& m : entries_)
        s += m.squaredNorm();
    return std::sqrt(s);
}

ComplexMatrix MatrixTuple::column_gram() const
{
    const auto d = static_cast<Eigen::Index>(dim_);
    ComplexMatrix g = ComplexMatrix::Zero(d, d);
    for (const auto& m : entries_)
        g.noalias() += m.adjoint() * m;
    return g;
}

ComplexMatrix MatrixTuple::row_gram() const
{
    const auto d = static_cast<Eigen::Index>(dim_);
    ComplexMatrix g = ComplexMatrix::Zero(d, d);
    for (const auto& m : entries_)
        g.noalias() += m * m.adjoint();
    return g;
}

MatrixTuple& MatrixTuple::operator+=(const MatrixTuple& other)
{
    require_same_shape(*this, other);
    for (std::size_t k = 0; k < entries_.size(); ++k)
        entries_[k] += other.entries_[k];
    return *this;
}

MatrixTuple& MatrixTuple::operator-=(const MatrixTuple& other)
{
    require_same_shape(*this, other);
    for (std::size_t k = 0; k < entries_.size(); ++k)
        entries_[k] -= other.entries_[k];
    return *this;
}

MatrixTuple& MatrixTuple::operator*=(Complex scale)
{
    for (auto& m : entries_)
        m *= scale;
    return *this;
}

MatrixTuple MatrixTuple::sandwiched(const ComplexMatrix& left, const ComplexMatrix& right) const
{
    MatrixTuple out = *this;
    for (auto& m : out.entries_)
        m = left * m * right;
    return out;
}

double MatrixTuple::relative_distance(const MatrixTuple& other) const
{
    require_same_shape(*this, other);
    double diff = 0, scale = 1.0;
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        diff = std::max(diff, (entries_[k] - other.entries_[k]).norm());
        scale = std::max(scale, other.entries_[k].norm());
    }
    return diff / scale;
}

void require_same_shape(const MatrixTuple& a, const MatrixTuple& b)
{
    if (a.dim() != b.dim() || a.size() != b.size())
        throw ShapeError("tuple shapes differ: (d=" + std::to_string(a.dim()) + ", n=" + std::to_string(a.size()) +
                         ") vs (d=" + std::to_string(b.dim()) + ", n=" + std::to_string(b.size()) + ")");
}

void require_finite(const ComplexMatrix& m, const char* what)
{
    if (!m.allFinite())
        throw InputError(std::string(what) + " has non-finite entries");
}

RealVector singular_values(const ComplexMatrix& m)
{
    require_finite(m, "matrix");
    if (m.rows() != m.cols())
        throw ShapeError("expected a square matrix");
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    return svd.singularValues();
}

double schatten_norm_of_spectrum(const RealVector& eigenvalues, Exponent p)
{
    double top = 0;
    for (double s : eigenvalues)
        top = std::max(top, std::abs(s));
    if (top == 0.0 || p.is_infinite())
        return top;
    const double q = p.value();
    double acc = 0;
    for (double s : eigenvalues)
        acc += std::pow(std::abs(s) / top, q);
    return top * std::pow(acc, p.reciprocal());
}

double schatten_norm(const ComplexMatrix& m, Exponent p)
{
    return schatten_norm_of_spectrum(singular_values(m), p);
}

ComplexMatrix hermitian_part(const ComplexMatrix& m)
{
    return 0.5 * (m + m.adjoint());
}

Eigensystem hermitian_eigensystem(const ComplexMatrix& m)
{
    require_finite(m, "matrix");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m));
    return {es.eigenvalues(), es.eigenvectors()};
}

ComplexMatrix psd_power(const ComplexMatrix& m, double s)
{
    if (m.rows() != m.cols())
        throw ShapeError("psd_power expects a square matrix");
    auto es = hermitian_eigensystem(m);
    const double top = es.values.cwiseAbs().maxCoeff();
    const double floor = -kPsdTolerance * std::max(top, 1e-300);
    if (es.values.size() > 0 && es.values.minCoeff() < floor)
        throw InputError("psd_power: matrix has eigenvalue " + std::to_string(es.values.minCoeff()) +
                         " below -tol_psd");
    if (s == 0.0)
        return ComplexMatrix::Identity(m.rows(), m.cols());
    if (s < 0.0) {
        const double least = es.values.minCoeff();
        if (top == 0.0 || least <= kPinvThreshold * top)
            throw SingularityError("psd_power: negative power of a numerically singular matrix");
    }
    if (s == 1.0)
        return psd_apply(es, [](double v) { return v; });
    return psd_apply(es, [s](double v) { return v == 0.0 ? 0.0 : std::pow(v, s); });
}

PolarDecomposition polar(const ComplexMatrix& m)
{
    require_finite(m, "matrix");
    Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double top = sv.size() ? sv[0] : 0.0;
    const double cut = top * 1e-14;
    ComplexMatrix u = ComplexMatrix::Zero(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > cut)
            u.noalias() += svd.matrixU().col(i) * svd.matrixV().col(i).adjoint();
    ComplexMatrix h = svd.matrixV() * sv.cast<Complex>().asDiagonal() * svd.matrixV().adjoint();
    return {u, hermitian_part(h)};
}

Complex trace_pairing(const MatrixTuple& x, const MatrixTuple& y)
{
    require_same_shape(x, y);
    Complex s = 0;
    for (std::size_t k = 0; k < x.size(); ++k)
        s += (y[k].adjoint() * x[k]).trace();
    return s;
}

}  // namespace ncinterp
