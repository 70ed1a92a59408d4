#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "support.hpp"

#include "ncinterp/pisier_op.hpp"
#include "ncinterp/variational.hpp"

using namespace testing;

namespace {

ComplexMatrix direct_apply(const MatrixTuple& x, const ComplexMatrix& y)
{
    ComplexMatrix out = ComplexMatrix::Zero(y.rows(), y.cols());
    for (const auto& m : x)
        out += m.adjoint() * y * m;
    return out;
}

double top_singular_value(const ComplexMatrix& m)
{
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m.adjoint() * m);
    return std::sqrt(es.eigenvalues().maxCoeff());
}

}  // namespace

TEST_CASE("vec convention")
{
    Rng rng(51);
    const ComplexMatrix a = random_gaussian(rng, 3), y = random_gaussian(rng, 3), b = random_gaussian(rng, 3);
    ComplexMatrix kron(9, 9);
    for (Eigen::Index i = 0; i < 3; ++i)
        for (Eigen::Index j = 0; j < 3; ++j)
            kron.block(i * 3, j * 3, 3, 3) = b.transpose()(i, j) * a;
    CHECK((kron * vec(y) - vec(a * y * b)).norm() < 1e-12);
    CHECK((unvec(vec(y), 3) - y).norm() == 0.0);
    CHECK(vec(y)(1) == y(1, 0));
    CHECK_THROWS_AS(unvec(vec(y), 2), ShapeError);
}

TEST_CASE("superoperator construction")
{
    const ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);
    const Superoperator ident = build_superoperator(tuple_of({id2}));
    CHECK((ident.matrix() - ComplexMatrix::Identity(4, 4)).norm() < 1e-15);

    const Superoperator pinch = build_superoperator(tuple_of({unit(0, 0, 2), unit(1, 1, 2)}));
    const ComplexMatrix& m = pinch.matrix();
    CHECK((m * m - m).norm() < 1e-15);
    CHECK((m - m.adjoint()).norm() < 1e-15);
    CHECK(std::abs(m.trace() - 2.0) < 1e-15);
    Rng rng(52);
    const ComplexMatrix y = random_gaussian(rng, 2);
    ComplexMatrix diag = ComplexMatrix::Zero(2, 2);
    diag(0, 0) = y(0, 0);
    diag(1, 1) = y(1, 1);
    CHECK((pinch.apply(y) - diag).norm() < 1e-15);

    for (int t = 0; t < 10; ++t) {
        const MatrixTuple x = random_tuple(rng, 3, 3);
        const Superoperator op = build_superoperator(x);
        const ComplexMatrix z = random_gaussian(rng, 3);
        CHECK((op.apply(z) - direct_apply(x, z)).norm() <= 1e-12 * std::max(1.0, z.norm() * x.l2_norm() * x.l2_norm()));
        CHECK((op.apply(ComplexMatrix::Identity(3, 3)) - x.column_gram()).norm() < 1e-12 * x.column_gram().norm());
        // complete positivity: Choi matrix PSD; PSD inputs stay PSD
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> choi(op.choi());
        CHECK(choi.eigenvalues().minCoeff() >= -1e-10 * choi.eigenvalues().maxCoeff());
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> image(op.apply(random_psd(rng, 3)));
        CHECK(image.eigenvalues().minCoeff() >= -1e-10 * image.eigenvalues().maxCoeff());
        // trace duality: tr(T(y) w^*) = tr(y T^*(w)^*)
        const ComplexMatrix w = random_gaussian(rng, 3);
        CHECK(std::abs((op.apply(z) * w.adjoint()).trace() - (z * op.adjoint().apply(w).adjoint()).trace()) < 1e-10);
    }
    CHECK_THROWS_AS(Superoperator(ComplexMatrix::Identity(5, 5)), ShapeError);
}

TEST_CASE("superoperator norms")
{
    const Superoperator ident = build_superoperator(tuple_of({ComplexMatrix::Identity(2, 2)}));
    for (const Exponent& p : all_exponents())
        CHECK(superop_norm(ident, p).value == doctest::Approx(1.0).epsilon(1e-9));

    const Superoperator op = build_superoperator(column_pair());
    const NormEstimate two = superop_norm(op, Exponent(2.0));
    CHECK(two.kind == EstimateKind::exact);
    CHECK(two.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(two.value == doctest::Approx(top_singular_value(op.matrix())).epsilon(1e-12));
    const ComplexMatrix half = ComplexMatrix::Identity(2, 2) / std::sqrt(2.0);
    CHECK(schatten_norm(op.apply(half), Exponent(2.0)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(superop_norm(op, Exponent::infinity()).value == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(superop_norm(op, Exponent(1.0)).value == doctest::Approx(1.0).epsilon(1e-12));

    Rng rng(53);
    for (int t = 0; t < 10; ++t) {
        const Superoperator s = build_superoperator(random_tuple(rng, 2, 3));
        const double n1 = superop_norm(s, Exponent(1.0)).value;
        const double ninf = superop_norm(s, Exponent::infinity()).value;
        for (double p : {1.5, 3.0}) {
            const NormEstimate est = superop_norm(s, Exponent(p));
            CHECK(est.kind == EstimateKind::lower);
            CHECK(est.value <= std::pow(n1, 1 / p) * std::pow(ninf, 1 - 1 / p) * (1 + 1e-9));
            const double adj = superop_norm(s.adjoint(), conjugate_exponent(Exponent(p))).value;
            CHECK(rel_err(est.value, adj) < 1e-6);
        }
        CHECK(rel_err(superop_norm(s.adjoint(), Exponent(1.0)).value, ninf) < 1e-12);
    }
}

TEST_CASE("squared interpolation norm equals the superoperator norm")
{
    CorollaryReport r = corollary_check(column_pair(), 0.5);
    CHECK(r.alpha_squared == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
    CHECK(r.deviation <= 1e-6);

    r = corollary_check(tuple_of({ComplexMatrix::Identity(3, 3)}), 0.5);
    CHECK(r.alpha_squared == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.superop == doctest::Approx(1.0).epsilon(1e-12));

    Rng rng(54);
    for (int t = 0; t < 20; ++t) {
        const MatrixTuple x = random_tuple(rng, 1 + t % 3, 1 + t % 4);
        CHECK(corollary_check(x, 0.5).deviation <= 1e-6);
    }
    for (int t = 0; t < 5; ++t) {
        r = corollary_check(random_tuple(rng, 2, 2), 1.0 / 3);
        CHECK(r.deviation <= 0.05);
        CHECK(r.superop <= r.alpha_squared * (1 + 1e-6));
    }
    CHECK_THROWS_AS(corollary_check(column_pair(), 0.0), InputError);
}
