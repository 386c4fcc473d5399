#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qficoh/convexroof.hpp"
#include "qficoh/qfi.hpp"

using namespace qficoh;

namespace {

Matrix projector(int d, int j) {
    Matrix p = Matrix::Zero(d, d);
    p(j, j) = 1.0;
    return p;
}

DensityMatrix plus_state() {
    Matrix m(2, 2);
    m << 0.5, 0.5, 0.5, 0.5;
    return DensityMatrix::validate(m);
}

Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

} // namespace

TEST_CASE("qfi vanishes on the maximally mixed state") {
    for (int d = 2; d <= 5; ++d) {
        const DensityMatrix rho = DensityMatrix::validate(Matrix::Identity(d, d) / d);
        auto rng = make_engine(d);
        CHECK(qfi(rho, random_hermitian(d, rng)) <= 1e-12);
    }
}

TEST_CASE("qfi of |+> against |0><0| is 1") {
    CHECK(qfi(plus_state(), projector(2, 0)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("qfi of the rank-2 qutrit witness against |0><0| is 4/9") {
    const RoofGapWitness witness = roof_gap_witness();
    CHECK(qfi(witness.state, projector(3, 0)) == doctest::Approx(4.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("pure_qfi matches the variance form") {
    Vector e0(2);
    e0 << 1.0, 0.0;
    CHECK(pure_qfi(e0, projector(2, 0)) == doctest::Approx(0.0));

    Vector plus(2);
    plus << 1.0, 1.0;
    plus /= std::sqrt(2.0);
    CHECK(pure_qfi(plus, projector(2, 0)) == doctest::Approx(1.0).epsilon(1e-12));

    Vector uniform(3);
    uniform << 1.0, 1.0, 1.0;
    uniform /= std::sqrt(3.0);
    CHECK(pure_qfi(uniform, projector(3, 0)) == doctest::Approx(8.0 / 9.0).epsilon(1e-12));

    CHECK_THROWS_AS(pure_qfi(2.0 * plus, projector(2, 0)), NotNormalized);
}

TEST_CASE("z_matrix closed forms") {
    // Pure state: <psi|A|psi> times the projector onto psi.
    const DensityMatrix plus = plus_state();
    const Matrix z_pure = z_matrix(plus, projector(2, 0));
    CHECK((z_pure - 0.5 * plus.matrix()).norm() <= 1e-10);

    // Maximally mixed qubit with sigma_x: uniform coefficient 1/sqrt2.
    const DensityMatrix mixed = DensityMatrix::validate(Matrix::Identity(2, 2) / 2.0);
    const Matrix z_mixed = z_matrix(mixed, pauli_x());
    CHECK((z_mixed - pauli_x() / std::sqrt(2.0)).norm() <= 1e-10);

    // Identity observable: tr(Z^2) = 1 and the QFI vanishes.
    const DensityMatrix rho = random_state(4, 4, 2);
    const Matrix z_id = z_matrix(rho, Matrix::Identity(4, 4));
    CHECK((z_id * z_id).trace().real() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(qfi(rho, Matrix::Identity(4, 4)) <= 1e-12);
}

TEST_CASE("qfi_via_z agrees with the spectral route") {
    CHECK(qfi_via_z(plus_state(), projector(2, 0)) == doctest::Approx(1.0).epsilon(1e-10));

    const DensityMatrix mixed = DensityMatrix::validate(Matrix::Identity(3, 3) / 3.0);
    auto rng = make_engine(15);
    CHECK(std::abs(qfi_via_z(mixed, random_hermitian(3, rng))) <= 1e-10);

    for (int trial = 0; trial < 200; ++trial) {
        auto trng = make_engine(derive_seed(61, static_cast<std::uint64_t>(trial)));
        const int d = 2 + static_cast<int>(trng() % 4);
        const int rank = 1 + static_cast<int>(trng() % d);
        const DensityMatrix rho = random_state(d, rank, derive_seed(67, trial));
        const Matrix a = random_hermitian(d, trng);
        const double direct = qfi(rho, a);
        CHECK(std::abs(qfi_via_z(rho, a) - direct) <= 1e-9 * (1.0 + std::abs(direct)));
    }
}

TEST_CASE("qfi is invariant under joint unitary conjugation") {
    for (int trial = 0; trial < 200; ++trial) {
        auto rng = make_engine(derive_seed(71, static_cast<std::uint64_t>(trial)));
        const int d = 2 + static_cast<int>(rng() % 5);
        const int rank = 1 + static_cast<int>(rng() % d);
        const DensityMatrix rho = random_state(d, rank, derive_seed(73, trial));
        const Matrix a = random_hermitian(d, rng);
        const Matrix u = random_unitary(d, rng);
        const DensityMatrix rotated =
            DensityMatrix::validate(u * rho.matrix() * u.adjoint());
        const double before = qfi(rho, a);
        const double after = qfi(rotated, u * a * u.adjoint());
        CHECK(std::abs(after - before) <= 1e-9 * (1.0 + std::abs(before)));
    }
}

TEST_CASE("qfi is convex in the state") {
    for (int trial = 0; trial < 200; ++trial) {
        auto rng = make_engine(derive_seed(79, static_cast<std::uint64_t>(trial)));
        const int d = 2 + static_cast<int>(rng() % 4);
        const DensityMatrix rho1 = random_state(d, d, derive_seed(83, trial));
        const DensityMatrix rho2 = random_state(d, 1 + static_cast<int>(rng() % d),
                                                derive_seed(89, trial));
        const Matrix a = random_hermitian(d, rng);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        const double p = unif(rng);
        const DensityMatrix mix =
            DensityMatrix::validate(p * rho1.matrix() + (1.0 - p) * rho2.matrix());
        CHECK(qfi(mix, a) <= p * qfi(rho1, a) + (1.0 - p) * qfi(rho2, a) + 1e-9);
    }
}

TEST_CASE("qfi on rank-1 states equals pure_qfi") {
    for (int trial = 0; trial < 100; ++trial) {
        auto rng = make_engine(derive_seed(97, static_cast<std::uint64_t>(trial)));
        const int d = 2 + static_cast<int>(rng() % 5);
        const DensityMatrix rho = random_state(d, 1, derive_seed(101, trial));
        const Matrix a = random_hermitian(d, rng);
        const Vector psi = rho.spectrum().eigenvectors.col(0);
        CHECK(std::abs(qfi(rho, a) - pure_qfi(psi, a)) <= 1e-10);
    }
}

TEST_CASE("qfi is stable under degenerate-eigenvalue perturbations") {
    // Terms between equal eigenvalues carry zero numerator, so a 1e-13 split
    // of a degenerate pair must not move the value.
    for (int trial = 0; trial < 50; ++trial) {
        auto rng = make_engine(derive_seed(103, static_cast<std::uint64_t>(trial)));
        const Matrix u = random_unitary(4, rng);
        RealVector lam(4);
        lam << 0.4, 0.4, 0.15, 0.05;
        const DensityMatrix rho = DensityMatrix::from_eigensystem(lam, u);
        RealVector bumped = lam;
        bumped[0] += 1e-13;
        bumped[1] -= 1e-13;
        const DensityMatrix rho_bumped = DensityMatrix::from_eigensystem(bumped, u);
        const Matrix a = random_hermitian(4, rng);
        CHECK(std::abs(qfi(rho, a) - qfi(rho_bumped, a)) <= 1e-8);
    }
}

TEST_CASE("qfi rejects mismatched dimensions") {
    CHECK_THROWS_AS(qfi(plus_state(), Matrix::Identity(3, 3)), DimensionMismatch);
    CHECK_THROWS_AS(z_matrix(plus_state(), Matrix::Identity(3, 3)), DimensionMismatch);
}
