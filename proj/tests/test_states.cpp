#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qficoh/states.hpp"

using namespace qficoh;

namespace {

Matrix plus_state() {
    Matrix m(2, 2);
    m << 0.5, 0.5, 0.5, 0.5;
    return m;
}

std::vector<Matrix> computational_projectors(int d) {
    std::vector<Matrix> ps;
    for (int j = 0; j < d; ++j) {
        Matrix p = Matrix::Zero(d, d);
        p(j, j) = 1.0;
        ps.push_back(p);
    }
    return ps;
}

} // namespace

TEST_CASE("validate_state accepts mixed and pure states") {
    const DensityMatrix mixed = DensityMatrix::validate(Matrix::Identity(2, 2) / 2.0);
    CHECK(mixed.spectrum().eigenvalues[0] == doctest::Approx(0.5));
    CHECK(mixed.spectrum().eigenvalues[1] == doctest::Approx(0.5));

    const DensityMatrix pure = DensityMatrix::validate(plus_state());
    CHECK(pure.spectrum().eigenvalues[0] == doctest::Approx(1.0));
    CHECK(pure.spectrum().eigenvalues[1] == doctest::Approx(0.0));
}

TEST_CASE("validate_state names the violated invariant") {
    Matrix bad_trace = Matrix::Zero(2, 2);
    bad_trace.diagonal() << 0.6, 0.6;
    try {
        DensityMatrix::validate(bad_trace);
        FAIL("expected TraceNotOne");
    } catch (const TraceNotOne& err) {
        CHECK(err.residual() == doctest::Approx(0.2));
    }

    Matrix indefinite = Matrix::Zero(2, 2);
    indefinite.diagonal() << 1.5, -0.5;
    CHECK_THROWS_AS(DensityMatrix::validate(indefinite), NotPsd);

    Matrix asym(2, 2);
    asym << 0.5, 0.5, 0.0, 0.5;
    CHECK_THROWS_AS(DensityMatrix::validate(asym), NotHermitian);
}

TEST_CASE("from_eigensystem pins the degenerate frame") {
    Matrix frame(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    frame << s, s, s, -s;
    RealVector lam(2);
    lam << 0.5, 0.5;
    const DensityMatrix rho = DensityMatrix::from_eigensystem(lam, frame);
    CHECK((rho.matrix() - Matrix::Identity(2, 2) / 2.0).norm() <= 1e-12);
    CHECK((rho.spectrum().eigenvectors - frame).norm() == 0.0);

    lam << 0.5, 0.6; // ascending order is rejected
    CHECK_THROWS_AS(DensityMatrix::from_eigensystem(lam, frame), ValidationError);
}

TEST_CASE("validate_povm classifies basis, general and broken input") {
    const Povm basis = Povm::validate(computational_projectors(2));
    CHECK(basis.kind() == MeasurementKind::Basis);
    CHECK(basis.block_dims() == std::vector<int>{1, 1});

    const Povm noisy =
        Povm::validate({Matrix::Identity(2, 2) / 2.0, Matrix::Identity(2, 2) / 2.0});
    CHECK(noisy.kind() == MeasurementKind::General);
    CHECK_THROWS_AS(noisy.block_dims(), ValidationError);
    CHECK_THROWS_AS(ProjectiveMeasurement::from_povm(noisy), ValidationError);

    CHECK_THROWS_AS(
        Povm::validate({Matrix::Identity(2, 2) / 2.0, Matrix::Identity(2, 2) / 3.0}),
        CompletenessViolation);
}

TEST_CASE("validate_povm upgrades rank >1 projector lists") {
    Matrix p1 = Matrix::Zero(3, 3);
    p1(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    Matrix p2 = Matrix::Zero(3, 3);
    p2(2, 2) = 1.0;
    const Povm povm = Povm::validate({p1, p2});
    CHECK(povm.kind() == MeasurementKind::Projective);
    CHECK(povm.block_dims() == std::vector<int>{2, 1});
    const ProjectiveMeasurement p = ProjectiveMeasurement::from_povm(povm);
    CHECK(p.size() == 2);
}

TEST_CASE("incoherence_residual on the worked qubit cases") {
    const auto basis = BasisMeasurement::computational(2).projective();
    Matrix diag = Matrix::Zero(2, 2);
    diag.diagonal() << 0.3, 0.7;
    const DensityMatrix rho_diag = DensityMatrix::validate(diag);
    CHECK(incoherence_residual(rho_diag, basis) <= 1e-15);

    const DensityMatrix plus = DensityMatrix::validate(plus_state());
    CHECK(incoherence_residual(plus, basis) == doctest::Approx(0.5));

    const Povm noisy =
        Povm::validate({Matrix::Identity(2, 2) / 2.0, Matrix::Identity(2, 2) / 2.0});
    CHECK(incoherence_residual(plus, noisy) ==
          doctest::Approx(plus.matrix().norm() / 4.0));

    const Povm trivial = Povm::validate({Matrix::Identity(2, 2)});
    CHECK(incoherence_residual(plus, trivial) == 0.0);

    const DensityMatrix big = random_state(3, 3, 0);
    CHECK_THROWS_AS(incoherence_residual(big, basis.povm()), DimensionMismatch);
}

TEST_CASE("incoherence_residual is invariant under element relabeling") {
    for (int trial = 0; trial < 20; ++trial) {
        const DensityMatrix rho = random_state(4, 4, derive_seed(23, trial));
        const ProjectiveMeasurement p = random_projective(4, {2, 1, 1}, derive_seed(29, trial));
        std::vector<Matrix> shuffled = {p.projector(2), p.projector(0), p.projector(1)};
        const ProjectiveMeasurement q = ProjectiveMeasurement::validate(shuffled);
        CHECK(incoherence_residual(rho, p) ==
              doctest::Approx(incoherence_residual(rho, q)).epsilon(1e-12));
    }
}

TEST_CASE("random_state honors rank, trace and determinism") {
    const DensityMatrix pure = random_state(2, 1, 7);
    CHECK(pure.spectrum().eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(pure.spectrum().eigenvalues[1]) <= 1e-12);

    const DensityMatrix full = random_state(3, 3, 1);
    CHECK(full.matrix().trace().real() == doctest::Approx(1.0));
    CHECK(full.spectrum().eigenvalues[2] > 0.0);

    const DensityMatrix again = random_state(2, 1, 7);
    CHECK((pure.matrix() - again.matrix()).norm() == 0.0);

    CHECK_THROWS_AS(random_state(2, 3, 0), BadRank);
    CHECK_THROWS_AS(random_state(2, 0, 0), BadRank);
}

TEST_CASE("random_povm satisfies the POVM contract across seeds") {
    const Povm single = random_povm(2, 1, 0);
    CHECK((single.element(0) - Matrix::Identity(2, 2)).norm() <= 1e-9);

    const Povm a = random_povm(2, 3, 5);
    const Povm b = random_povm(2, 3, 5);
    for (int j = 0; j < 3; ++j) {
        CHECK((a.element(j) - b.element(j)).norm() == 0.0);
    }

    // validate_povm o random_povm never errors.
    for (int trial = 0; trial < 500; ++trial) {
        auto rng = make_engine(derive_seed(31, static_cast<std::uint64_t>(trial)));
        const int d = 2 + static_cast<int>(rng() % 5);
        const int n = 1 + static_cast<int>(rng() % 6);
        const Povm povm = random_povm(d, n, derive_seed(37, static_cast<std::uint64_t>(trial)));
        Matrix sum = Matrix::Zero(d, d);
        for (int j = 0; j < n; ++j) sum += povm.element(j);
        CHECK((sum - Matrix::Identity(d, d)).norm() <= 1e-9);
    }
}

TEST_CASE("random_block_incoherent_state lands on the incoherent set") {
    const ProjectiveMeasurement basis = BasisMeasurement::computational(3).projective();
    const DensityMatrix diag = random_block_incoherent_state(basis, 3);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (i != j) CHECK(std::abs(diag.matrix()(i, j)) <= 1e-14);
        }
    }

    const ProjectiveMeasurement trivial =
        ProjectiveMeasurement::validate({Matrix::Identity(4, 4)});
    const DensityMatrix any = random_block_incoherent_state(trivial, 5);
    CHECK(incoherence_residual(any, trivial) == 0.0);

    for (int trial = 0; trial < 50; ++trial) {
        const ProjectiveMeasurement p = random_projective(5, {2, 2, 1}, derive_seed(41, trial));
        const DensityMatrix rho = random_block_incoherent_state(p, derive_seed(43, trial));
        CHECK(incoherence_residual(rho, p) <= 1e-12);
    }
}

TEST_CASE("zero residual matches the block-dephasing fixed point in both directions") {
    for (int trial = 0; trial < 50; ++trial) {
        const ProjectiveMeasurement p = random_projective(4, {2, 1, 1}, derive_seed(47, trial));

        const DensityMatrix incoherent = random_block_incoherent_state(p, derive_seed(53, trial));
        CHECK(incoherence_residual(incoherent, p) <= 1e-12);
        CHECK((block_dephase(incoherent.matrix(), p) - incoherent.matrix()).norm() <= 1e-10);

        const DensityMatrix coherent = random_state(4, 4, derive_seed(59, trial));
        const double moved = (block_dephase(coherent.matrix(), p) - coherent.matrix()).norm();
        const double residual = incoherence_residual(coherent, p);
        CHECK(moved > 1e-10);
        CHECK(residual > 1e-12);
    }
}
