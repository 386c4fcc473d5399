#include "qficoh/states.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace qficoh {

namespace {

void check_state_invariants(const Matrix& m, const Spectrum& s, const TolerancePolicy& tol) {
    const double tr = m.trace().real();
    if (std::abs(tr - 1.0) > kTraceTol) {
        std::ostringstream msg;
        msg << "density matrix trace " << tr << " deviates from 1 by " << std::abs(tr - 1.0);
        throw TraceNotOne(msg.str(), std::abs(tr - 1.0));
    }
    const double min_eig = s.eigenvalues[s.dim() - 1];
    if (min_eig < -tol.psd) {
        std::ostringstream msg;
        msg << "density matrix eigenvalue " << min_eig << " below -" << tol.psd;
        throw NotPsd(msg.str(), -min_eig);
    }
}

} // namespace

DensityMatrix DensityMatrix::validate(const Matrix& m, const TolerancePolicy& tol) {
    Spectrum s = eigh(m, tol); // rejects non-Hermitian and non-square input
    check_state_invariants(m, s, tol);
    return DensityMatrix((m + m.adjoint()) / 2.0, std::move(s));
}

DensityMatrix DensityMatrix::from_eigensystem(const RealVector& eigenvalues,
                                              const Matrix& eigenvectors,
                                              const TolerancePolicy& tol) {
    const int d = static_cast<int>(eigenvalues.size());
    if (eigenvectors.rows() != d || eigenvectors.cols() != d) {
        throw DimensionMismatch("from_eigensystem: eigenvector matrix shape mismatch");
    }
    const double ortho = (eigenvectors.adjoint() * eigenvectors - Matrix::Identity(d, d)).norm();
    if (ortho > tol.ortho) {
        throw NotUnitary("from_eigensystem: eigenvectors not orthonormal", ortho);
    }
    for (int i = 0; i + 1 < d; ++i) {
        if (eigenvalues[i] < eigenvalues[i + 1]) {
            throw ValidationError("from_eigensystem: eigenvalues must be descending");
        }
    }
    Spectrum s{eigenvalues, eigenvectors};
    Matrix m = s.reconstruct();
    m = (m + m.adjoint()) / 2.0;
    check_state_invariants(m, s, tol);
    return DensityMatrix(std::move(m), std::move(s));
}

const std::vector<int>& Povm::block_dims() const {
    if (kind_ == MeasurementKind::General) {
        throw ValidationError("block_dims: measurement is not projective");
    }
    return block_dims_;
}

Povm Povm::validate(std::vector<Matrix> elements, const TolerancePolicy& tol) {
    if (elements.empty()) {
        throw DimensionMismatch("validate_povm: empty element list");
    }
    const int d = static_cast<int>(elements.front().rows());
    Matrix sum = Matrix::Zero(d, d);
    for (std::size_t j = 0; j < elements.size(); ++j) {
        Matrix& e = elements[j];
        require_hermitian(e, tol.herm, "validate_povm element");
        if (e.rows() != d) {
            throw DimensionMismatch("validate_povm: elements have unequal dimensions");
        }
        Spectrum s = eigh(e, tol);
        if (s.eigenvalues[s.dim() - 1] < -tol.psd) {
            std::ostringstream msg;
            msg << "validate_povm: element " << j << " has eigenvalue "
                << s.eigenvalues[s.dim() - 1];
            throw NotPsd(msg.str(), -s.eigenvalues[s.dim() - 1]);
        }
        sum += e;
    }
    const double completeness = (sum - Matrix::Identity(d, d)).norm();
    if (completeness > 1e-9) {
        std::ostringstream msg;
        msg << "validate_povm: sum of elements deviates from identity by " << completeness;
        throw CompletenessViolation(msg.str(), completeness);
    }

    Povm povm;
    povm.elements_ = std::move(elements);
    povm.dim_ = d;

    // Projectivity: P_j P_k = delta_jk P_j within 1e-9, all pairs.
    double ortho_res = 0.0;
    for (int j = 0; j < povm.size(); ++j) {
        for (int k = 0; k < povm.size(); ++k) {
            const Matrix prod = povm.element(j) * povm.element(k);
            const Matrix target = (j == k) ? povm.element(j) : Matrix::Zero(d, d);
            ortho_res = std::max(ortho_res, (prod - target).norm());
        }
    }
    if (ortho_res <= 1e-9) {
        povm.kind_ = MeasurementKind::Projective;
        int total_rank = 0;
        bool all_rank_one = true;
        for (const Matrix& e : povm.elements_) {
            // Projector eigenvalues are 0 or 1; count by rounding the trace.
            const int rank = static_cast<int>(std::lround(e.trace().real()));
            povm.block_dims_.push_back(rank);
            total_rank += rank;
            all_rank_one = all_rank_one && rank == 1;
        }
        if (total_rank != d) {
            throw ValidationError("validate_povm: projector ranks do not sum to dimension");
        }
        if (all_rank_one) {
            povm.kind_ = MeasurementKind::Basis;
        }
    }
    return povm;
}

ProjectiveMeasurement ProjectiveMeasurement::validate(std::vector<Matrix> projectors,
                                                      const TolerancePolicy& tol) {
    return from_povm(Povm::validate(std::move(projectors), tol));
}

ProjectiveMeasurement ProjectiveMeasurement::from_povm(const Povm& povm) {
    if (!povm.is_projective()) {
        throw ValidationError("measurement elements are not mutually orthogonal projectors");
    }
    return ProjectiveMeasurement(povm);
}

BasisMeasurement BasisMeasurement::validate(std::vector<Vector> vectors,
                                            const TolerancePolicy& tol) {
    const int d = static_cast<int>(vectors.size());
    if (d == 0) {
        throw DimensionMismatch("basis: empty vector list");
    }
    Matrix frame(d, d);
    for (int j = 0; j < d; ++j) {
        if (vectors[static_cast<std::size_t>(j)].size() != d) {
            throw BadDimension("basis: vector count must equal dimension");
        }
        frame.col(j) = vectors[static_cast<std::size_t>(j)];
    }
    const double res = (frame.adjoint() * frame - Matrix::Identity(d, d)).norm();
    if (res > tol.ortho) {
        throw NotUnitary("basis: vectors not orthonormal", res);
    }
    return BasisMeasurement(std::move(vectors));
}

BasisMeasurement BasisMeasurement::computational(int dim) {
    std::vector<Vector> vs;
    for (int j = 0; j < dim; ++j) {
        Vector v = Vector::Zero(dim);
        v[j] = 1.0;
        vs.push_back(std::move(v));
    }
    return BasisMeasurement(std::move(vs));
}

Matrix BasisMeasurement::projector(int j) const {
    const Vector& v = vectors_[static_cast<std::size_t>(j)];
    return v * v.adjoint();
}

ProjectiveMeasurement BasisMeasurement::projective(const TolerancePolicy& tol) const {
    std::vector<Matrix> ps;
    for (int j = 0; j < dim(); ++j) {
        ps.push_back(projector(j));
    }
    return ProjectiveMeasurement::validate(std::move(ps), tol);
}

double incoherence_residual(const DensityMatrix& rho, const Povm& e) {
    if (rho.dim() != e.dim()) {
        throw DimensionMismatch("incoherence_residual: state and measurement dimensions differ");
    }
    if (e.size() == 1) return 0.0;
    double worst = 0.0;
    for (int j = 0; j < e.size(); ++j) {
        for (int k = j + 1; k < e.size(); ++k) {
            // (E_j rho E_k)^dag = E_k rho E_j, so one orientation suffices.
            worst = std::max(worst, (e.element(j) * rho.matrix() * e.element(k)).norm());
        }
    }
    return worst;
}

double incoherence_residual(const DensityMatrix& rho, const ProjectiveMeasurement& p) {
    return incoherence_residual(rho, p.povm());
}

Matrix block_dephase(const Matrix& rho, const ProjectiveMeasurement& p) {
    Matrix out = Matrix::Zero(rho.rows(), rho.cols());
    for (int j = 0; j < p.size(); ++j) {
        out += p.projector(j) * rho * p.projector(j);
    }
    return out;
}

DensityMatrix random_state(int dim, int rank, std::uint64_t seed, const TolerancePolicy& tol) {
    if (rank < 1 || rank > dim) {
        std::ostringstream msg;
        msg << "random_state: rank " << rank << " outside [1, " << dim << "]";
        throw BadRank(msg.str());
    }
    auto rng = make_engine(seed);
    const Matrix g = random_gaussian_matrix(dim, rank, rng);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    rho = (rho + rho.adjoint()) / 2.0;
    return DensityMatrix::validate(rho, tol);
}

Povm random_povm(int dim, int n, std::uint64_t seed, const TolerancePolicy& tol) {
    if (n < 1) {
        throw BadDimension("random_povm: need at least one element");
    }
    auto rng = make_engine(seed);
    std::vector<Matrix> gs;
    Matrix total = Matrix::Zero(dim, dim);
    for (int j = 0; j < n; ++j) {
        const Matrix x = random_gaussian_matrix(dim, dim, rng);
        gs.push_back(x * x.adjoint());
        total += gs.back();
    }
    Spectrum s = eigh(total, tol);
    const double lmax = s.eigenvalues[0];
    if (s.eigenvalues[s.dim() - 1] <= 1e-12 * lmax) {
        throw NumericalFailure("random_povm: normalizer is singular");
    }
    RealVector inv_sqrt = s.eigenvalues.cwiseSqrt().cwiseInverse();
    const Matrix w = s.eigenvectors * inv_sqrt.asDiagonal() * s.eigenvectors.adjoint();
    std::vector<Matrix> elements;
    for (Matrix& g : gs) {
        Matrix e = w * g * w;
        elements.push_back((e + e.adjoint()) / 2.0);
    }
    return Povm::validate(std::move(elements), tol);
}

ProjectiveMeasurement random_projective(int dim, const std::vector<int>& block_dims,
                                        std::uint64_t seed, const TolerancePolicy& tol) {
    const int total = std::accumulate(block_dims.begin(), block_dims.end(), 0);
    if (total != dim || block_dims.empty()) {
        throw BadDimension("random_projective: block dims must sum to dimension");
    }
    auto rng = make_engine(seed);
    const Matrix q = random_unitary(dim, rng);
    std::vector<Matrix> ps;
    int offset = 0;
    for (int dj : block_dims) {
        if (dj < 1) {
            throw BadDimension("random_projective: block dims must be positive");
        }
        const Matrix cols = q.middleCols(offset, dj);
        ps.push_back(cols * cols.adjoint());
        offset += dj;
    }
    return ProjectiveMeasurement::validate(std::move(ps), tol);
}

BasisMeasurement random_basis(int dim, std::uint64_t seed, const TolerancePolicy& tol) {
    auto rng = make_engine(seed);
    const Matrix q = random_unitary(dim, rng);
    std::vector<Vector> vs;
    for (int j = 0; j < dim; ++j) {
        vs.push_back(q.col(j));
    }
    return BasisMeasurement::validate(std::move(vs), tol);
}

DensityMatrix random_block_incoherent_state(const ProjectiveMeasurement& p, std::uint64_t seed,
                                            const TolerancePolicy& tol) {
    auto rng = make_engine(seed);
    const int d = p.dim();
    std::uniform_real_distribution<double> unif(0.1, 1.0);
    std::vector<double> weights;
    double wsum = 0.0;
    for (int j = 0; j < p.size(); ++j) {
        weights.push_back(unif(rng));
        wsum += weights.back();
    }
    Matrix rho = Matrix::Zero(d, d);
    for (int j = 0; j < p.size(); ++j) {
        const Matrix g = random_gaussian_matrix(d, d, rng);
        Matrix sigma = g * g.adjoint();
        Matrix block = p.projector(j) * sigma * p.projector(j);
        block = (block + block.adjoint()) / 2.0;
        rho += (weights[static_cast<std::size_t>(j)] / wsum) * block / block.trace().real();
    }
    rho /= rho.trace().real();
    return DensityMatrix::validate(rho, tol);
}

} // namespace qficoh
