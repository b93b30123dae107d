#include "cproots/numerics.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace cproots {

void require_square(const CMatrix& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw Error(ErrorCode::NonSquare, std::string(what) + " must be a nonempty square matrix");
}

void require_finite(const CMatrix& m, const char* what) {
    if (!m.allFinite()) throw Error(ErrorCode::InvalidInput, std::string(what) + " has non-finite entries");
}

double max_abs(const CMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

RVector singular_values(const CMatrix& m) {
    if (m.size() == 0) return RVector();
    return Eigen::BDCSVD<CMatrix>(m).singularValues();
}

double spectral_norm(const CMatrix& m) {
    if (m.size() == 0) return 0.0;
    return singular_values(m)(0);
}

int numerical_rank(const CMatrix& m, double rel_tol) {
    RVector s = singular_values(m);
    if (s.size() == 0 || s(0) == 0.0) return 0;
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > rel_tol * s(0)) ++rank;
    return rank;
}

CMatrix hermitian_part(const CMatrix& m) {
    return 0.5 * (m + m.adjoint());
}

HermitianEigen eig_hermitian(const CMatrix& m, const Tolerance& tol) {
    (void)tol;
    require_square(m, "eig_hermitian input");
    const double residual = max_abs(m - m.adjoint());
    if (residual > 1e-6 * std::max(1.0, max_abs(m)))
        throw Error(ErrorCode::NotHermitian, "Hermiticity residual " + std::to_string(residual));
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(m));
    return {solver.eigenvalues(), solver.eigenvectors()};
}

PsdResult is_psd(const CMatrix& m, const Tolerance& tol) {
    HermitianEigen e = eig_hermitian(m, tol);
    const double norm = e.eigenvalues.cwiseAbs().maxCoeff();
    const double min_eig = e.eigenvalues(0);
    return {min_eig >= -tol.bound(norm), min_eig};
}

CMatrix mat_exp(const CMatrix& m) {
    require_square(m, "mat_exp input");
    return m.exp();
}

CMatrix mat_log_principal(const CMatrix& m) {
    require_square(m, "mat_log_principal input");
    Eigen::ComplexEigenSolver<CMatrix> solver(m, false);
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        const cplx z = solver.eigenvalues()(i);
        const double dist = z.real() <= 0.0 ? std::abs(z.imag()) : std::abs(z);
        if (dist <= 1e-12)
            throw Error(ErrorCode::NoPrincipalLog,
                        "eigenvalue (" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) +
                            ") lies on the closed negative real axis");
    }
    CMatrix result = m.log();
    const double scale = std::max(1.0, m.norm());
    if (!result.allFinite() || (result.exp() - m).norm() > 1e-9 * scale)
        throw Error(ErrorCode::VerificationFailed, "principal logarithm failed its exp round-trip");
    return result;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

CVector vec(const CMatrix& m) {
    return Eigen::Map<const CVector>(m.data(), m.size());
}

CMatrix unvec(const CVector& v, int d) {
    if (d <= 0 || v.size() != static_cast<Eigen::Index>(d) * d)
        throw Error(ErrorCode::ShapeMismatch, "unvec: vector length is not d^2");
    return Eigen::Map<const CMatrix>(v.data(), d, d);
}

std::optional<int> nilpotency_order(const CMatrix& m, const Tolerance& tol) {
    require_square(m, "nilpotency_order input");
    const int p = static_cast<int>(m.rows());
    const double norm = spectral_norm(m);
    CMatrix power = m;
    for (int k = 1; k <= p; ++k) {
        if (k > 1) power = power * m;
        if (spectral_norm(power) <= tol.bound(std::pow(norm, k))) return k;
    }
    return std::nullopt;
}

namespace {

struct Barrier {
    bool feasible = false;
    double value = 0.0;
    CMatrix inverse;
};

Barrier evaluate_barrier(const LogWeightProblem& pr, const RMatrix& a, const RVector& w, double mu) {
    Barrier out;
    const RVector terms = a * w;
    if ((terms.array() <= 0.0).any()) return out;
    CMatrix m = pr.base;
    for (std::size_t k = 0; k < pr.links.size(); ++k) m += w(k) * pr.links[k];
    m -= pr.floor * CMatrix::Identity(m.rows(), m.cols());
    Eigen::LLT<CMatrix> llt(hermitian_part(m));
    if (llt.info() != Eigen::Success) return out;
    const RVector diag = llt.matrixLLT().diagonal().real();
    if ((diag.array() <= 0.0).any()) return out;
    out.feasible = true;
    out.value = terms.array().log().sum() + mu * 2.0 * diag.array().log().sum();
    out.inverse = llt.solve(CMatrix::Identity(m.rows(), m.cols()));
    return out;
}

}  // namespace

RVector maximize_log_weights(const LogWeightProblem& pr, const RVector& start) {
    const Eigen::Index k_count = static_cast<Eigen::Index>(pr.links.size());
    if (k_count == 0) return start;
    if (start.size() != k_count) throw Error(ErrorCode::ShapeMismatch, "weight count does not match link count");
    const RMatrix a = pr.objective.size() == 0 ? RMatrix(RMatrix::Identity(k_count, k_count)) : pr.objective;
    if (a.cols() != k_count) throw Error(ErrorCode::ShapeMismatch, "objective width does not match link count");

    RVector w = start;
    for (double mu = 1.0; mu >= 1e-6; mu *= 0.1) {
        Barrier cur = evaluate_barrier(pr, a, w, mu);
        if (!cur.feasible) throw Error(ErrorCode::InvalidInput, "weight optimizer start is not strictly feasible");
        for (int iter = 0; iter < 100; ++iter) {
            const RVector inv_terms = (a * w).cwiseInverse();
            RVector grad = a.transpose() * inv_terms;
            RMatrix hess = -a.transpose() * inv_terms.array().square().matrix().asDiagonal() * a;
            std::vector<CMatrix> ag(k_count);
            for (Eigen::Index k = 0; k < k_count; ++k) ag[k] = cur.inverse * pr.links[k];
            for (Eigen::Index k = 0; k < k_count; ++k) {
                grad(k) += mu * ag[k].trace().real();
                for (Eigen::Index l = k; l < k_count; ++l) {
                    const double t = mu * (ag[k].array() * ag[l].transpose().array()).sum().real();
                    hess(k, l) -= t;
                    if (l != k) hess(l, k) -= t;
                }
            }
            const RVector step = (-hess).ldlt().solve(grad);
            const double decrement = grad.dot(step);
            if (!(decrement > 1e-12)) break;

            double s = 1.0;
            Barrier next;
            for (int ls = 0; ls < 60; ++ls, s *= 0.5) {
                next = evaluate_barrier(pr, a, w + s * step, mu);
                if (next.feasible && next.value >= cur.value + 0.25 * s * decrement) break;
                next.feasible = false;
            }
            if (!next.feasible) break;
            w += s * step;
            cur = std::move(next);
        }
    }
    return w;
}

}  // namespace cproots
