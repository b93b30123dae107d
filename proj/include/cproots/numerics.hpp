#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "cproots/error.hpp"

namespace cproots {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

struct Tolerance {
    double abs_eps = 1e-9;
    double rel_eps = 1e-9;

    // abs_eps + rel_eps * scale
    double bound(double scale) const { return abs_eps + rel_eps * scale; }
};

struct HermitianEigen {
    RVector eigenvalues;  // ascending
    CMatrix eigenvectors;
};

HermitianEigen eig_hermitian(const CMatrix& m, const Tolerance& tol = {});

struct PsdResult {
    bool flag;
    double min_eig;
};

PsdResult is_psd(const CMatrix& m, const Tolerance& tol = {});

CMatrix mat_exp(const CMatrix& m);

// Principal logarithm. Throws NoPrincipalLog when m is singular or has an
// eigenvalue within 1e-12 of the closed negative real axis.
CMatrix mat_log_principal(const CMatrix& m);

CMatrix kron(const CMatrix& a, const CMatrix& b);

// Column stacking: vec(A X B) = (B^T kron A) vec(X).
CVector vec(const CMatrix& m);
CMatrix unvec(const CVector& v, int d);

// Smallest k <= p with ||m^k|| <= abs + rel*||m||^k, or nullopt when m is not
// nilpotent at that threshold.
std::optional<int> nilpotency_order(const CMatrix& m, const Tolerance& tol = {});

// Helpers shared across modules.
double max_abs(const CMatrix& m);
double spectral_norm(const CMatrix& m);
RVector singular_values(const CMatrix& m);
int numerical_rank(const CMatrix& m, double rel_tol);
CMatrix hermitian_part(const CMatrix& m);
void require_square(const CMatrix& m, const char* what);
void require_finite(const CMatrix& m, const char* what);

// Maximizes sum_j log (A w)_j + mu * log det(C0 + sum_k w_k G_k - floor I) by
// a damped Newton method, shrinking mu until the weights settle. An empty A
// means the identity. The start point must be strictly feasible. Used to
// spread a nilpotent chain as far into the positive cone as the cone allows.
struct LogWeightProblem {
    CMatrix base;                 // C0, Hermitian
    std::vector<CMatrix> links;   // G_k, Hermitian
    double floor = 0.0;
    RMatrix objective;            // A
};

RVector maximize_log_weights(const LogWeightProblem& problem, const RVector& start);

}  // namespace cproots
