#include "cproots/cpmap.hpp"

#include <algorithm>
#include <cmath>

namespace cproots {

namespace {

int dim_from_superop(const CMatrix& s) {
    require_square(s, "superoperator");
    const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(s.rows()))));
    if (static_cast<Eigen::Index>(d) * d != s.rows())
        throw Error(ErrorCode::ShapeMismatch, "superoperator size is not a perfect square");
    return d;
}

// Gram-Schmidt over canonical vectors projected by q.
CMatrix orthonormal_columns(const CMatrix& q, int count) {
    const Eigen::Index d = q.rows();
    CMatrix out(d, count);
    int found = 0;
    for (Eigen::Index i = 0; i < d && found < count; ++i) {
        CVector v = q.col(i);
        for (int j = 0; j < found; ++j) v -= out.col(j).dot(v) * out.col(j);
        for (int j = 0; j < found; ++j) v -= out.col(j).dot(v) * out.col(j);
        const double n = v.norm();
        if (n > 1e-6) out.col(found++) = v / n;
    }
    if (found != count) throw Error(ErrorCode::VerificationFailed, "could not build an adapted basis");
    return out;
}

}  // namespace

CMatrix matrix_unit(int d, int i, int j) {
    CMatrix e = CMatrix::Zero(d, d);
    e(i, j) = 1.0;
    return e;
}

double superop_distance(const CMatrix& a, const CMatrix& b) {
    return (a - b).norm();
}

CMatrix superop_from_kraus(const std::vector<CMatrix>& kraus) {
    if (kraus.empty()) throw Error(ErrorCode::ShapeMismatch, "empty Kraus family has no dimension");
    const Eigen::Index d = kraus.front().rows();
    CMatrix s = CMatrix::Zero(d * d, d * d);
    for (const CMatrix& l : kraus) {
        if (l.rows() != d || l.cols() != d) throw Error(ErrorCode::ShapeMismatch, "Kraus operators must be d x d");
        s += kron(l.transpose(), l.adjoint());
    }
    return s;
}

// C[(i,k),(j,l)] = phi(e_ij)(k,l) = S[k + l d, i + j d]
CMatrix choi_from_superop(const CMatrix& s) {
    const int d = dim_from_superop(s);
    CMatrix c(d * d, d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) c(i * d + k, j * d + l) = s(k + l * d, i + j * d);
    return c;
}

CMatrix superop_from_choi(const CMatrix& c) {
    const int d = dim_from_superop(c);
    CMatrix s(d * d, d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) s(k + l * d, i + j * d) = c(i * d + k, j * d + l);
    return s;
}

CMap::CMap(int d, CMatrix superop, std::optional<std::vector<CMatrix>> kraus, const Tolerance& tol)
    : dim_(d), superop_(std::move(superop)), kraus_(std::move(kraus)) {
    require_finite(superop_, "superoperator");
    choi_ = choi_from_superop(superop_);
    flags_.tol = tol;
    flags_.unital_residual = max_abs(apply(CMatrix::Identity(d, d)) - CMatrix::Identity(d, d));
    flags_.unital = flags_.unital_residual <= tol.bound(1.0);
    const double herm = max_abs(choi_ - choi_.adjoint());
    if (herm <= 1e-6 * std::max(1.0, max_abs(choi_))) {
        const PsdResult psd = is_psd(choi_, tol);
        flags_.cp = psd.flag;
        flags_.choi_min_eig = psd.min_eig;
    } else {
        flags_.cp = false;
        flags_.choi_min_eig = -herm;
    }
    const double norm = superop_.norm();
    flags_.idempotent = (superop_ * superop_ - superop_).norm() <= tol.bound(norm);
}

CMap CMap::from_superop(const CMatrix& superop, const Tolerance& tol) {
    return CMap(dim_from_superop(superop), superop, std::nullopt, tol);
}

CMap CMap::from_kraus(const std::vector<CMatrix>& kraus, const Tolerance& tol) {
    CMatrix s = superop_from_kraus(kraus);
    return CMap(static_cast<int>(kraus.front().rows()), std::move(s), kraus, tol);
}

CMap CMap::identity(int d) {
    if (d <= 0) throw Error(ErrorCode::ShapeMismatch, "dimension must be positive");
    return from_kraus({CMatrix::Identity(d, d)});
}

CMatrix CMap::apply(const CMatrix& x) const {
    if (x.rows() != dim_ || x.cols() != dim_) throw Error(ErrorCode::ShapeMismatch, "argument is not d x d");
    return unvec(superop_ * vec(x), dim_);
}

CMap compose(const CMap& a, const CMap& b) {
    if (a.dim() != b.dim()) throw Error(ErrorCode::ShapeMismatch, "compose: dimensions differ");
    return CMap::from_superop(a.superop() * b.superop(), a.flags().tol);
}

CMap power(const CMap& map, int k) {
    if (k < 0) throw Error(ErrorCode::ShapeMismatch, "power: negative exponent");
    const Eigen::Index n = map.superop().rows();
    CMatrix result = CMatrix::Identity(n, n);
    CMatrix base = map.superop();
    for (int e = k; e > 0; e >>= 1) {
        if (e & 1) result = result * base;
        if (e > 1) base = base * base;
    }
    return CMap::from_superop(result, map.flags().tol);
}

CMatrix choi_of(const CMap& map) { return map.choi(); }

PsdResult is_cp(const CMap& map, const Tolerance& tol) {
    return is_psd(map.choi(), tol);
}

bool is_unital(const CMap& map, const Tolerance& tol) {
    const int d = map.dim();
    return max_abs(map.apply(CMatrix::Identity(d, d)) - CMatrix::Identity(d, d)) <= tol.bound(1.0);
}

bool is_idempotent(const CMap& map, const Tolerance& tol) {
    const CMatrix& s = map.superop();
    return (s * s - s).norm() <= tol.bound(s.norm());
}

bool is_uncp(const CMap& map, const Tolerance& tol) {
    return is_unital(map, tol) && is_cp(map, tol).flag;
}

std::vector<CMatrix> kraus_from_choi(const CMatrix& choi, const Tolerance& tol) {
    const int d = dim_from_superop(choi);
    HermitianEigen e = eig_hermitian(choi, tol);
    const double norm = e.eigenvalues.cwiseAbs().maxCoeff();
    const double cut = tol.bound(norm);
    if (e.eigenvalues(0) < -cut)
        throw Error(ErrorCode::NotPSD, "Choi matrix has eigenvalue " + std::to_string(e.eigenvalues(0)));
    std::vector<CMatrix> out;
    for (Eigen::Index m = e.eigenvalues.size() - 1; m >= 0; --m) {
        const double lambda = e.eigenvalues(m);
        if (lambda <= cut) continue;
        const CVector v = std::sqrt(lambda) * e.eigenvectors.col(m);
        CMatrix l(d, d);
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k) l(i, k) = std::conj(v(i * d + k));
        out.push_back(std::move(l));
    }
    return out;
}

std::vector<CMatrix> kraus_of(const CMap& map, const Tolerance& tol) {
    if (map.kraus()) return *map.kraus();
    return kraus_from_choi(map.choi(), tol);
}

Projection make_projection(const CMatrix& p) {
    require_square(p, "projection");
    if ((p * p - p).norm() > 1e-10 || (p - p.adjoint()).norm() > 1e-10)
        throw Error(ErrorCode::InvalidInput, "matrix is not an orthogonal projection");
    Projection out;
    out.dim = static_cast<int>(p.rows());
    out.rank = static_cast<int>(std::lround(p.trace().real()));
    out.matrix = p;
    const CMatrix id = CMatrix::Identity(out.dim, out.dim);
    out.basis = orthonormal_columns(p, out.rank);
    out.complement = orthonormal_columns(id - p, out.dim - out.rank);
    return out;
}

Projection support_projection(const CMap& map, const Tolerance& tol) {
    if (!is_uncp(map, tol)) throw Error(ErrorCode::NotUNCP, "support projection needs a UNCP map");
    const int d = map.dim();
    const std::vector<CMatrix> kraus = kraus_of(map, tol);
    CMatrix stacked(d, d * static_cast<Eigen::Index>(kraus.size()));
    for (std::size_t i = 0; i < kraus.size(); ++i) stacked.middleCols(i * d, d) = kraus[i];
    Eigen::BDCSVD<CMatrix> svd(stacked, Eigen::ComputeThinU);
    const RVector& s = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > 1e-9 * s(0)) ++rank;
    const CMatrix u = svd.matrixU().leftCols(rank);
    CMatrix p = u * u.adjoint();
    // Snap entries that are zero up to rounding so diagonal supports stay diagonal.
    p = p.unaryExpr([](cplx z) {
        return cplx(std::abs(z.real()) < 1e-14 ? 0.0 : z.real(), std::abs(z.imag()) < 1e-14 ? 0.0 : z.imag());
    });
    p = hermitian_part(p);
    const double residual = max_abs(map.apply(p) - CMatrix::Identity(d, d));
    if (residual > tol.bound(1.0))
        throw Error(ErrorCode::VerificationFailed, "phi(p) - I residual " + std::to_string(residual));
    Projection out = make_projection(p);
    out.rank = rank;
    return out;
}

Blocks block_decompose(const CMatrix& x, const Projection& p) {
    const CMatrix& u = p.basis;
    const CMatrix& v = p.complement;
    return {u.adjoint() * x * u, u.adjoint() * x * v, v.adjoint() * x * u, v.adjoint() * x * v};
}

CMatrix block_assemble(const Blocks& b, const Projection& p) {
    const CMatrix& u = p.basis;
    const CMatrix& v = p.complement;
    return u * b.x11 * u.adjoint() + u * b.x12 * v.adjoint() + v * b.x21 * u.adjoint() +
           v * b.x22 * v.adjoint();
}

CMap compress(const CMap& map, const Projection& p, const Tolerance& tol) {
    if (p.dim != map.dim()) throw Error(ErrorCode::ShapeMismatch, "compress: projection dimension differs");
    const PsdResult absorbed = is_psd(map.apply(p.matrix) - p.matrix, tol);
    if (!absorbed.flag)
        throw Error(ErrorCode::SupportNotAbsorbed,
                    "tau(p) - p has eigenvalue " + std::to_string(absorbed.min_eig));
    const CMatrix& u = p.basis;
    const CMatrix s = kron(u.transpose(), u.adjoint()) * map.superop() * kron(u.conjugate(), u);
    return CMap::from_superop(s, tol);
}

StateSpec StateSpec::from_density(const CMatrix& density, double rank_tol) {
    require_square(density, "density");
    require_finite(density, "density");
    if (std::abs(density.trace() - cplx(1.0)) > 1e-10)
        throw Error(ErrorCode::InvalidInput, "density must have unit trace");
    HermitianEigen e = eig_hermitian(density);
    if (e.eigenvalues(0) < -1e-10) throw Error(ErrorCode::NotPSD, "density is not positive semidefinite");
    StateSpec s;
    s.dim = static_cast<int>(density.rows());
    s.density = hermitian_part(density);
    s.eigenvalues = e.eigenvalues.reverse();
    s.eigenvectors = e.eigenvectors.rowwise().reverse();
    s.support_rank = static_cast<int>((s.eigenvalues.array() > rank_tol).count());
    return s;
}

StateSpec StateSpec::diagonal(const std::vector<double>& probabilities, double rank_tol) {
    const int d = static_cast<int>(probabilities.size());
    if (d == 0) throw Error(ErrorCode::InvalidInput, "empty probability list");
    CMatrix density = CMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i) density(i, i) = probabilities[i];
    return from_density(density, rank_tol);
}

// tr(D x) = vec(D^T)^T vec(x), so S = vec(I) vec(D^T)^T.
CMap state_map(const StateSpec& state) {
    const int d = state.dim;
    const CVector one = vec(CMatrix::Identity(d, d));
    const CVector dt = vec(state.density.transpose());
    return CMap::from_superop(one * dt.transpose());
}

std::optional<CMatrix> state_density_of(const CMap& map, double tol) {
    const int d = map.dim();
    // Row of the superoperator producing output entry (0, 0).
    const CMatrix dt = unvec(map.superop().row(0).transpose(), d);
    const CMatrix density = dt.transpose();
    const CVector one = vec(CMatrix::Identity(d, d));
    const CMatrix expected = one * vec(dt).transpose();
    if (superop_distance(expected, map.superop()) > tol * std::max(1.0, map.superop().norm())) return std::nullopt;
    return density;
}

}  // namespace cproots
