#include "cproots/commutative.hpp"

#include <algorithm>
#include <cmath>

#include "format.hpp"

namespace cproots {

using detail::num;

ProbVector ProbVector::from(const std::vector<double>& p, double rank_tol) {
    if (p.empty()) throw Error(ErrorCode::InvalidInput, "empty probability vector");
    ProbVector out;
    out.dim = static_cast<int>(p.size());
    out.entries = Eigen::Map<const RVector>(p.data(), out.dim);
    if (!out.entries.allFinite()) throw Error(ErrorCode::InvalidInput, "probability vector has non-finite entries");
    if (out.entries.minCoeff() < -1e-15) throw Error(ErrorCode::InvalidInput, "negative probability");
    if (std::abs(out.entries.sum() - 1.0) > 1e-12) throw Error(ErrorCode::InvalidInput, "probabilities must sum to 1");
    out.support_rank = static_cast<int>((out.entries.array() > rank_tol).count());
    return out;
}

StochMatrix StochMatrix::from(const RMatrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0) throw Error(ErrorCode::NonSquare, "stochastic matrix must be square");
    StochMatrix out;
    out.dim = static_cast<int>(m.rows());
    out.entries = m;
    out.row_sum_residual = (m.rowwise().sum().array() - 1.0).abs().maxCoeff();
    out.min_entry = m.minCoeff();
    return out;
}

StochMatrix state_to_stochastic(const ProbVector& p) {
    return StochMatrix::from(RVector::Ones(p.dim) * p.entries.transpose());
}

RMatrix shift_matrix(int d_minus_r, int n, int r) {
    const int d = d_minus_r + r;
    if (d_minus_r < 1 || r < 1 || n < r || n > d - 1)
        throw Error(ErrorCode::BadIndices, "shift needs r <= n <= d-1 and d > r");
    RMatrix s = RMatrix::Zero(d_minus_r, d_minus_r);
    // 1-based i = d-n .. d-r-1 maps to 0-based column i-1.
    for (int i = d - n; i <= d - r - 1; ++i) s(i, i - 1) = 1.0;
    return s;
}

RootCertificate verify_stochastic_root(const RMatrix& tau, const ProbVector& p, int n, const RootTolerance& tol) {
    if (tau.rows() != p.dim || tau.cols() != p.dim) throw Error(ErrorCode::ShapeMismatch, "tau and p disagree in size");
    const RMatrix phi = state_to_stochastic(p).entries;
    const StochMatrix st = StochMatrix::from(tau);
    RootCertificate cert;
    cert.n = n;
    RMatrix power = tau;
    for (int k = 1; k < n; ++k) {
        cert.properness_margins.push_back((power - phi).norm());
        power = power * tau;
    }
    cert.residual_power = (power - phi).norm();
    cert.choi_min_eig = st.min_entry;
    cert.unitality_residual = st.row_sum_residual;
    for (int k = 1; k < n; ++k) {
        const double m = cert.properness_margins[k - 1];
        if (!(m > tol.properness_floor)) {
            cert.reason = "properness margin " + num(m) + " at k=" + std::to_string(k);
            return cert;
        }
    }
    if (!(cert.residual_power <= tol.residual))
        cert.reason = "power residual " + num(cert.residual_power) + " exceeds " + num(tol.residual);
    else if (!(cert.choi_min_eig >= -tol.psd))
        cert.reason = "negative entry " + num(cert.choi_min_eig);
    else if (!(cert.unitality_residual <= tol.unital))
        cert.reason = "row-sum residual " + num(cert.unitality_residual);
    else {
        cert.accepted = true;
        cert.reason = "accepted";
    }
    return cert;
}

std::optional<std::pair<int, int>> commutative_root_range(int d) {
    if (d <= 2) return std::nullopt;
    return std::make_pair(2, d - 1);
}

namespace {

// Faithful p: tau = |1><p| + sum_i w_i k_{i+1} l_i^T with (1, k_1, ..., k_{d-1})
// diagonalizing |1><p| and l_i the dual rows.
CommutativeRoot faithful_root(const RVector& p, int n, const CommutativeOptions& opts) {
    const int d = static_cast<int>(p.size());
    const RMatrix phi = RVector::Ones(d) * p.transpose();
    const RMatrix kernel_proj = RMatrix::Identity(d, d) - p * p.transpose() / p.squaredNorm();

    RMatrix s(d, d);
    s.col(0) = RVector::Ones(d);
    int found = 1;
    for (int i = 0; i < d && found < d; ++i) {
        RVector v = kernel_proj.col(i);
        for (int pass = 0; pass < 2; ++pass)
            for (int j = 1; j < found; ++j) v -= s.col(j).dot(v) * s.col(j);
        if (v.norm() > 1e-8) s.col(found++) = v / v.norm();
    }
    if (found != d) throw Error(ErrorCode::ConstructionFailed, "kernel basis degenerate");
    const RMatrix dual = s.inverse();

    std::vector<RMatrix> links;
    RMatrix alpha = RMatrix::Zero(d, d);
    for (int i = 1; i < n; ++i) {
        links.push_back(s.col(i + 1) * dual.row(i));
        alpha += links.back();
    }

    CommutativeRoot out;
    out.construction = "faithful";
    double eps = 1.0;
    int halvings = 0;
    while ((phi + eps * alpha).minCoeff() < 0.0) {
        if (++halvings > 40) throw Error(ErrorCode::EpsilonNotFound, "no epsilon >= 2^-40 keeps entries nonnegative");
        eps *= 0.5;
    }
    out.epsilon = eps;
    RVector w = RVector::Constant(n - 1, eps);

    if (opts.refine_weights) {
        // Entrywise nonnegativity as a diagonal matrix inequality.
        auto diag_of = [](const RMatrix& m) { return CMatrix(Eigen::Map<const RVector>(m.data(), m.size()).cast<cplx>().asDiagonal()); };
        LogWeightProblem problem{diag_of(phi), {}, 1e-3 * p.minCoeff(), {}};
        for (const RMatrix& g : links) problem.links.push_back(diag_of(g));
        double start = eps;
        while (start > 1e-14 && (phi + start * alpha).minCoeff() <= problem.floor) start *= 0.5;
        w = maximize_log_weights(problem, RVector::Constant(n - 1, start));
    }
    RMatrix tau = phi;
    for (int i = 0; i + 1 < n; ++i) tau += w(i) * links[i];
    out.tau = StochMatrix::from(tau);
    out.weights.assign(w.data(), w.data() + w.size());
    out.n1 = n;
    return out;
}

}  // namespace

CommutativeRoot construct_commutative_root(const ProbVector& p, int n, const CommutativeOptions& opts) {
    const int d = p.dim;
    if (n < 2 || n > d - 1)
        throw Error(ErrorCode::OrderOutOfRange, "order " + std::to_string(n) + " outside [2, d-1]");
    const int r = p.support_rank;

    // Support states first, each group in original order.
    std::vector<int> order;
    for (int i = 0; i < d; ++i)
        if (p.entries(i) > 1e-12) order.push_back(i);
    for (int i = 0; i < d; ++i)
        if (!(p.entries(i) > 1e-12)) order.push_back(i);
    RVector pr(r);
    for (int i = 0; i < r; ++i) pr(i) = p.entries(order[i]);

    CommutativeRoot out;
    RMatrix sorted;
    if (r == d) {
        out = faithful_root(pr, n, opts);
        sorted = out.tau.entries;
    } else {
        const int rc = d - r;
        RMatrix top;
        int j = 0;
        int m = n;  // shift parameter of the complement block
        if (r <= 2) {
            out.construction = "small-support";
            top = RVector::Ones(r) * pr.transpose();
            out.n1 = r - 1;
            out.n2 = n - out.n1;
        } else {
            out.construction = "split";
            out.n1 = std::min(r - 1, n - 1);
            out.n2 = n - out.n1;
            if (out.n2 < 1 || out.n2 > rc) throw Error(ErrorCode::CaseInfeasible, "no valid order split");
            if (out.n1 >= 2) {
                CommutativeRoot inner = faithful_root(pr, out.n1, opts);
                top = inner.tau.entries;
                out.epsilon = inner.epsilon;
                out.weights = inner.weights;
                // First support row whose (n1-1)-th power still differs from p.
                RMatrix pw = RMatrix::Identity(r, r);
                for (int k = 0; k < out.n1 - 1; ++k) pw = pw * top;
                const RMatrix diff = pw - RVector::Ones(r) * pr.transpose();
                const RVector g = diff.rowwise().norm();
                while (j < r - 1 && g(j) < 0.1 * g.maxCoeff()) ++j;
            } else {
                top = RVector::Ones(r) * pr.transpose();
            }
            // Descent of length n2-1 through the complement, then a jump to row j.
            m = out.n2 + r - 1;
        }
        out.row = j;
        RVector y = RVector::Zero(rc);
        y.head(d - m).setOnes();
        sorted = RMatrix::Zero(d, d);
        sorted.topLeftCorner(r, r) = top;
        sorted.block(r, j, rc, 1) = y;
        sorted.bottomRightCorner(rc, rc) = shift_matrix(rc, m, r);
    }

    RMatrix tau(d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) tau(order[a], order[b]) = sorted(a, b);
    out.tau = StochMatrix::from(tau);
    out.certificate = verify_stochastic_root(tau, p, n, opts.tol);
    if (!out.certificate.accepted)
        throw Error(ErrorCode::ConstructionFailed, "stochastic root rejected: " + out.certificate.reason);
    return out;
}

}  // namespace cproots
