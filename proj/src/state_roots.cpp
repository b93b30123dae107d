#include <algorithm>
#include <array>
#include <cmath>

#include "cproots/discrete_roots.hpp"
#include "format.hpp"

namespace cproots {

namespace {

using detail::num;

CMatrix pauli(char c) {
    CMatrix p = CMatrix::Zero(2, 2);
    switch (c) {
        case 'I': p(0, 0) = p(1, 1) = 1.0; break;
        case 'X': p(0, 1) = p(1, 0) = 1.0; break;
        case 'Y': p(0, 1) = cplx(0, -1); p(1, 0) = cplx(0, 1); break;
        case 'Z': p(0, 0) = 1.0; p(1, 1) = -1.0; break;
    }
    return p;
}

// Two-qubit Pauli sequence following a Singer cycle of the symplectic space
// F_2^4, with link signs folded into the elements. Under the maximally mixed
// state its optimally weighted chain keeps every power of alpha above 6e-6,
// where the canonical order collapses near 1e-10 at full length.
struct PauliStep {
    const char* label;
    int sign;
};
constexpr std::array<PauliStep, 15> kPauliCycle{{
    {"YX", 1}, {"ZY", -1}, {"ZI", -1}, {"XY", 1}, {"ZZ", -1},
    {"IX", -1}, {"ZX", -1}, {"YZ", -1}, {"XI", -1}, {"XX", -1},
    {"YI", -1}, {"IZ", -1}, {"XZ", -1}, {"IY", -1}, {"YY", -1},
}};

// Gram-Schmidt of Hermitian candidates after removing their phi-mean, in the
// given order, keeping at most `count` elements.
std::vector<CMatrix> centered_orthonormal(const std::vector<CMatrix>& candidates, const CMatrix& density, int count) {
    const Eigen::Index d = density.rows();
    const CMatrix id = CMatrix::Identity(d, d);
    std::vector<CMatrix> out;
    for (const CMatrix& h : candidates) {
        if (static_cast<int>(out.size()) == count) break;
        CMatrix z = h - (density * h).trace() * id;
        for (int pass = 0; pass < 2; ++pass)
            for (const CMatrix& y : out) z -= (y.adjoint() * z).trace() * y;
        const double n = z.norm();
        if (n > 1e-8) out.push_back(hermitian_part(z / n));
    }
    return out;
}

std::vector<CMatrix> canonical_hermitian(int d) {
    std::vector<CMatrix> out;
    for (int i = 0; i < d; ++i) out.push_back(matrix_unit(d, i, i));
    const double s = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            out.push_back(s * (matrix_unit(d, i, j) + matrix_unit(d, j, i)));
            out.push_back(cplx(0, s) * (matrix_unit(d, i, j) - matrix_unit(d, j, i)));
        }
    return out;
}

CMatrix eigen_density(const StateSpec& state) {
    return state.eigenvalues.cast<cplx>().asDiagonal();
}

std::vector<CMatrix> rotate(const std::vector<CMatrix>& ys, const CMatrix& w) {
    std::vector<CMatrix> out;
    for (const CMatrix& y : ys) out.push_back(hermitian_part(w * y * w.adjoint()));
    return out;
}

// Chain elements Y_k and dual functionals F_k with tr(F_k Y_l) = delta_kl,
// tr F_k = 0 and tr(D Y_k) = 0.
struct Chain {
    std::vector<CMatrix> ys;
    std::vector<CMatrix> fs;
};

Chain centered_chain(const std::vector<CMatrix>& ys, const CMatrix& density) {
    Chain c{ys, {}};
    for (const CMatrix& y : ys) c.fs.push_back(y - y.trace() * density);
    return c;
}

// Q orthonormal and orthogonal to D^(1/2); Y = D^(-1/4) Q D^(-1/4), F = D^(1/4) Q D^(1/4).
Chain weighted_chain(const std::vector<CMatrix>& candidates, const StateSpec& state, int count) {
    const RVector& lam = state.eigenvalues;
    const CMatrix root = lam.cwiseSqrt().cast<cplx>().asDiagonal();
    const CMatrix up = lam.array().pow(0.25).matrix().cast<cplx>().asDiagonal();
    const CMatrix down = lam.array().pow(-0.25).matrix().cast<cplx>().asDiagonal();
    const CMatrix anchor = root / root.norm();
    std::vector<CMatrix> qs;
    for (const CMatrix& h : candidates) {
        if (static_cast<int>(qs.size()) == count) break;
        CMatrix z = h;
        for (int pass = 0; pass < 2; ++pass) {
            z -= (anchor.adjoint() * z).trace() * anchor;
            for (const CMatrix& q : qs) z -= (q.adjoint() * z).trace() * q;
        }
        const double n = z.norm();
        if (n > 1e-8) qs.push_back(hermitian_part(z / n));
    }
    Chain c;
    for (const CMatrix& q : qs) {
        c.ys.push_back(hermitian_part(down * q * down));
        c.fs.push_back(hermitian_part(up * q * up));
    }
    return c;
}

std::vector<CMatrix> signed_pauli_cycle() {
    std::vector<CMatrix> out;
    for (const PauliStep& step : kPauliCycle)
        out.push_back(static_cast<double>(step.sign) * kron(pauli(step.label[0]), pauli(step.label[1])));
    return out;
}

Chain chain_elements(const StateSpec& state, ChainBasis basis) {
    const int d = state.dim;
    const int count = d * d - 1;
    if ((basis == ChainBasis::PauliCycle || basis == ChainBasis::PauliWeighted) && d != 4)
        throw Error(ErrorCode::InvalidInput, "the Pauli chain bases need d = 4");
    Chain c;
    switch (basis) {
        case ChainBasis::Canonical:
            return centered_chain(phi_orthogonal_basis(state).elements, state.density);
        case ChainBasis::CanonicalWeighted:
            c = weighted_chain(canonical_hermitian(d), state, count);
            break;
        case ChainBasis::PauliWeighted:
            c = weighted_chain(signed_pauli_cycle(), state, count);
            break;
        default:
            c = centered_chain(centered_orthonormal(signed_pauli_cycle(), eigen_density(state), count),
                               eigen_density(state));
            break;
    }
    if (static_cast<int>(c.ys.size()) != count) throw Error(ErrorCode::ConstructionFailed, "chain basis degenerate");
    return {rotate(c.ys, state.eigenvectors), rotate(c.fs, state.eigenvectors)};
}

RVector hermitian_coords(const CMatrix& h, const std::vector<CMatrix>& basis) {
    RVector c(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t a = 0; a < basis.size(); ++a) c(a) = (basis[a] * h).trace().real();
    return c;
}

double choi_min(const CMatrix& c) {
    return Eigen::SelfAdjointEigenSolver<CMatrix>(hermitian_part(c), Eigen::EigenvaluesOnly).eigenvalues()(0);
}

}  // namespace

PhiBasis phi_orthogonal_basis(const StateSpec& state) {
    if (!state.faithful()) throw Error(ErrorCode::NotFaithful, "state must be faithful");
    const int d = state.dim;
    std::vector<CMatrix> ys = centered_orthonormal(canonical_hermitian(d), eigen_density(state), d * d - 1);
    if (static_cast<int>(ys.size()) != d * d - 1) throw Error(ErrorCode::ConstructionFailed, "basis degenerate");
    return {state.density, rotate(ys, state.eigenvectors)};
}

EpsilonChoice epsilon_tune(const CMap& phi, const CMatrix& alpha, double psd_floor) {
    const CMatrix c0 = phi.choi();
    const CMatrix ca = choi_from_superop(alpha);
    double eps = 1.0;
    for (int i = 0; i <= 40; ++i, eps *= 0.5) {
        const double m = choi_min(c0 + eps * ca);
        if (m >= psd_floor) {
            EpsilonChoice out{eps, eps, m};
            if (i > 0 && choi_min(c0 + 1.5 * eps * ca) >= psd_floor) out.refined = 1.5 * eps;
            return out;
        }
    }
    throw Error(ErrorCode::EpsilonNotFound, "no epsilon >= 2^-40 keeps the Choi matrix above the floor");
}

namespace {

// Nilpotent part alpha(x) = sum_i tr(R_i x) Y_i on the first n chain elements.
// Each R_i is Hermitian, traceless and orthogonal to Y_i, ..., Y_{n-1}, so alpha
// is strictly lower triangular on the chain, kills I and maps into ker phi.
// The single chain R_i = F_{i-1} seeds epsilon_tune; refinement then maximizes
// sum_i log tr(R_i Y_{i-1}) over all admissible R_i subject to the Choi floor.
StateRoot faithful_root_on_chain(const StateSpec& state, int n, const StateRootOptions& opts, const Chain& chain) {
    const int d = state.dim;
    const CMap phi = state_map(state);
    const CMatrix c0 = phi.choi();
    const std::vector<CMatrix>& ys = chain.ys;

    CMatrix alpha = CMatrix::Zero(d * d, d * d);
    for (int i = 1; i < n; ++i) alpha += vec(ys[i]) * vec(chain.fs[i - 1].transpose()).transpose();

    StateRoot out{phi, {}, 0.0, {}, n, 0};
    const EpsilonChoice eps = epsilon_tune(phi, alpha, opts.psd_floor);
    out.epsilon = eps.epsilon;
    CMatrix s = phi.superop() + eps.epsilon * alpha;
    out.weights.assign(n - 1, eps.epsilon);

    if (opts.refine_weights) {
        const std::vector<CMatrix> herm = canonical_hermitian(d);
        const CMatrix id = CMatrix::Identity(d, d);
        std::vector<CMatrix> links, superops;
        std::vector<std::pair<int, double>> reads;  // (link, tr(B Y_{i-1})) per variable
        std::vector<double> start;
        for (int i = 1; i < n; ++i) {
            RMatrix cons(1 + n - i, static_cast<Eigen::Index>(herm.size()));
            cons.row(0) = hermitian_coords(id, herm).transpose();
            for (int l = i; l < n; ++l) cons.row(1 + l - i) = hermitian_coords(ys[l], herm).transpose();
            Eigen::JacobiSVD<RMatrix> svd(cons, Eigen::ComputeFullV);
            const RMatrix& v = svd.matrixV();
            for (Eigen::Index col = cons.rows(); col < v.cols(); ++col) {
                CMatrix b = CMatrix::Zero(d, d);
                for (std::size_t a = 0; a < herm.size(); ++a) b += v(a, col) * herm[a];
                links.push_back(hermitian_part(kron(b.transpose(), ys[i])));
                superops.push_back(vec(ys[i]) * vec(b.transpose()).transpose());
                reads.emplace_back(i - 1, (b * ys[i - 1]).trace().real());
                start.push_back((b * chain.fs[i - 1]).trace().real());
            }
        }
        const Eigen::Index count = static_cast<Eigen::Index>(links.size());
        LogWeightProblem problem{c0, links, opts.psd_floor + 1e-3 * choi_min(c0), RMatrix::Zero(n - 1, count)};
        for (Eigen::Index t = 0; t < count; ++t) problem.objective(reads[t].first, t) = reads[t].second;

        double scale = eps.epsilon;
        const CMatrix ca = choi_from_superop(alpha);
        while (scale > 1e-14 && choi_min(c0 + scale * ca) <= problem.floor) scale *= 0.5;
        const RVector z = maximize_log_weights(problem, scale * Eigen::Map<const RVector>(start.data(), count));

        s = phi.superop();
        for (Eigen::Index t = 0; t < count; ++t) s += z(t) * superops[t];
        const RVector w = problem.objective * z;
        out.weights.assign(w.data(), w.data() + w.size());
    }

    out.tau = CMap::from_superop(s);
    out.certificate = verify_proper_root(out.tau, phi, n, opts.tol);
    return out;
}

}  // namespace

StateRoot construct_state_root_faithful(const StateSpec& state, int n, const StateRootOptions& opts) {
    if (!state.faithful()) throw Error(ErrorCode::NotFaithful, "state must be faithful");
    const int d = state.dim;
    if (n < 2 || n > d * d - 1)
        throw Error(ErrorCode::OrderOutOfRange, "order " + std::to_string(n) + " outside [2, d^2-1]");

    std::vector<ChainBasis> candidates{opts.basis};
    if (opts.basis == ChainBasis::Auto) {
        candidates = {ChainBasis::Canonical};
        // Weighting is the identity on the maximally mixed state.
        const bool flat = state.eigenvalues.maxCoeff() - state.eigenvalues.minCoeff() < 1e-12;
        if (!flat) candidates.push_back(ChainBasis::CanonicalWeighted);
        if (d == 4) candidates.push_back(ChainBasis::PauliCycle);
        if (d == 4 && !flat) candidates.push_back(ChainBasis::PauliWeighted);
    }
    std::optional<StateRoot> best;
    for (ChainBasis basis : candidates) {
        StateRoot root = faithful_root_on_chain(state, n, opts, chain_elements(state, basis));
        const auto score = [](const StateRoot& x) {
            return std::make_pair(x.certificate.accepted, x.certificate.min_margin());
        };
        if (!best || score(root) > score(*best)) best = std::move(root);
    }
    if (!best->certificate.accepted)
        throw Error(ErrorCode::ConstructionFailed, "faithful root rejected: " + best->certificate.reason);
    return *best;
}

StateRoot construct_state_root_general(const StateSpec& state, int n, const StateRootOptions& opts) {
    const int d = state.dim;
    const int r = state.support_rank;
    if (r == d) return construct_state_root_faithful(state, n, opts);
    const int bound = max_root_order_state(d, r);
    if (n < 2 || n > bound)
        throw Error(ErrorCode::OrderOutOfRange,
                    "order " + std::to_string(n) + " outside [2, " + std::to_string(bound) + "]");

    const int rc = d - r;
    const int n1 = std::min(n - 1, r * r - 1);
    const int n2 = n - n1;
    if (n2 > rc) throw Error(ErrorCode::OrderOutOfRange, "complement too small for the requested order");

    // Support block in the eigenbasis of D.
    std::vector<double> lambda(state.eigenvalues.data(), state.eigenvalues.data() + r);
    double total = 0.0;
    for (double x : lambda) total += x;
    for (double& x : lambda) x /= total;
    const StateSpec support = StateSpec::diagonal(lambda);
    const CMap phi_r = state_map(support);

    const CMap phi = state_map(state);
    StateRoot out{phi, {}, 0.0, {}, n1, n2};
    std::optional<CMap> tau_a;
    if (n1 >= 2) {
        StateRoot inner = construct_state_root_faithful(support, n1, opts);
        out.epsilon = inner.epsilon;
        out.weights = inner.weights;
        tau_a = inner.tau;
    } else {
        tau_a = phi_r;
    }
    const std::vector<CMatrix> a_ops = kraus_of(*tau_a);

    // Unit vector u in C^r with <u, (tau_a^{n1-1}(w) - phi_r(w)) u> != 0 for some w.
    CVector u = CVector::Zero(r);
    u(0) = 1.0;
    if (n1 >= 2) {
        CMatrix m = CMatrix::Identity(r * r, r * r);
        for (int k = 0; k < n1 - 1; ++k) m = m * tau_a->superop();
        m -= phi_r.superop();
        RVector g(r);
        for (int l = 0; l < r; ++l) g(l) = m.row(l + l * r).norm();
        const double gmax = g.maxCoeff();
        if (gmax > 1e-6 * m.norm()) {
            for (int l = 0; l < r; ++l)
                if (g(l) >= 0.1 * gmax) {
                    u.setZero();
                    u(l) = 1.0;
                    break;
                }
        } else {
            // No diagonal entry distinguishes; use an eigenvector of a Hermitian image.
            double best = -1.0;
            CMatrix best_h;
            for (int a = 0; a < r; ++a)
                for (int b = a; b < r; ++b) {
                    const CMatrix e = matrix_unit(r, a, b);
                    for (const CMatrix& w : {CMatrix(e + e.adjoint()), CMatrix(cplx(0, 1) * (e - e.adjoint()))}) {
                        const CMatrix h = hermitian_part(unvec(m * vec(w), r));
                        if (h.norm() > best) {
                            best = h.norm();
                            best_h = h;
                        }
                    }
                }
            Eigen::SelfAdjointEigenSolver<CMatrix> es(best_h);
            const RVector& ev = es.eigenvalues();
            u = es.eigenvectors().col(std::abs(ev(0)) >= std::abs(ev(r - 1)) ? 0 : r - 1);
        }
    }

    // D = J/2 of order n2 on the complement, c_j^2 = 1 - (D^*D)_jj.
    CMatrix dblock = CMatrix::Zero(rc, rc);
    for (int j = 0; j + 1 < n2; ++j) dblock(j, j + 1) = 0.5;
    const RVector ddiag = (dblock.adjoint() * dblock).diagonal().real();

    const CMatrix& w = state.eigenvectors;
    std::vector<CMatrix> kraus;
    for (const CMatrix& a : a_ops) {
        CMatrix l = CMatrix::Zero(d, d);
        l.topLeftCorner(r, r) = a;
        kraus.push_back(w * l * w.adjoint());
    }
    for (int j = 0; j < rc; ++j) {
        CMatrix l = CMatrix::Zero(d, d);
        l.block(0, r + j, r, 1) = std::sqrt(std::max(0.0, 1.0 - ddiag(j))) * u;
        kraus.push_back(w * l * w.adjoint());
    }
    if (n2 >= 2) {
        CMatrix l = CMatrix::Zero(d, d);
        l.bottomRightCorner(rc, rc) = dblock;
        kraus.push_back(w * l * w.adjoint());
    }

    CMatrix sum_a = CMatrix::Zero(r, r);
    for (const CMatrix& a : a_ops) sum_a += a.adjoint() * a;
    const double a_residual = max_abs(sum_a - CMatrix::Identity(r, r));
    if (a_residual > opts.tol.unital)
        throw Error(ErrorCode::ConstructionFailed, "support Kraus family not unital: " + num(a_residual));

    out.tau = CMap::from_kraus(kraus);
    out.certificate = verify_proper_root(out.tau, phi, n, opts.tol);
    if (!out.certificate.accepted)
        throw Error(ErrorCode::ConstructionFailed, "root rejected: " + out.certificate.reason);
    return out;
}

StateRoot construct_state_root(const StateSpec& state, int n, const StateRootOptions& opts) {
    return state.faithful() ? construct_state_root_faithful(state, n, opts) : construct_state_root_general(state, n, opts);
}

}  // namespace cproots
