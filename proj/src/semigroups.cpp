#include "cproots/semigroups.hpp"

#include <cmath>

#include "format.hpp"

namespace cproots {

using detail::num;

const char* refusal_name(RefusalReason reason) {
    switch (reason) {
        case RefusalReason::NotIdempotent: return "NotIdempotent";
        case RefusalReason::NotBijective: return "NotBijective";
        case RefusalReason::NoPrincipalBranch: return "NoPrincipalBranch";
        case RefusalReason::NotCCP: return "NotCCP";
        case RefusalReason::NotProper: return "NotProper";
    }
    return "Unknown";
}

namespace {

GeneratorSpec make_generator(int d, CMatrix l, const Tolerance& tol) {
    GeneratorSpec g;
    g.dim = d;
    g.generator = std::move(l);
    const CcpResult c = is_ccp(g.generator, tol);
    g.ccp = c.flag;
    g.ccp_witness = c.witness;
    g.unital_residual = c.unital_residual;
    return g;
}

}  // namespace

GeneratorOutcome asymptotic_root(const CMap& phi, const Tolerance& tol) {
    if (!is_uncp(phi, tol)) throw Error(ErrorCode::NotUNCP, "phi must be UNCP");
    if (!is_idempotent(phi, tol)) {
        const CMatrix& s = phi.superop();
        return Refusal{RefusalReason::NotIdempotent, false, "phi^2 differs from phi", (s * s - s).norm()};
    }
    const Eigen::Index p = phi.superop().rows();
    return make_generator(phi.dim(), phi.superop() - CMatrix::Identity(p, p), tol);
}

CMap evaluate(const GeneratorSpec& gen, double t) {
    if (t < 0.0) throw Error(ErrorCode::InvalidInput, "time must be nonnegative");
    return CMap::from_superop(mat_exp(t * gen.generator));
}

std::vector<double> asymptotic_rate_check(const GeneratorSpec& gen, const CMap& phi, const CMatrix& x,
                                          const std::vector<double>& ts) {
    const CMatrix fx = phi.apply(x);
    const double gap = spectral_norm(x - fx);
    std::vector<double> out;
    for (double t : ts) {
        const CMatrix tx = unvec(mat_exp(t * gen.generator) * vec(x), gen.dim);
        out.push_back(std::abs(spectral_norm(tx - fx) - std::exp(-t) * gap));
    }
    return out;
}

CcpResult is_ccp(const CMatrix& generator, const Tolerance& tol) {
    require_square(generator, "generator");
    const CMatrix c = choi_from_superop(generator);
    const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(generator.rows()))));
    CcpResult out;
    const double scale = std::max(1.0, c.norm());
    out.hermiticity_preserving = (c - c.adjoint()).norm() <= tol.bound(scale);
    out.unital_residual = max_abs(unvec(generator * vec(CMatrix::Identity(d, d)), d));

    CVector omega = CVector::Zero(d * d);
    for (int i = 0; i < d; ++i) omega(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
    const CMatrix q = CMatrix::Identity(d * d, d * d) - omega * omega.adjoint();
    const CMatrix off = hermitian_part(q * c * q);
    out.witness = Eigen::SelfAdjointEigenSolver<CMatrix>(off, Eigen::EigenvaluesOnly).eigenvalues()(0);
    out.flag = out.hermiticity_preserving && out.unital_residual <= tol.bound(1.0) && out.witness >= -tol.bound(scale);
    return out;
}

bool ccp_by_exponential(const CMatrix& generator, const Tolerance& tol) {
    for (int e = -10; e <= 0; ++e) {
        const CMap tau = CMap::from_superop(mat_exp(std::ldexp(1.0, e) * generator), tol);
        if (!tau.flags().cp) return false;
    }
    return true;
}

GeneratorOutcome continuous_root_candidate(const CMap& phi, const Tolerance& tol) {
    if (!is_uncp(phi, tol)) throw Error(ErrorCode::NotUNCP, "phi must be UNCP");
    const CMatrix& s = phi.superop();
    const RVector sv = singular_values(s);
    const double smallest = sv(sv.size() - 1);
    if (smallest <= tol.bound(sv(0)))
        return Refusal{RefusalReason::NotBijective, false, "superoperator is singular", smallest};

    CMatrix l;
    try {
        l = mat_log_principal(s);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoPrincipalLog) throw;
        return Refusal{RefusalReason::NoPrincipalBranch, true, e.what(), 0.0};
    }
    GeneratorSpec gen = make_generator(phi.dim(), std::move(l), tol);
    if (!gen.ccp)
        return Refusal{RefusalReason::NotCCP, true, "principal logarithm is not conditionally CP", gen.ccp_witness};
    const double recon = (mat_exp(gen.generator) - s).norm();
    if (recon > 1e-8) throw Error(ErrorCode::VerificationFailed, "exp(L) misses phi by " + num(recon));
    for (double t : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        const double margin = (mat_exp(t * gen.generator) - s).norm();
        gen.properness.emplace_back(t, margin);
        if (!(margin > 1e-6))
            return Refusal{RefusalReason::NotProper, false, "tau_t equals phi at t = " + num(t), margin};
    }
    return gen;
}

std::vector<double> state_invariance_check(const MapFamily& family, const CMap& phi, const std::vector<double>& ts) {
    std::vector<double> out;
    for (double t : ts) out.push_back((phi.superop() * family(t).superop() - phi.superop()).norm());
    return out;
}

std::vector<double> absorption_check(const CMap& psi, const MapFamily& family, const std::vector<double>& ts) {
    const CMatrix phi = family(1.0).superop();
    std::vector<double> out;
    for (double t : ts) out.push_back((psi.superop() * family(t).superop() - phi).norm());
    return out;
}

GridShiftFamily::GridShiftFamily(int m) : m_(m) {
    if (m < 2) throw Error(ErrorCode::BadGrid, "grid needs at least two cells");
    const int d = m + 1;
    for (int k = 0; k <= m; ++k) {
        const CMatrix v = isometry(k);
        std::vector<CMatrix> kraus{v.adjoint()};
        // I - V V^* projects onto the first k cells.
        for (int j = 0; j < std::min(k, m); ++j) kraus.push_back(matrix_unit(d, 0, 1 + j));
        maps_.push_back(CMap::from_kraus(kraus));
    }
}

CMatrix GridShiftFamily::isometry(int k) const {
    const int d = m_ + 1;
    CMatrix v = CMatrix::Zero(d, d);
    v(0, 0) = 1.0;
    for (int j = 0; j + k < m_; ++j) v(1 + j + k, 1 + j) = 1.0;
    return v;
}

const CMap& GridShiftFamily::at_step(int k) const {
    if (k < 0) throw Error(ErrorCode::BadGrid, "negative grid step");
    return maps_[std::min(k, m_)];
}

CMap GridShiftFamily::at(double t) const {
    if (t < 0.0) throw Error(ErrorCode::BadGrid, "negative time");
    if (t >= 1.0) return phi();
    const double steps = t * m_;
    const double k = std::round(steps);
    if (std::abs(steps - k) > 1e-9) throw Error(ErrorCode::BadGrid, "time " + num(t) + " is not on the grid");
    return at_step(static_cast<int>(k));
}

CMatrix GridShiftFamily::apply(int k, const CMatrix& x) const {
    const CMatrix v = isometry(std::min(k, m_));
    const int d = m_ + 1;
    return v * x * v.adjoint() + x(0, 0) * (CMatrix::Identity(d, d) - v * v.adjoint());
}

GridShiftFamily grid_shift_root(const GridShiftSpec& spec) {
    return GridShiftFamily(spec.m);
}

StateRefutation refute_continuous_root_state(const StateSpec& state) {
    StateRefutation out;
    out.support_rank = state.support_rank;
    if (state.support_rank <= 1) {
        out.reason = "pure state: proper continuous roots exist";
        return out;
    }
    const CMap phi = state_map(state);
    const Projection p = support_projection(phi);
    const CMap compressed = compress(phi, p);
    const RVector sv = singular_values(compressed.superop());
    out.compressed_size = static_cast<int>(compressed.superop().rows());
    out.compressed_rank = numerical_rank(compressed.superop(), 1e-12);
    out.smallest_singular_value = sv(sv.size() - 1);
    out.refuted = out.compressed_rank < out.compressed_size;
    out.reason = "compressed map on M_" + std::to_string(p.rank) + " has rank " + std::to_string(out.compressed_rank) +
                 " of " + std::to_string(out.compressed_size) + ", so it is not bijective";
    return out;
}

}  // namespace cproots
