#include "cproots/discrete_roots.hpp"

#include <algorithm>
#include <cmath>

#include "format.hpp"

namespace cproots {

using detail::num;

double RootCertificate::min_margin() const {
    if (properness_margins.empty()) return 0.0;
    return *std::min_element(properness_margins.begin(), properness_margins.end());
}

RootCertificate verify_proper_root(const CMap& tau, const CMap& phi, int n, const RootTolerance& tol) {
    if (tau.dim() != phi.dim()) throw Error(ErrorCode::ShapeMismatch, "tau and phi act on different algebras");
    if (n < 2) throw Error(ErrorCode::OrderOutOfRange, "root order must be at least 2");

    RootCertificate cert;
    cert.n = n;
    CMatrix power = tau.superop();
    for (int k = 1; k < n; ++k) {
        cert.properness_margins.push_back(superop_distance(power, phi.superop()));
        power = power * tau.superop();
    }
    cert.residual_power = superop_distance(power, phi.superop());
    cert.choi_min_eig = tau.flags().choi_min_eig;
    cert.unitality_residual = tau.flags().unital_residual;

    for (int k = 1; k < n; ++k) {
        const double m = cert.properness_margins[k - 1];
        if (!(m > tol.properness_floor)) {
            cert.reason = "properness margin " + num(m) + " at k=" + std::to_string(k);
            return cert;
        }
    }
    if (!(cert.residual_power <= tol.residual)) {
        cert.reason = "power residual " + num(cert.residual_power) + " exceeds " + num(tol.residual);
    } else if (!(cert.choi_min_eig >= -tol.psd)) {
        cert.reason = "Choi min eigenvalue " + num(cert.choi_min_eig) + " below " + num(-tol.psd);
    } else if (!(cert.unitality_residual <= tol.unital)) {
        cert.reason = "unitality residual " + num(cert.unitality_residual) + " exceeds " + num(tol.unital);
    } else {
        cert.accepted = true;
        cert.reason = "accepted";
    }
    return cert;
}

StateRootDecomposition state_root_decompose(const CMap& tau, const CMap& phi, const Tolerance& tol) {
    if (tau.dim() != phi.dim()) throw Error(ErrorCode::ShapeMismatch, "tau and phi act on different algebras");
    if (!state_density_of(phi)) throw Error(ErrorCode::NotAStateRoot, "phi is not rank one");
    StateRootDecomposition out;
    out.alpha = tau.superop() - phi.superop();
    const auto order = nilpotency_order(out.alpha, tol);
    if (!order) throw Error(ErrorCode::NotAStateRoot, "alpha is not nilpotent");
    const double scale = out.alpha.norm() * phi.superop().norm();
    const double right = (out.alpha * phi.superop()).norm();
    if (right > tol.bound(scale)) throw Error(ErrorCode::NotAStateRoot, "alpha phi = " + num(right) + " is not zero");
    const double left = (phi.superop() * out.alpha).norm();
    if (left > tol.bound(scale)) throw Error(ErrorCode::NotAStateRoot, "phi alpha = " + num(left) + " is not zero");
    out.order = *order;
    return out;
}

StateRootDecomposition state_root_decompose(const CMap& tau, const StateSpec& state, const Tolerance& tol) {
    return state_root_decompose(tau, state_map(state), tol);
}

RootConditions root_conditions(const CMap& tau, double tol) {
    const Tolerance t{tol, tol};
    if (!is_uncp(tau, t)) throw Error(ErrorCode::NotUNCP, "tau must be UNCP");
    const int d = tau.dim();
    const int p = d * d;
    const CVector one = vec(CMatrix::Identity(d, d));

    RootConditions out;
    std::vector<CMatrix> powers;
    powers.reserve(p);
    powers.push_back(tau.superop());
    for (int k = 2; k <= p; ++k) powers.push_back(powers.back() * tau.superop());

    for (int k = 1; k <= p - 1 && !out.rank_one_power; ++k) {
        const CMatrix& s = powers[k - 1];
        if (numerical_rank(s, 1e-9) == 1 && (s * one - one).norm() <= tol) {
            out.rank_one_power = true;
            out.rank_one_exponent = k;
        }
    }

    try {
        state_root_decompose(tau, CMap::from_superop(powers.back()), t);
        out.decomposes = true;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NotAStateRoot) throw;
    }

    // Algebraic multiplicity of 0 equals dim ker(T^p).
    out.zero_multiplicity_count = p - numerical_rank(powers.back(), 1e-9);
    out.zero_multiplicity = out.zero_multiplicity_count == p - 1;

    out.unit_traces = true;
    for (const CMatrix& s : powers)
        if (std::abs(s.trace() - cplx(1.0)) > tol) out.unit_traces = false;
    return out;
}

int max_root_order_state(int d, int r) {
    if (r < 1 || r > d) throw Error(ErrorCode::BadRank, "support rank must lie in [1, d]");
    return d + r * r - r - 1;
}

CommutantObstruction commutant_obstruction(const CMap& phi, int n, double tol) {
    CommutantObstruction out;
    const CMatrix& c = phi.choi();
    if ((c - c.adjoint()).norm() > tol * std::max(1.0, c.norm())) {
        out.reason = "phi does not preserve Hermiticity";
        return out;
    }
    Eigen::ComplexEigenSolver<CMatrix> solver(phi.superop(), false);
    const CVector& ev = solver.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        const cplx z = ev(i);
        if (std::abs(z.imag()) > tol * std::max(1.0, std::abs(z)) || z.real() >= -tol) continue;
        bool simple = true;
        for (Eigen::Index j = 0; j < ev.size(); ++j)
            if (j != i && std::abs(ev(j) - z) <= 1e-6) simple = false;
        if (!simple) continue;
        out.eigenvalue = z.real();
        if (n % 2 == 0) {
            out.refuted = true;
            out.reason = "simple eigenvalue " + num(z.real()) +
                         " with Hermitian eigenvector X forces tau(X) = mu X with real mu and mu^" +
                         std::to_string(n) + " < 0";
            return out;
        }
    }
    out.reason = "no negative simple eigenvalue obstructs order " + std::to_string(n);
    return out;
}

}  // namespace cproots
