#include <limits>
#include <random>

#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "cproots/discrete_roots.hpp"

namespace cproots {

namespace {

// Unconstrained Z (K d x d) -> isometry V = Z (Z^* Z)^{-1/2}; the d x d blocks
// of V are Kraus operators of a unital CP map.
std::vector<CMatrix> kraus_from_params(const Eigen::VectorXd& x, int d, int k) {
    const Eigen::Index rows = static_cast<Eigen::Index>(k) * d;
    const Eigen::Index half = rows * d;
    CMatrix z(rows, d);
    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) z(i, j) = cplx(x(i + j * rows), x(half + i + j * rows));
    Eigen::SelfAdjointEigenSolver<CMatrix> es(z.adjoint() * z);
    const CMatrix v = z * es.operatorInverseSqrt();
    std::vector<CMatrix> out;
    for (int i = 0; i < k; ++i) out.push_back(v.middleRows(static_cast<Eigen::Index>(i) * d, d));
    return out;
}

struct PowerResidual {
    using Scalar = double;
    enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
    using InputType = Eigen::VectorXd;
    using ValueType = Eigen::VectorXd;
    using JacobianType = Eigen::MatrixXd;

    int d;
    int k;
    int n;
    CMatrix target;

    int inputs() const { return 2 * k * d * d; }
    int values() const { return 2 * d * d * d * d; }

    int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
        const CMatrix s = superop_from_kraus(kraus_from_params(x, d, k));
        CMatrix p = s;
        for (int i = 1; i < n; ++i) p = p * s;
        const CMatrix diff = p - target;
        const Eigen::Index m = diff.size();
        f.resize(2 * m);
        for (Eigen::Index i = 0; i < m; ++i) {
            f(i) = diff(i).real();
            f(m + i) = diff(i).imag();
        }
        return 0;
    }
};

}  // namespace

SearchResult search_root_numeric(const CMap& phi, int n, const SearchOptions& opts) {
    if (n < 2) throw Error(ErrorCode::OrderOutOfRange, "root order must be at least 2");
    const int d = phi.dim();
    PowerResidual functor{d, d * d, n, phi.superop()};
    SearchResult result;
    result.best.residual_power = std::numeric_limits<double>::infinity();

    for (int restart = 0; restart < opts.restarts; ++restart) {
        std::mt19937_64 rng(opts.seed * 1000003ULL + static_cast<std::uint64_t>(restart));
        std::normal_distribution<double> normal;
        Eigen::VectorXd x(functor.inputs());
        for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = normal(rng);

        Eigen::NumericalDiff<PowerResidual> numdiff(functor);
        Eigen::LevenbergMarquardt<Eigen::NumericalDiff<PowerResidual>> lm(numdiff);
        lm.parameters.maxfev = opts.max_iters * (functor.inputs() + 1);
        lm.parameters.xtol = 1e-15;
        lm.parameters.ftol = 1e-15;
        lm.minimize(x);

        const CMap tau = CMap::from_kraus(kraus_from_params(x, d, functor.k));
        RootCertificate cert = verify_proper_root(tau, phi, n, opts.tol);
        result.restarts_used = restart + 1;
        if (cert.accepted) {
            result.found = true;
            result.tau = tau;
            result.best = std::move(cert);
            return result;
        }
        if (cert.residual_power < result.best.residual_power) result.best = std::move(cert);
    }
    return result;
}

}  // namespace cproots
