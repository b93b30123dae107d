#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cproots/cpmap.hpp"

namespace cproots {

struct RootTolerance {
    double residual = 1e-8;
    double properness_floor = 1e-6;
    double psd = 1e-8;
    double unital = 1e-8;
};

// Superoperator distances are Frobenius norms.
struct RootCertificate {
    int n = 0;
    double residual_power = 0.0;
    std::vector<double> properness_margins;  // ||tau^k - phi|| for k = 1..n-1
    double choi_min_eig = 0.0;
    double unitality_residual = 0.0;
    bool accepted = false;
    std::string reason;

    double min_margin() const;
};

RootCertificate verify_proper_root(const CMap& tau, const CMap& phi, int n, const RootTolerance& tol = {});

struct StateRootDecomposition {
    CMatrix alpha;
    int order = 0;
};

// tau = phi + alpha with alpha nilpotent and alpha phi = 0 = phi alpha.
// Throws NotAStateRoot naming the first violated condition.
StateRootDecomposition state_root_decompose(const CMap& tau, const StateSpec& state, const Tolerance& tol = {});
StateRootDecomposition state_root_decompose(const CMap& tau, const CMap& phi, const Tolerance& tol = {});

// Four equivalent characterizations of roots of state maps.
struct RootConditions {
    bool rank_one_power = false;     // some tau^k, k <= p-1, is rank one and unital
    bool decomposes = false;         // tau = phi + alpha against phi = tau^p
    bool zero_multiplicity = false;  // eigenvalue 0 has algebraic multiplicity p-1
    bool unit_traces = false;        // tr tau^k = 1 for k = 1..p
    int rank_one_exponent = 0;
    int zero_multiplicity_count = 0;

    bool all() const { return rank_one_power && decomposes && zero_multiplicity && unit_traces; }
    bool none() const { return !rank_one_power && !decomposes && !zero_multiplicity && !unit_traces; }
};

RootConditions root_conditions(const CMap& tau, double tol = 1e-8);

// d + r^2 - r - 1
int max_root_order_state(int d, int r);

struct PhiBasis {
    CMatrix density;
    std::vector<CMatrix> elements;  // Hermitian, tr(D Y) = 0, Hilbert-Schmidt orthonormal
};

PhiBasis phi_orthogonal_basis(const StateSpec& state);

// Weighted variants orthonormalize against D^(1/2) and conjugate by D^(-1/4),
// which keeps the chain from piling weight onto small eigenvalues of D.
enum class ChainBasis {
    Auto,               // every basis that applies, keeping the largest margin
    Canonical,          // phi_orthogonal_basis order
    CanonicalWeighted,
    PauliCycle,         // two-qubit Pauli sequence, d = 4 only
    PauliWeighted,      // d = 4 only
};

struct StateRootOptions {
    ChainBasis basis = ChainBasis::Auto;
    // Re-optimize the nilpotent part after epsilon_tune: link i may read any
    // functional vanishing on I and on the later chain elements.
    bool refine_weights = true;
    double psd_floor = 1e-8;
    RootTolerance tol;
};

struct EpsilonChoice {
    double epsilon = 0.0;  // largest dyadic value meeting the floor
    double refined = 0.0;  // one bisection step above epsilon
    double choi_min_eig = 0.0;
};

// Largest epsilon in {1, 1/2, ..., 2^-40} with min eig Choi(phi + eps alpha) >= psd_floor.
EpsilonChoice epsilon_tune(const CMap& phi, const CMatrix& alpha, double psd_floor = 1e-8);

struct StateRoot {
    CMap tau;
    RootCertificate certificate;
    double epsilon = 0.0;
    std::vector<double> weights;  // per-link chain weights of the faithful part
    int n1 = 0;                   // order carried by the support block
    int n2 = 0;                   // order carried by the complement block
};

StateRoot construct_state_root_faithful(const StateSpec& state, int n, const StateRootOptions& opts = {});
StateRoot construct_state_root_general(const StateSpec& state, int n, const StateRootOptions& opts = {});
// Dispatches on faithfulness.
StateRoot construct_state_root(const StateSpec& state, int n, const StateRootOptions& opts = {});

struct SearchOptions {
    int restarts = 8;
    int max_iters = 300;
    std::uint64_t seed = 1;
    RootTolerance tol;
};

struct SearchResult {
    bool found = false;  // false means Inconclusive, never non-existence
    std::optional<CMap> tau;
    RootCertificate best;
    int restarts_used = 0;
};

// Multi-restart least squares over Stiefel-parameterized Kraus families.
SearchResult search_root_numeric(const CMap& phi, int n, const SearchOptions& opts = {});

// Any root commutes with phi, so it preserves each simple eigenvector X of phi
// and scales it by a real mu when X can be taken Hermitian. A negative simple
// eigenvalue then rules out every even n.
struct CommutantObstruction {
    bool refuted = false;
    double eigenvalue = 0.0;
    std::string reason;
};

CommutantObstruction commutant_obstruction(const CMap& phi, int n, double tol = 1e-9);

}  // namespace cproots
