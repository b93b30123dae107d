#pragma once

#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cproots/cpmap.hpp"

namespace cproots {

struct GeneratorSpec {
    int dim = 0;
    CMatrix generator;  // superoperator L, tau_t = exp(t L)
    bool ccp = false;
    double ccp_witness = 0.0;
    double unital_residual = 0.0;
    std::vector<std::pair<double, double>> properness;  // (t, ||tau_t - phi||)
};

enum class RefusalReason { NotIdempotent, NotBijective, NoPrincipalBranch, NotCCP, NotProper };

const char* refusal_name(RefusalReason reason);

struct Refusal {
    RefusalReason reason;
    bool heuristic;  // true when the refusal only covers the principal branch
    std::string detail;
    double witness = 0.0;
};

using GeneratorOutcome = std::variant<GeneratorSpec, Refusal>;

// L = phi - id for idempotent UNCP phi; NotIdempotent otherwise.
GeneratorOutcome asymptotic_root(const CMap& phi, const Tolerance& tol = {});

CMap evaluate(const GeneratorSpec& gen, double t);

// | ||tau_t(x) - phi(x)|| - e^{-t} ||x - phi(x)|| | per t, operator norms.
std::vector<double> asymptotic_rate_check(const GeneratorSpec& gen, const CMap& phi, const CMatrix& x,
                                          const std::vector<double>& ts);

struct CcpResult {
    bool flag = false;
    double witness = 0.0;  // min eigenvalue of the Choi matrix off the maximally entangled vector
    bool hermiticity_preserving = false;
    double unital_residual = 0.0;
};

CcpResult is_ccp(const CMatrix& generator, const Tolerance& tol = {});

// Operational check: exp(t L) is CP for t = 2^-10, 2^-9, ..., 1.
bool ccp_by_exponential(const CMatrix& generator, const Tolerance& tol = {});

GeneratorOutcome continuous_root_candidate(const CMap& phi, const Tolerance& tol = {});

using MapFamily = std::function<CMap(double)>;

// ||phi o tau_t - phi|| per t.
std::vector<double> state_invariance_check(const MapFamily& family, const CMap& phi, const std::vector<double>& ts);

// ||psi o tau_t - tau_1|| per t.
std::vector<double> absorption_check(const CMap& psi, const MapFamily& family, const std::vector<double>& ts);

struct GridShiftSpec {
    int m = 2;
};

// tau_{k/m}(x) = V_k x V_k^* + x_11 (I - V_k V_k^*) on C^{1+m}, V_k = 1 (+) S^k with
// S the one-cell right shift; tau_t = phi(x) I for t >= 1.
class GridShiftFamily {
public:
    explicit GridShiftFamily(int m);

    int m() const { return m_; }
    int dim() const { return m_ + 1; }
    const CMap& phi() const { return maps_.back(); }
    const CMap& at_step(int k) const;
    CMap at(double t) const;
    CMatrix isometry(int k) const;
    // Direct evaluation without the superoperator.
    CMatrix apply(int k, const CMatrix& x) const;

private:
    int m_;
    std::vector<CMap> maps_;
};

GridShiftFamily grid_shift_root(const GridShiftSpec& spec);

struct StateRefutation {
    bool refuted = false;  // false: not applicable (pure state)
    int support_rank = 0;
    int compressed_rank = 0;
    int compressed_size = 0;
    double smallest_singular_value = 0.0;
    std::string reason;
};

StateRefutation refute_continuous_root_state(const StateSpec& state);

}  // namespace cproots
