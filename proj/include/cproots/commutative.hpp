#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cproots/discrete_roots.hpp"

namespace cproots {

struct ProbVector {
    int dim = 0;
    RVector entries;
    int support_rank = 0;

    // Requires entries >= -1e-15 and a sum of 1 within 1e-12.
    static ProbVector from(const std::vector<double>& p, double rank_tol = 1e-12);
};

// Row-stochastic matrix acting on functions (column vectors).
struct StochMatrix {
    int dim = 0;
    RMatrix entries;
    double row_sum_residual = 0.0;
    double min_entry = 0.0;

    static StochMatrix from(const RMatrix& m);
    bool valid() const { return row_sum_residual <= 1e-10 && min_entry >= -1e-12; }
};

// Every row equal to p^T.
StochMatrix state_to_stochastic(const ProbVector& p);

// Sub-shift on R^{d-r}, d = d_minus_r + r: S e_i = e_{i+1} for
// i = d-n, ..., d-r-1 (1-based), zero elsewhere. Needs r <= n <= d-1.
RMatrix shift_matrix(int d_minus_r, int n, int r);

struct CommutativeOptions {
    bool refine_weights = true;
    RootTolerance tol{1e-8, 1e-6, 1e-12, 1e-10};
};

struct CommutativeRoot {
    StochMatrix tau;
    RootCertificate certificate;  // choi_min_eig holds the minimal entry
    std::string construction;     // "faithful", "small-support" or "split"
    double epsilon = 0.0;
    std::vector<double> weights;
    int n1 = 0;
    int n2 = 0;
    int row = 0;  // support row feeding the complement (0-based, support order)
};

// Certificate for tau^n = |1><p| with tau^k != |1><p| for k < n.
RootCertificate verify_stochastic_root(const RMatrix& tau, const ProbVector& p, int n, const RootTolerance& tol);

CommutativeRoot construct_commutative_root(const ProbVector& p, int n, const CommutativeOptions& opts = {});

// Inclusive order range (2, d-1), empty for d <= 2.
std::optional<std::pair<int, int>> commutative_root_range(int d);

}  // namespace cproots
