#pragma once

#include <optional>
#include <vector>

#include "cproots/numerics.hpp"

namespace cproots {

struct MapFlags {
    bool unital = false;
    bool cp = false;
    bool idempotent = false;
    double choi_min_eig = 0.0;
    double unital_residual = 0.0;
    Tolerance tol;
};

// Linear map on M_d in the Heisenberg picture, x -> sum_i L_i^* x L_i when
// Kraus operators are given. The superoperator acts on column-stacked vec(x).
class CMap {
public:
    static CMap from_superop(const CMatrix& superop, const Tolerance& tol = {});
    static CMap from_kraus(const std::vector<CMatrix>& kraus, const Tolerance& tol = {});
    static CMap identity(int d);

    int dim() const { return dim_; }
    const CMatrix& superop() const { return superop_; }
    const std::optional<std::vector<CMatrix>>& kraus() const { return kraus_; }
    const CMatrix& choi() const { return choi_; }
    const MapFlags& flags() const { return flags_; }

    CMatrix apply(const CMatrix& x) const;

private:
    CMap(int d, CMatrix superop, std::optional<std::vector<CMatrix>> kraus, const Tolerance& tol);

    int dim_;
    CMatrix superop_;
    std::optional<std::vector<CMatrix>> kraus_;
    CMatrix choi_;
    MapFlags flags_;
};

// a after b.
CMap compose(const CMap& a, const CMap& b);
CMap power(const CMap& map, int k);

CMatrix superop_from_kraus(const std::vector<CMatrix>& kraus);
CMatrix choi_from_superop(const CMatrix& superop);
CMatrix superop_from_choi(const CMatrix& choi);
CMatrix choi_of(const CMap& map);

PsdResult is_cp(const CMap& map, const Tolerance& tol = {});
bool is_unital(const CMap& map, const Tolerance& tol = {});
bool is_idempotent(const CMap& map, const Tolerance& tol = {});
bool is_uncp(const CMap& map, const Tolerance& tol = {});

// Kraus family from the spectral decomposition of a PSD Choi matrix.
// Eigenvalues at or below tol.bound(||choi||) are dropped.
std::vector<CMatrix> kraus_from_choi(const CMatrix& choi, const Tolerance& tol = {});

// Kraus family of the map, stored or recovered from its Choi matrix.
std::vector<CMatrix> kraus_of(const CMap& map, const Tolerance& tol = {});

struct Projection {
    int dim = 0;
    int rank = 0;
    CMatrix matrix;
    CMatrix basis;       // d x r, orthonormal columns spanning ran(P)
    CMatrix complement;  // d x (d - r), orthonormal columns spanning ker(P)
};

// Validates P (idempotent, Hermitian) and builds the adapted basis.
Projection make_projection(const CMatrix& p);

Projection support_projection(const CMap& map, const Tolerance& tol = {});

struct Blocks {
    CMatrix x11, x12, x21, x22;
};

Blocks block_decompose(const CMatrix& x, const Projection& p);
CMatrix block_assemble(const Blocks& b, const Projection& p);

// x -> P map(iota(x)) P on M_r, in the adapted basis of P.
CMap compress(const CMap& map, const Projection& p, const Tolerance& tol = {});

struct StateSpec {
    int dim = 0;
    CMatrix density;
    RVector eigenvalues;   // descending
    CMatrix eigenvectors;  // columns matching eigenvalues
    int support_rank = 0;

    static StateSpec from_density(const CMatrix& density, double rank_tol = 1e-9);
    static StateSpec diagonal(const std::vector<double>& probabilities, double rank_tol = 1e-9);
    bool faithful() const { return support_rank == dim; }
};

// x -> tr(D x) I.
CMap state_map(const StateSpec& state);

// If map is a state map x -> tr(D x) I, returns D.
std::optional<CMatrix> state_density_of(const CMap& map, double tol = 1e-8);

// Norm used for superoperator distances: Frobenius.
double superop_distance(const CMatrix& a, const CMatrix& b);

CMatrix matrix_unit(int d, int i, int j);

}  // namespace cproots
