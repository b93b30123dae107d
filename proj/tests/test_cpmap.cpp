#include <random>

#include "doctest.h"

#include "cproots/cpmap.hpp"
#include "cproots/discrete_roots.hpp"
#include "cproots/error.hpp"
#include "cproots/fixtures.hpp"
#include "oracles.hpp"

using namespace cproots;

namespace {

CMatrix random_matrix(std::mt19937_64& rng, int r, int c) {
    std::normal_distribution<double> g;
    CMatrix m(r, c);
    for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = cplx(g(rng), g(rng));
    return m;
}

// Kraus family of a random UNCP map: blocks of a random isometry.
std::vector<CMatrix> random_unital_kraus(std::mt19937_64& rng, int d, int k) {
    const CMatrix z = random_matrix(rng, k * d, d);
    const CMatrix v = Eigen::HouseholderQR<CMatrix>(z).householderQ() * CMatrix::Identity(k * d, d);
    std::vector<CMatrix> out;
    for (int i = 0; i < k; ++i) out.push_back(v.middleRows(i * d, d));
    return out;
}

CMatrix diag(std::initializer_list<double> v) {
    RVector r(v.size());
    int i = 0;
    for (double x : v) r(i++) = x;
    return r.cast<cplx>().asDiagonal();
}

}  // namespace

TEST_SUITE("cpmap") {

TEST_CASE("powers and composition") {
    const CMap id = CMap::identity(2);
    CHECK(max_abs(power(id, 5).superop() - id.superop()) == 0.0);
    CHECK(max_abs(power(fixtures::offdiag_scaling_map(0.5), 0).superop() - id.superop()) == 0.0);

    const CMap sq = power(fixtures::offdiag_scaling_map(0.5), 2);
    CHECK(max_abs(sq.superop() - fixtures::offdiag_scaling_map(0.25).superop()) < 1e-15);

    const CMap swap = fixtures::swap_diagonal_map();
    CHECK(max_abs(compose(swap, swap).superop() - fixtures::diagonal_restriction_map().superop()) < 1e-15);
}

TEST_CASE("compose is associative and means a after b") {
    std::mt19937_64 rng(1);
    const CMap a = CMap::from_kraus(random_unital_kraus(rng, 2, 2));
    const CMap b = CMap::from_kraus(random_unital_kraus(rng, 2, 3));
    const CMap c = CMap::from_kraus(random_unital_kraus(rng, 2, 2));
    CHECK(max_abs(compose(compose(a, b), c).superop() - compose(a, compose(b, c)).superop()) < 1e-12);
    const CMatrix x = random_matrix(rng, 2, 2);
    CHECK(max_abs(compose(a, b).apply(x) - a.apply(b.apply(x))) < 1e-12);
}

TEST_CASE("superoperator of a Kraus family matches direct action") {
    std::mt19937_64 rng(2);
    for (int d = 2; d <= 4; ++d) {
        const auto kraus = random_unital_kraus(rng, d, 3);
        const CMatrix s = oracle::superop_of([&](const CMatrix& x) { return oracle::kraus_apply(kraus, x); }, d);
        CHECK(max_abs(superop_from_kraus(kraus) - s) < 1e-12);
        CHECK(max_abs(CMap::from_kraus(kraus).superop() - s) < 1e-12);
    }
}

TEST_CASE("Choi matrix fixtures") {
    CMatrix expected = CMatrix::Zero(4, 4);
    expected(0, 0) = expected(0, 3) = expected(3, 0) = expected(3, 3) = 1.0;
    CHECK(max_abs(choi_of(CMap::identity(2)) - expected) == 0.0);

    expected(0, 3) = expected(3, 0) = 0.5;
    CHECK(max_abs(choi_of(fixtures::offdiag_scaling_map(0.5)) - expected) < 1e-15);

    CHECK(max_abs(choi_of(CMap::from_superop(CMatrix::Zero(4, 4)))) == 0.0);
}

TEST_CASE("Choi matrix equals block matrix of images") {
    std::mt19937_64 rng(3);
    const auto kraus = random_unital_kraus(rng, 3, 2);
    const CMap m = CMap::from_kraus(kraus);
    const CMatrix c = oracle::choi_of([&](const CMatrix& x) { return oracle::kraus_apply(kraus, x); }, 3);
    CHECK(max_abs(choi_of(m) - c) < 1e-12);
    CHECK(max_abs(superop_from_choi(c) - m.superop()) < 1e-12);
}

TEST_CASE("cp, unital and idempotent flags") {
    const CMap half = fixtures::offdiag_scaling_map(0.5);
    CHECK(is_cp(half).flag);
    CHECK(is_unital(half));
    CHECK_FALSE(is_idempotent(half));
    CHECK(is_idempotent(fixtures::diagonal_restriction_map()));
    const PsdResult t = is_cp(fixtures::transpose_map(2));
    CHECK_FALSE(t.flag);
    CHECK(t.min_eig == doctest::Approx(-1.0));
}

TEST_CASE("kraus_from_choi fixtures") {
    const auto id = kraus_from_choi(choi_of(CMap::identity(2)));
    REQUIRE(id.size() == 1);
    // Equal to the identity up to a phase.
    const cplx phase = id[0](0, 0);
    CHECK(std::abs(std::abs(phase) - 1.0) < 1e-12);
    CHECK(max_abs(id[0] - phase * CMatrix::Identity(2, 2)) < 1e-12);

    const auto diag_kraus = kraus_from_choi(choi_of(fixtures::diagonal_restriction_map()));
    REQUIRE(diag_kraus.size() == 2);
    for (const CMatrix& l : diag_kraus) {
        CHECK(std::abs(l(0, 1)) < 1e-12);
        CHECK(std::abs(l(1, 0)) < 1e-12);
    }
    CHECK(kraus_from_choi(CMatrix::Zero(4, 4)).empty());
    CHECK_THROWS_AS(kraus_from_choi(choi_of(fixtures::transpose_map(2))), Error);
}

TEST_CASE("Kraus, Choi and superoperator round trips") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 10; ++trial) {
        const int d = 2 + trial % 3;
        const auto kraus = random_unital_kraus(rng, d, 1 + trial % 4);
        const CMap a = CMap::from_kraus(kraus);
        CHECK(a.flags().cp);
        CHECK(a.flags().choi_min_eig >= -1e-10);
        const CMap b = CMap::from_kraus(kraus_from_choi(choi_of(a)));
        const CMap c = CMap::from_superop(superop_from_choi(choi_from_superop(a.superop())));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                const CMatrix e = matrix_unit(d, i, j);
                CHECK(max_abs(a.apply(e) - b.apply(e)) < 1e-9);
                CHECK(max_abs(a.apply(e) - c.apply(e)) < 1e-9);
            }
    }
}

TEST_CASE("support projections") {
    const CMap half_mixed = state_map(StateSpec::diagonal({0.5, 0.5, 0.0}));
    Projection p = support_projection(half_mixed);
    CHECK(p.rank == 2);
    CHECK(max_abs(p.matrix - diag({1, 1, 0})) < 1e-12);

    p = support_projection(CMap::identity(3));
    CHECK(p.rank == 3);
    CHECK(max_abs(p.matrix - CMatrix::Identity(3, 3)) < 1e-12);

    p = support_projection(state_map(StateSpec::diagonal({1.0, 0.0})));
    CHECK(p.rank == 1);
    CHECK(max_abs(p.matrix - diag({1, 0})) < 1e-12);

    CHECK_THROWS_AS(support_projection(fixtures::transpose_map(2)), Error);
}

TEST_CASE("support projection is minimal on diagonal states") {
    // Every proper spectral sub-projection q of p fails phi(q) = I.
    const std::vector<std::vector<double>> states = {
        {1, 0}, {0.5, 0.5}, {0.5, 0.5, 0}, {0.2, 0, 0.8}, {0.1, 0.2, 0.3, 0.4}, {0.5, 0, 0.5, 0}, {0, 0, 0, 1}};
    for (const auto& probs : states) {
        const int d = static_cast<int>(probs.size());
        const CMap phi = state_map(StateSpec::diagonal(probs));
        const Projection p = support_projection(phi);
        std::vector<int> on;
        for (int i = 0; i < d; ++i)
            if (std::abs(p.matrix(i, i) - 1.0) < 1e-12) on.push_back(i);
        CHECK(static_cast<int>(on.size()) == p.rank);
        const int subsets = 1 << on.size();
        for (int mask = 0; mask < subsets - 1; ++mask) {
            CMatrix q = CMatrix::Zero(d, d);
            for (std::size_t k = 0; k < on.size(); ++k)
                if (mask & (1 << k)) q(on[k], on[k]) = 1.0;
            CHECK(max_abs(phi.apply(q) - CMatrix::Identity(d, d)) > 1e-9);
        }
    }
}

TEST_CASE("block decomposition") {
    const Projection full = make_projection(diag({1, 1, 0}));
    const Blocks id = block_decompose(CMatrix::Identity(3, 3), full);
    CHECK(max_abs(id.x11 - CMatrix::Identity(2, 2)) < 1e-15);
    CHECK(max_abs(id.x12) < 1e-15);
    CHECK(max_abs(id.x21) < 1e-15);
    CHECK(max_abs(id.x22 - CMatrix::Identity(1, 1)) < 1e-15);

    CMatrix x(2, 2);
    x << 1, 2, 3, 4;
    const Blocks b = block_decompose(x, make_projection(diag({1, 0})));
    CHECK(b.x11(0, 0) == cplx(1));
    CHECK(b.x12(0, 0) == cplx(2));
    CHECK(b.x21(0, 0) == cplx(3));
    CHECK(b.x22(0, 0) == cplx(4));

    std::mt19937_64 rng(5);
    const CMatrix h = random_matrix(rng, 4, 2);
    const CMatrix q = Eigen::HouseholderQR<CMatrix>(h).householderQ() * CMatrix::Identity(4, 2);
    const Projection p = make_projection(q * q.adjoint());
    const CMatrix y = random_matrix(rng, 4, 4);
    CHECK(max_abs(block_assemble(block_decompose(y, p), p) - y) < 1e-12);
}

TEST_CASE("compressions") {
    const Projection p = make_projection(diag({1, 1, 0}));
    CHECK(max_abs(compress(CMap::identity(3), p).superop() - CMap::identity(2).superop()) < 1e-14);

    const StateSpec s = StateSpec::diagonal({0.7, 0.3, 0.0});
    const CMap phi = state_map(s);
    const CMap c = compress(phi, support_projection(phi));
    CHECK(c.dim() == 2);
    CHECK(max_abs(c.superop() - state_map(StateSpec::diagonal({0.7, 0.3})).superop()) < 1e-12);

    // A map that moves mass out of the support is rejected.
    CHECK_THROWS_AS(compress(fixtures::swap_diagonal_map(), make_projection(diag({1, 0}))), Error);
}

TEST_CASE("compressing a non-faithful state root recovers its support root") {
    // Eigenvectors are only fixed up to sign, so the support root is compared
    // modulo conjugation by a diagonal sign unitary.
    const StateSpec s = StateSpec::diagonal({0.6, 0.4, 0.0});
    const StateSpec support = StateSpec::diagonal({0.6, 0.4});
    const Projection p = support_projection(state_map(s));
    for (int n = 2; n <= max_root_order_state(3, 2); ++n) {
        const StateRoot root = construct_state_root_general(s, n);
        REQUIRE(root.certificate.accepted);
        const CMap c = compress(root.tau, p);
        const CMap inner = root.n1 >= 2 ? construct_state_root_faithful(support, root.n1).tau : state_map(support);
        double best = 1e300;
        for (int mask = 0; mask < 4; ++mask) {
            CMatrix w = CMatrix::Identity(2, 2);
            for (int k = 0; k < 2; ++k)
                if (mask & (1 << k)) w(k, k) = -1.0;
            const CMatrix conj = kron(w, w);  // x -> w x w, an involution
            best = std::min(best, max_abs(conj * c.superop() * conj - inner.superop()));
        }
        CHECK(best < 1e-10);
    }
}

TEST_CASE("state specs") {
    CMatrix d(2, 2);
    d << 0.25, 0, 0, 0.75;
    const StateSpec s = StateSpec::from_density(d);
    CHECK(s.eigenvalues(0) == doctest::Approx(0.75));
    CHECK(s.support_rank == 2);
    CHECK(s.faithful());
    CHECK_THROWS_AS(StateSpec::from_density(CMatrix::Identity(2, 2)), Error);
    CHECK_THROWS_AS(StateSpec::diagonal({1.5, -0.5}), Error);
    const auto back = state_density_of(state_map(s));
    REQUIRE(back.has_value());
    CHECK(max_abs(*back - d) < 1e-12);
    CHECK_FALSE(state_density_of(fixtures::offdiag_scaling_map(0.5)).has_value());
}

TEST_CASE("state roots absorb their support projection") {
    for (int d = 2; d <= 4; ++d)
        for (int r = 1; r < d; ++r) {
            std::vector<double> probs(d, 0.0);
            for (int i = 0; i < r; ++i) probs[i] = (i + 1.0) / (r * (r + 1) / 2.0);
            const StateSpec s = StateSpec::diagonal(probs);
            const Projection p = support_projection(state_map(s));
            for (int n = 2; n <= max_root_order_state(d, r); ++n) {
                const StateRoot root = construct_state_root(s, n);
                const CMatrix gap = root.tau.apply(p.matrix) - p.matrix;
                CHECK(eig_hermitian(hermitian_part(gap)).eigenvalues(0) >= -1e-9);
            }
        }
}

}  // TEST_SUITE
