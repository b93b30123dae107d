#include <random>

#include "doctest.h"

#include "cproots/discrete_roots.hpp"
#include "cproots/error.hpp"
#include "cproots/fixtures.hpp"
#include "cproots/semigroups.hpp"
#include "oracles.hpp"

using namespace cproots;

namespace {

CMatrix random_matrix(std::mt19937_64& rng, int r, int c) {
    std::normal_distribution<double> g;
    CMatrix m(r, c);
    for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = cplx(g(rng), g(rng));
    return m;
}

CMap random_uncp(std::mt19937_64& rng, int d, int k) {
    const CMatrix v = Eigen::HouseholderQR<CMatrix>(random_matrix(rng, k * d, d)).householderQ() *
                      CMatrix::Identity(k * d, d);
    std::vector<CMatrix> kraus;
    for (int i = 0; i < k; ++i) kraus.push_back(v.middleRows(i * d, d));
    return CMap::from_kraus(kraus);
}

GeneratorSpec generator(const GeneratorOutcome& out) {
    REQUIRE(std::holds_alternative<GeneratorSpec>(out));
    return std::get<GeneratorSpec>(out);
}

RefusalReason refusal(const GeneratorOutcome& out) {
    REQUIRE(std::holds_alternative<Refusal>(out));
    return std::get<Refusal>(out).reason;
}

std::vector<CMap> idempotent_fixtures() {
    return {fixtures::diagonal_restriction_map(), CMap::identity(2), state_map(StateSpec::diagonal({0.3, 0.7})),
            state_map(StateSpec::diagonal({0.5, 0.5, 0.0})), fixtures::corner_pinching_map()};
}

std::vector<CMap> all_fixtures() {
    std::vector<CMap> out = idempotent_fixtures();
    for (const CMap& m : {fixtures::swap_diagonal_map(), fixtures::offdiag_scaling_map(0.5),
                          fixtures::swap_offdiag_scaling_map(0.5), fixtures::transpose_map(2)})
        out.push_back(m);
    return out;
}

}  // namespace

TEST_SUITE("semigroups") {

TEST_CASE("asymptotic roots") {
    const CMap phi = fixtures::diagonal_restriction_map();
    const GeneratorSpec g = generator(asymptotic_root(phi));
    for (double t : {0.0, 0.3, 1.0, 4.0}) {
        const CMatrix x = oracle::unit(2, 0, 1);
        CHECK(std::abs(evaluate(g, t).apply(x)(0, 1) - std::exp(-t)) < 1e-12);
    }
    CHECK(max_abs(generator(asymptotic_root(CMap::identity(2))).generator) == 0.0);
    CHECK(refusal(asymptotic_root(fixtures::offdiag_scaling_map(0.5))) == RefusalReason::NotIdempotent);
    CHECK_THROWS_AS(asymptotic_root(fixtures::transpose_map(2)), Error);
}

TEST_CASE("evaluate matches the closed form") {
    const CMap phi = fixtures::diagonal_restriction_map();
    const GeneratorSpec g = generator(asymptotic_root(phi));
    CHECK(max_abs(evaluate(g, 0.0).superop() - CMap::identity(2).superop()) < 1e-15);
    CMatrix x(2, 2);
    x << 1, 1, 1, 1;
    CMatrix expected(2, 2);
    expected << 1, std::exp(-1.0), std::exp(-1.0), 1;
    CHECK(max_abs(evaluate(g, 1.0).apply(x) - expected) < 1e-12);

    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double s = u(rng), t = u(rng);
        CHECK(superop_distance(compose(evaluate(g, s), evaluate(g, t)).superop(), evaluate(g, s + t).superop()) <=
              1e-10);
        const CMatrix y = random_matrix(rng, 2, 2);
        const auto phi_fn = [&](const CMatrix& z) { return phi.apply(z); };
        CHECK(max_abs(evaluate(g, t).apply(y) - oracle::asymptotic_closed_form(phi_fn, y, t)) < 1e-10);
    }
}

TEST_CASE("asymptotic semigroups stay UNCP") {
    for (const CMap& phi : idempotent_fixtures()) {
        const GeneratorSpec g = generator(asymptotic_root(phi));
        for (double t : {0.1, 0.5, 1.0, 5.0, 20.0}) {
            const CMap m = evaluate(g, t);
            CHECK(m.flags().choi_min_eig >= -1e-10);
            CHECK(m.flags().unital);
        }
    }
}

TEST_CASE("non-idempotent powers do not settle on phi") {
    for (const CMap& phi : {fixtures::swap_diagonal_map(), fixtures::offdiag_scaling_map(0.5),
                            fixtures::swap_offdiag_scaling_map(0.5)}) {
        CHECK(refusal(asymptotic_root(phi)) == RefusalReason::NotIdempotent);
        double lowest = 1e300;
        for (int n = 1; n <= 64; ++n)
            lowest = std::min(lowest, superop_distance(power(phi, 2 * n).superop(), power(phi, n).superop()));
        const CMap limit = power(phi, 128);
        const bool oscillates = lowest > 1e-3;
        const bool other_limit = is_idempotent(limit) && superop_distance(limit.superop(), phi.superop()) > 1e-3;
        CHECK((oscillates || other_limit));
    }
}

TEST_CASE("rate law and absorbing bound") {
    std::mt19937_64 rng(9);
    const CMap phi = fixtures::diagonal_restriction_map();
    const GeneratorSpec g = generator(asymptotic_root(phi));
    CHECK(asymptotic_rate_check(g, phi, CMatrix::Identity(2, 2), {0.5, 2.0})[0] == doctest::Approx(0.0));
    const CMatrix e12 = oracle::unit(2, 0, 1);
    CHECK(oracle::op_norm(evaluate(g, 1.0).apply(e12) - phi.apply(e12)) == doctest::Approx(std::exp(-1.0)));
    CHECK(asymptotic_rate_check(g, phi, e12, {1.0})[0] < 1e-12);

    const StateSpec s = StateSpec::diagonal({0.25, 0.75});
    const CMap st = state_map(s);
    const GeneratorSpec gs = generator(asymptotic_root(st));
    for (int trial = 0; trial < 20; ++trial) {
        const CMatrix x = random_matrix(rng, 2, 2);
        const CMatrix z = random_matrix(rng, 2, 2);
        CMatrix rho = z * z.adjoint();
        rho /= rho.trace();
        const double t = 3.0 * trial / 20;
        const cplx lhs = (rho * evaluate(gs, t).apply(x)).trace() - (s.density * x).trace();
        CHECK(std::abs(lhs) <= 2 * std::exp(-t) * oracle::op_norm(x) + 1e-12);
    }
}

TEST_CASE("ccp criterion") {
    CHECK(is_ccp(generator(asymptotic_root(fixtures::diagonal_restriction_map())).generator).flag);
    CHECK(is_ccp(CMatrix::Zero(4, 4)).flag);
    const CMatrix minus_t = -fixtures::transpose_map(2).superop();
    CHECK_FALSE(is_ccp(minus_t).flag);
    CHECK_FALSE(ccp_by_exponential(minus_t));
    CHECK_FALSE(CMap::from_superop(mat_exp(0.1 * minus_t)).flags().cp);
}

TEST_CASE("ccp criterion agrees with the exponential test on all fixtures") {
    for (const CMap& phi : all_fixtures()) {
        const int p = phi.dim() * phi.dim();
        const CMatrix l = phi.superop() - CMatrix::Identity(p, p);
        CHECK(is_ccp(l).flag == ccp_by_exponential(l));
        CHECK(is_ccp(-l).flag == ccp_by_exponential(-l));
    }
    const CMatrix halving = generator(continuous_root_candidate(fixtures::offdiag_scaling_map(0.5))).generator;
    CHECK(is_ccp(halving).flag == ccp_by_exponential(halving));
}

TEST_CASE("continuous root candidates") {
    const GeneratorSpec g = generator(continuous_root_candidate(fixtures::offdiag_scaling_map(0.5)));
    CHECK(g.ccp);
    for (double t : {0.1, 0.5, 0.9, 1.0, 2.5})
        CHECK(std::abs(evaluate(g, t).apply(oracle::unit(2, 0, 1))(0, 1) - std::pow(2.0, -t)) < 1e-12);
    Eigen::ComplexEigenSolver<CMatrix> es(g.generator, false);
    std::vector<double> ev;
    for (Eigen::Index i = 0; i < 4; ++i) ev.push_back(es.eigenvalues()(i).real());
    std::sort(ev.begin(), ev.end());
    CHECK(std::abs(ev[0] + std::log(2.0)) < 1e-9);
    CHECK(std::abs(ev[1] + std::log(2.0)) < 1e-9);
    CHECK(std::abs(ev[2]) < 1e-9);
    CHECK(std::abs(ev[3]) < 1e-9);

    CHECK(refusal(continuous_root_candidate(fixtures::corner_pinching_map())) == RefusalReason::NotBijective);
    const GeneratorOutcome swap = continuous_root_candidate(fixtures::swap_offdiag_scaling_map(0.5));
    CHECK(refusal(swap) == RefusalReason::NoPrincipalBranch);
    CHECK(std::get<Refusal>(swap).heuristic);
    CHECK_FALSE(std::get<Refusal>(continuous_root_candidate(fixtures::corner_pinching_map())).heuristic);
}

TEST_CASE("grid shift family") {
    const GridShiftFamily two = grid_shift_root({2});
    const CMap pure3 = state_map(StateSpec::diagonal({1.0, 0.0, 0.0}));
    CHECK(verify_proper_root(two.at_step(1), pure3, 2).accepted);

    const GridShiftFamily fam = grid_shift_root({16});
    const CMap pure = state_map(StateSpec::diagonal([] {
        std::vector<double> p(17, 0.0);
        p[0] = 1.0;
        return p;
    }()));
    CHECK(max_abs(fam.at_step(16).superop() - pure.superop()) <= 1e-14);
    CHECK(superop_distance(fam.at_step(15).superop(), pure.superop()) > 1e-6);
    CHECK(max_abs(fam.at_step(0).superop() - CMap::identity(17).superop()) == 0.0);
    CHECK(max_abs(fam.at(3.5).superop() - pure.superop()) <= 1e-14);
    CHECK_THROWS_AS(fam.at(0.3), Error);
    CHECK_THROWS_AS(grid_shift_root({1}), Error);

    // The step isometry's shift part is nilpotent of order exactly m.
    const CMatrix v = fam.isometry(1);
    const CMatrix shift = v.bottomRightCorner(16, 16);
    CHECK(nilpotency_order(shift) == 16);
}

TEST_CASE("grid shift invariance and absorption") {
    const GridShiftFamily fam = grid_shift_root({8});
    const CMap phi = fam.phi();
    const MapFamily family = [&](double t) { return fam.at(t); };
    std::vector<double> grid;
    for (int k = 0; k <= 8; ++k) grid.push_back(k / 8.0);
    for (double r : state_invariance_check(family, phi, grid)) CHECK(r <= 1e-10);
    CHECK(state_invariance_check(family, phi, {0.0})[0] <= 1e-15);
    std::mt19937_64 rng(12);
    const CMap psi = random_uncp(rng, 9, 2);
    for (double r : absorption_check(psi, family, {1.0, 1.5, 2.0})) CHECK(r <= 1e-10);
    for (int j = 0; j <= 8; ++j)
        for (int k = 0; j + k <= 8; ++k)
            CHECK(max_abs(compose(fam.at_step(j), fam.at_step(k)).superop() - fam.at_step(j + k).superop()) <= 1e-12);
}

TEST_CASE("continuous roots of mixed states are refuted") {
    const StateRefutation two = refute_continuous_root_state(StateSpec::diagonal({0.5, 0.5}));
    CHECK(two.refuted);
    CHECK(two.compressed_rank == 1);
    CHECK(two.compressed_size == 4);  // 4x4 superoperator, 16 entries
    CHECK(two.smallest_singular_value <= 1e-12);
    CHECK(refute_continuous_root_state(StateSpec::diagonal({0.6, 0.4, 0.0})).refuted);
    CHECK_FALSE(refute_continuous_root_state(StateSpec::diagonal({1.0, 0.0})).refuted);
}

}  // TEST_SUITE
