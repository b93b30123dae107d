#include <random>

#include "doctest.h"

#include "cproots/commutative.hpp"
#include "cproots/error.hpp"
#include "oracles.hpp"

using namespace cproots;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::InvalidInput;
}

// Random probability vector with exactly r nonzero entries at random positions.
std::vector<double> random_probs(std::mt19937_64& rng, int d, int r) {
    std::vector<int> idx(d);
    for (int i = 0; i < d; ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::vector<double> p(d, 0.0);
    double total = 0.0;
    for (int i = 0; i < r; ++i) total += p[idx[i]] = u(rng);
    for (double& x : p) x /= total;
    return p;
}

RMatrix rank_one(const std::vector<double>& p) {
    const int d = static_cast<int>(p.size());
    RMatrix m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = p[j];
    return m;
}

}  // namespace

TEST_SUITE("commutative") {

TEST_CASE("state_to_stochastic") {
    RMatrix expected(2, 2);
    expected << 1, 0, 1, 0;
    CHECK((state_to_stochastic(ProbVector::from({1.0, 0.0})).entries - expected).cwiseAbs().maxCoeff() == 0.0);
    const StochMatrix m = state_to_stochastic(ProbVector::from({0.5, 1.0 / 3, 1.0 / 6}));
    CHECK((m.entries - rank_one({0.5, 1.0 / 3, 1.0 / 6})).cwiseAbs().maxCoeff() == 0.0);
    CHECK(m.valid());
    CHECK(numerical_rank(m.entries.cast<cplx>(), 1e-12) == 1);
}

TEST_CASE("probability vector validation") {
    CHECK(ProbVector::from({0.5, 0.5, 0.0}).support_rank == 2);
    CHECK(code_of([] { ProbVector::from({0.5, 0.6}); }) == ErrorCode::InvalidInput);
    CHECK(code_of([] { ProbVector::from({1.1, -0.1}); }) == ErrorCode::InvalidInput);
}

TEST_CASE("shift matrices") {
    RMatrix expected = RMatrix::Zero(3, 3);
    expected(1, 0) = expected(2, 1) = 1.0;
    CHECK((shift_matrix(3, 3, 1) - expected).cwiseAbs().maxCoeff() == 0.0);
    CHECK(shift_matrix(3, 2, 2).cwiseAbs().maxCoeff() == 0.0);
    for (int d = 3; d <= 7; ++d)
        for (int r = 1; r < d; ++r)
            for (int n = r; n <= d - 1; ++n) {
                const RMatrix s = shift_matrix(d - r, n, r);
                const auto order = nilpotency_order(s.cast<cplx>());
                REQUIRE(order.has_value());
                CHECK(*order <= n);
            }
    CHECK(code_of([] { shift_matrix(2, 4, 2); }) == ErrorCode::BadIndices);
    CHECK(code_of([] { shift_matrix(2, 1, 2); }) == ErrorCode::BadIndices);
}

TEST_CASE("construction examples against direct multiplication") {
    const std::vector<double> p = {0.5, 1.0 / 3, 1.0 / 6};
    const CommutativeRoot a = construct_commutative_root(ProbVector::from(p), 2);
    CHECK(a.certificate.accepted);
    CHECK((oracle::matpow(a.tau.entries, 2) - rank_one(p)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((a.tau.entries - rank_one(p)).cwiseAbs().maxCoeff() > 1e-6);

    const std::vector<double> pure = {1, 0, 0, 0};
    const CommutativeRoot b = construct_commutative_root(ProbVector::from(pure), 3);
    CHECK(b.certificate.accepted);
    CHECK(b.construction == "small-support");
    CHECK((oracle::matpow(b.tau.entries, 3) - rank_one(pure)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((oracle::matpow(b.tau.entries, 2) - rank_one(pure)).cwiseAbs().maxCoeff() > 1e-6);

    CHECK(code_of([] { construct_commutative_root(ProbVector::from({0.3, 0.7}), 2); }) ==
          ErrorCode::OrderOutOfRange);
}

TEST_CASE("admissible range") {
    CHECK_FALSE(commutative_root_range(2).has_value());
    CHECK_FALSE(commutative_root_range(1).has_value());
    CHECK(commutative_root_range(3) == std::make_pair(2, 2));
    CHECK(commutative_root_range(6) == std::make_pair(2, 5));
}

TEST_CASE("exhaustive attainability with stationarity and kernel multiplicity") {
    std::mt19937_64 rng(2024);
    for (int d = 3; d <= 7; ++d)
        for (int r = 1; r <= d; ++r)
            for (int trial = 0; trial < 5; ++trial) {
                const std::vector<double> probs = random_probs(rng, d, r);
                const ProbVector p = ProbVector::from(probs);
                RVector pv(d);
                for (int i = 0; i < d; ++i) pv(i) = probs[i];
                for (int n = 2; n <= d - 1; ++n) {
                    CAPTURE(d);
                    CAPTURE(r);
                    CAPTURE(n);
                    const CommutativeRoot root = construct_commutative_root(p, n);
                    REQUIRE(root.certificate.accepted);
                    const RMatrix& t = root.tau.entries;
                    CHECK(t.minCoeff() >= -1e-12);
                    CHECK((t.rowwise().sum() - RVector::Ones(d)).cwiseAbs().maxCoeff() <= 1e-10);
                    CHECK((pv.transpose() * t - pv.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
                    CHECK((oracle::matpow(t, n) - rank_one(probs)).cwiseAbs().maxCoeff() <= 1e-8);
                    // Kernel multiplicity d-1: t^d has rank one.
                    CHECK(numerical_rank(oracle::matpow(t, d).cast<cplx>(), 1e-9) == 1);
                    CHECK(d - numerical_rank(oracle::matpow(t, d - 1).cast<cplx>(), 1e-9) == d - 1);
                }
                for (int n : {0, 1, d, d + 1})
                    CHECK(code_of([&] { construct_commutative_root(p, n); }) == ErrorCode::OrderOutOfRange);
            }
}

}  // TEST_SUITE
