#include <cmath>
#include <numbers>

#include "cproots/commutative.hpp"
#include "cproots/fixtures.hpp"
#include "cproots/matrix_io.hpp"
#include "cproots/semigroups.hpp"
#include "report.hpp"

#include "../src/format.hpp"

namespace cli {

using namespace cproots;
using detail::num;

namespace {

struct Row {
    std::string fixture;
    std::string claim;
    bool pass;
    std::string detail;
};

Row diagonal_restriction_root() {
    const RootCertificate c =
        verify_proper_root(fixtures::swap_diagonal_map(), fixtures::diagonal_restriction_map(), 2);
    return {"swap-diagonal", "proper square root of the diagonal restriction", c.accepted,
            "residual " + num(c.residual_power) + ", margin " + num(c.min_margin())};
}

Row swap_diagonal_no_square_root() {
    const CMap phi = fixtures::swap_diagonal_map();
    SearchOptions opts;
    opts.seed = 1;
    const SearchResult s = search_root_numeric(phi, 2, opts);
    const CommutantObstruction ob = commutant_obstruction(phi, 2);
    return {"swap-diagonal", "no square root: Inconclusive-by-search + oracle-refuted", !s.found && ob.refuted,
            "search best residual " + num(s.best.residual_power) + "; " + ob.reason};
}

Row offdiag_roots() {
    const CMap phi = fixtures::offdiag_scaling_map(0.5);
    bool ok = true;
    double worst_factor = 0.0;
    for (int n = 2; n <= 6; ++n) {
        const double f = std::pow(2.0, -1.0 / n);
        const CMap tau = fixtures::offdiag_scaling_map(f);
        const RootCertificate c = verify_proper_root(tau, phi, n);
        // tau(e_12) = f e_12
        const double got = std::abs(tau.apply(matrix_unit(2, 0, 1))(0, 1));
        worst_factor = std::max(worst_factor, std::abs(got - f));
        ok = ok && c.accepted;
    }
    ok = ok && worst_factor <= 1e-12;
    return {"offdiag-halving", "roots n=2..6 accepted", ok, "factor error " + num(worst_factor)};
}

Row swap_offdiag_roots() {
    const CMap phi = fixtures::swap_offdiag_scaling_map(0.5);
    SearchOptions opts;
    opts.seed = 1;
    const SearchResult cube = search_root_numeric(phi, 3, opts);
    const SearchResult square = search_root_numeric(phi, 2, opts);
    const CommutantObstruction ob = commutant_obstruction(phi, 2);
    const bool ok = cube.found && !square.found && ob.refuted;
    return {"swap-offdiag-halving", "cube root found; square root Inconclusive-by-search + oracle-refuted", ok,
            "cube residual " + num(cube.best.residual_power) + ", square best residual " +
                num(square.best.residual_power)};
}

Row stochastic_roots() {
    const std::vector<std::vector<double>> ps = {{0.5, 1.0 / 3, 1.0 / 6}, {0.25, 0.25, 0.25, 0.25},
                                                 {0.5, 0.5, 0.0, 0.0}, {0.6, 0.3, 0.1, 0.0, 0.0}};
    bool ok = true;
    int count = 0;
    double worst = 1.0;
    for (const auto& v : ps) {
        const ProbVector p = ProbVector::from(v);
        for (int n = 2; n <= p.dim - 1; ++n) {
            const CommutativeRoot r = construct_commutative_root(p, n);
            ok = ok && r.certificate.accepted;
            worst = std::min(worst, r.certificate.min_margin());
            ++count;
        }
    }
    return {"stochastic", "rank-one stochastic roots for all admissible n", ok,
            std::to_string(count) + " roots, worst margin " + num(worst)};
}

Row state_roots() {
    bool ok = true;
    int count = 0;
    for (int d = 2; d <= 3; ++d)
        for (int r = 1; r <= d; ++r) {
            std::vector<double> probs(d, 0.0);
            for (int i = 0; i < r; ++i) probs[i] = 1.0 / r;
            const StateSpec s = StateSpec::diagonal(probs);
            for (int n = 2; n <= max_root_order_state(d, r); ++n) {
                ok = ok && construct_state_root(s, n).certificate.accepted;
                ++count;
            }
        }
    return {"state-maps", "state roots for d <= 3, every rank and admissible order", ok,
            std::to_string(count) + " roots"};
}

Row offdiag_generator() {
    const GeneratorOutcome out = continuous_root_candidate(fixtures::offdiag_scaling_map(0.5));
    if (const auto* r = std::get_if<Refusal>(&out))
        return {"offdiag-halving", "continuous root generator with eigenvalues {0, 0, -ln 2, -ln 2}", false,
                r->detail};
    const auto& gen = std::get<GeneratorSpec>(out);
    Eigen::ComplexEigenSolver<CMatrix> es(gen.generator, false);
    std::vector<double> ev;
    double imag = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        ev.push_back(es.eigenvalues()(i).real());
        imag = std::max(imag, std::abs(es.eigenvalues()(i).imag()));
    }
    std::sort(ev.begin(), ev.end());
    const double l2 = std::numbers::ln2;
    const double err = std::max({std::abs(ev[0] + l2), std::abs(ev[1] + l2), std::abs(ev[2]), std::abs(ev[3]), imag});
    return {"offdiag-halving", "continuous root generator with eigenvalues {0, 0, -ln 2, -ln 2}",
            err <= 1e-9 && gen.ccp, "eigenvalue error " + num(err)};
}

Row refusal_row(const std::string& name, const CMap& phi, RefusalReason expected) {
    const GeneratorOutcome out = continuous_root_candidate(phi);
    const auto* r = std::get_if<Refusal>(&out);
    const bool ok = r && r->reason == expected;
    return {name, std::string("continuous root refuted: ") + refusal_name(expected), ok,
            r ? r->detail : std::string("no refusal")};
}

Row mixed_state_refutation() {
    const StateRefutation ref = refute_continuous_root_state(StateSpec::diagonal({0.5, 0.5, 0.0}));
    return {"mixed-state", "no proper continuous root for a rank-2 state map", ref.refuted,
            "smallest singular value " + num(ref.smallest_singular_value)};
}

}  // namespace

Outcome run_fixtures(const std::string& out_dir) {
    ReportBuilder rb("fixtures", 1);
    const std::vector<Row> rows = {
        diagonal_restriction_root(),
        swap_diagonal_no_square_root(),
        offdiag_roots(),
        swap_offdiag_roots(),
        stochastic_roots(),
        state_roots(),
        offdiag_generator(),
        refusal_row("corner-pinching", fixtures::corner_pinching_map(), RefusalReason::NotBijective),
        refusal_row("swap-offdiag-halving", fixtures::swap_offdiag_scaling_map(0.5), RefusalReason::NoPrincipalBranch),
        mixed_state_refutation(),
    };
    json table = json::array();
    bool all = true;
    for (const Row& r : rows) {
        table.push_back({{"fixture", r.fixture}, {"claim", r.claim}, {"pass", r.pass}, {"detail", r.detail}});
        all = all && r.pass;
    }
    rb.body()["table"] = table;
    if (!out_dir.empty()) emit_artifact(rb.body(), out_dir, "fixtures.json", table);
    return rb.finish(all ? "pass" : "fail", all ? kAccept : kReject);
}

}  // namespace cli
