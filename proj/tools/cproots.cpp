#include <iostream>
#include <random>

#include "CLI11.hpp"

#include "cproots/commutative.hpp"
#include "cproots/discrete_roots.hpp"
#include "cproots/matrix_io.hpp"
#include "cproots/semigroups.hpp"
#include "report.hpp"

using namespace cproots;
using cli::json;
using cli::Outcome;

namespace {

std::string g_out_dir;

json generator_json(const GeneratorSpec& g) {
    Eigen::ComplexEigenSolver<CMatrix> es(g.generator, false);
    json eig = json::array();
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        eig.push_back({es.eigenvalues()(i).real(), es.eigenvalues()(i).imag()});
    json prop = json::array();
    for (const auto& [t, m] : g.properness) prop.push_back({{"t", t}, {"margin", m}});
    return {{"dim", g.dim}, {"ccp", g.ccp}, {"ccp_witness", g.ccp_witness},
            {"unital_residual", g.unital_residual}, {"eigenvalues", eig}, {"properness", prop}};
}

json refusal_json(const Refusal& r) {
    return {{"reason", refusal_name(r.reason)}, {"heuristic", r.heuristic}, {"detail", r.detail}, {"witness", r.witness}};
}

Outcome check_cp(const std::string& map_path, double tol) {
    cli::ReportBuilder rb("check-cp");
    rb.file("map", map_path);
    rb.param("tol", tol);
    const CMap map = cli::load_map(map_path);
    const Tolerance t{tol, tol};
    const PsdResult cp = is_cp(map, t);
    rb.body()["result"] = {{"dim", map.dim()}, {"cp", cp.flag}, {"choi_min_eig", cp.min_eig},
                           {"unital", is_unital(map, t)}, {"idempotent", is_idempotent(map, t)}};
    return rb.finish(cp.flag ? "accepted" : "rejected", cp.flag ? cli::kAccept : cli::kReject);
}

Outcome support(const std::string& map_path) {
    cli::ReportBuilder rb("support");
    rb.file("map", map_path);
    const CMap map = cli::load_map(map_path);
    const Projection p = support_projection(map);
    rb.body()["result"] = {{"dim", p.dim}, {"rank", p.rank}, {"projection", matrix_to_json(p.matrix)}};
    cli::emit_artifact(rb.body(), g_out_dir, "support.json", matrix_to_json(p.matrix));
    return rb.finish("accepted", cli::kAccept);
}

Outcome root_state(const std::string& density_path, int n, std::uint64_t seed) {
    cli::ReportBuilder rb("root state", seed);
    rb.file("density", density_path);
    rb.param("n", n);
    const StateSpec state = StateSpec::from_density(matrix_from_json(read_json_file(density_path)));
    rb.body()["state"] = {{"dim", state.dim}, {"support_rank", state.support_rank},
                          {"max_order", max_root_order_state(state.dim, state.support_rank)}};
    const StateRoot root = construct_state_root(state, n);
    rb.body()["certificate"] = cli::certificate_json(root.certificate);
    rb.body()["construction"] = {{"epsilon", root.epsilon}, {"weights", root.weights}, {"n1", root.n1}, {"n2", root.n2}};
    cli::emit_artifact(rb.body(), g_out_dir, "tau.json", matrix_to_json(root.tau.superop()));
    const bool ok = root.certificate.accepted;
    return rb.finish(ok ? "accepted" : "rejected", ok ? cli::kAccept : cli::kReject);
}

Outcome root_stochastic(const std::string& p_spec, int n) {
    cli::ReportBuilder rb("root stochastic");
    if (p_spec.find_first_of("([") == std::string::npos) rb.file("p", p_spec);
    rb.param("p", p_spec);
    rb.param("n", n);
    const ProbVector p = ProbVector::from(parse_probabilities(p_spec));
    const CommutativeRoot root = construct_commutative_root(p, n);
    rb.body()["certificate"] = cli::certificate_json(root.certificate);
    rb.body()["construction"] = {{"case", root.construction}, {"n1", root.n1}, {"n2", root.n2},
                                 {"epsilon", root.epsilon}, {"weights", root.weights}};
    const json tau = matrix_to_json(root.tau.entries.cast<cplx>());
    rb.body()["tau"] = tau;
    cli::emit_artifact(rb.body(), g_out_dir, "tau.json", tau);
    const bool ok = root.certificate.accepted;
    return rb.finish(ok ? "accepted" : "rejected", ok ? cli::kAccept : cli::kReject);
}

Outcome root_search(const std::string& map_path, int n, int restarts, std::uint64_t seed) {
    cli::ReportBuilder rb("root search", seed);
    rb.file("map", map_path);
    rb.param("n", n);
    rb.param("restarts", restarts);
    const CMap phi = cli::load_map(map_path);
    SearchOptions opts;
    opts.restarts = restarts;
    opts.seed = seed;
    const SearchResult res = search_root_numeric(phi, n, opts);
    rb.body()["certificate"] = cli::certificate_json(res.best);
    rb.body()["restarts_used"] = res.restarts_used;
    if (!res.found) {
        rb.body()["note"] = "search inconclusive; this does not show that no root exists";
        return rb.finish("inconclusive", cli::kInconclusive);
    }
    cli::emit_artifact(rb.body(), g_out_dir, "tau.json", matrix_to_json(res.tau->superop()));
    return rb.finish("accepted", cli::kAccept);
}

Outcome verify_root(const std::string& tau_path, const std::string& phi_path, int n) {
    cli::ReportBuilder rb("verify-root");
    rb.file("tau", tau_path);
    rb.file("phi", phi_path);
    rb.param("n", n);
    const RootCertificate cert = verify_proper_root(cli::load_map(tau_path), cli::load_map(phi_path), n);
    rb.body()["certificate"] = cli::certificate_json(cert);
    rb.body()["reason"] = cert.reason;
    return rb.finish(cert.accepted ? "accepted" : "rejected", cert.accepted ? cli::kAccept : cli::kReject);
}

Outcome asymptotic(const std::string& map_path, const std::string& times) {
    cli::ReportBuilder rb("asymptotic");
    rb.file("map", map_path);
    rb.param("times", times);
    const CMap phi = cli::load_map(map_path);
    const std::vector<double> ts = cli::parse_times(times);
    const GeneratorOutcome out = asymptotic_root(phi);
    if (const auto* r = std::get_if<Refusal>(&out)) {
        rb.body()["refusal"] = refusal_json(*r);
        return rb.finish("refuted", cli::kReject);
    }
    const auto& gen = std::get<GeneratorSpec>(out);
    rb.body()["generator"] = generator_json(gen);
    const Eigen::Index p = phi.superop().rows();
    const double gap = (CMatrix::Identity(p, p) - phi.superop()).norm();
    json samples = json::array();
    for (double t : ts) {
        const double dist = (evaluate(gen, t).superop() - phi.superop()).norm();
        samples.push_back({{"t", t}, {"distance_to_phi", dist}, {"expected", std::exp(-t) * gap}});
    }
    rb.body()["samples"] = samples;
    cli::emit_artifact(rb.body(), g_out_dir, "generator.json", matrix_to_json(gen.generator));
    return rb.finish("accepted", cli::kAccept);
}

Outcome continuous(const std::string& map_path) {
    cli::ReportBuilder rb("continuous");
    rb.file("map", map_path);
    const GeneratorOutcome out = continuous_root_candidate(cli::load_map(map_path));
    if (const auto* r = std::get_if<Refusal>(&out)) {
        rb.body()["refusal"] = refusal_json(*r);
        return rb.finish("refuted", cli::kReject);
    }
    const auto& gen = std::get<GeneratorSpec>(out);
    rb.body()["generator"] = generator_json(gen);
    cli::emit_artifact(rb.body(), g_out_dir, "generator.json", matrix_to_json(gen.generator));
    return rb.finish("accepted", cli::kAccept);
}

Outcome shift_demo(int m, const std::string& times, std::uint64_t seed) {
    cli::ReportBuilder rb("shift-demo", seed);
    rb.param("m", m);
    rb.param("times", times);
    const std::vector<double> ts = cli::parse_times(times);
    const GridShiftFamily fam = grid_shift_root({m});
    const int d = fam.dim();

    double choi_min = 1.0;
    for (int k = 0; k <= m; ++k) choi_min = std::min(choi_min, fam.at_step(k).flags().choi_min_eig);
    double law = 0.0;
    for (int j = 0; j <= m; ++j)
        for (int k = 0; j + k <= m; ++k)
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) {
                    const CMatrix e = matrix_unit(d, a, b);
                    law = std::max(law, max_abs(fam.apply(j, fam.apply(k, e)) - fam.apply(j + k, e)));
                }
    const CMap phi = state_map(StateSpec::from_density(matrix_unit(d, 0, 0)));
    const double tau_one = max_abs(fam.at_step(m).superop() - phi.superop());

    // Random UNCP psi from a random isometry.
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    CMatrix z(2 * d, d);
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = cplx(normal(rng), normal(rng));
    const CMatrix v = Eigen::HouseholderQR<CMatrix>(z).householderQ() * CMatrix::Identity(2 * d, d);
    const CMap psi = CMap::from_kraus({v.topRows(d), v.bottomRows(d)});

    const MapFamily family = [&](double t) { return fam.at(t); };
    std::vector<double> absorb_ts;
    for (double t : ts)
        if (t >= 1.0) absorb_ts.push_back(t);
    const std::vector<double> inv = state_invariance_check(family, phi, ts);
    const std::vector<double> abs = absorption_check(psi, family, absorb_ts);
    const double inv_max = inv.empty() ? 0.0 : *std::max_element(inv.begin(), inv.end());
    const double abs_max = abs.empty() ? 0.0 : *std::max_element(abs.begin(), abs.end());
    const double proper = (fam.at_step(m - 1).superop() - phi.superop()).norm();

    const bool ok = choi_min >= -1e-10 && law <= 1e-12 && tau_one <= 1e-14 && inv_max <= 1e-10 && abs_max <= 1e-10 &&
                    proper > 1e-6;
    rb.body()["result"] = {{"dim", d}, {"choi_min_eig", choi_min}, {"semigroup_law_residual", law},
                           {"tau_one_residual", tau_one}, {"invariance", inv}, {"absorption", abs},
                           {"absorption_times", absorb_ts}, {"last_step_margin", proper}};
    return rb.finish(ok ? "pass" : "fail", ok ? cli::kAccept : cli::kReject);
}

bool is_input_error(ErrorCode c) {
    return c == ErrorCode::InvalidInput || c == ErrorCode::ShapeMismatch || c == ErrorCode::NonSquare ||
           c == ErrorCode::NotHermitian || c == ErrorCode::BadGrid;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Roots of unital completely positive maps"};
    app.require_subcommand(1);
    app.add_option("--out", g_out_dir, "directory for artifacts");

    std::string map_path, tau_path, phi_path, density_path, p_spec, times;
    int n = 2, restarts = 8, m = 16;
    double tol = 1e-9;
    std::uint64_t seed = 1;
    bool text = false;
    std::function<Outcome()> run;

    auto* cp = app.add_subcommand("check-cp", "Choi test, unitality and idempotency");
    cp->add_option("--map", map_path, "map file")->required();
    cp->add_option("--tol", tol, "tolerance");
    cp->callback([&] { run = [&] { return check_cp(map_path, tol); }; });

    auto* sp = app.add_subcommand("support", "support projection of a UNCP map");
    sp->add_option("--map", map_path, "map file")->required();
    sp->callback([&] { run = [&] { return support(map_path); }; });

    auto* root = app.add_subcommand("root", "construct or search for proper discrete roots");
    root->require_subcommand(1);
    auto* rs = root->add_subcommand("state", "root of a state map");
    rs->add_option("--density", density_path, "density matrix file")->required();
    rs->add_option("--n", n, "order")->required();
    rs->add_option("--seed", seed, "seed (echoed; the construction is deterministic)");
    rs->callback([&] { run = [&] { return root_state(density_path, n, seed); }; });
    auto* rst = root->add_subcommand("stochastic", "root of a rank-one stochastic matrix");
    rst->add_option("--p", p_spec, "probabilities, e.g. '(1/2,1/3,1/6)', or a JSON file")->required();
    rst->add_option("--n", n, "order")->required();
    rst->callback([&] { run = [&] { return root_stochastic(p_spec, n); }; });
    auto* rse = root->add_subcommand("search", "numerical root search");
    rse->add_option("--map", map_path, "map file")->required();
    rse->add_option("--n", n, "order")->required();
    rse->add_option("--restarts", restarts, "restarts");
    rse->add_option("--seed", seed, "seed");
    rse->callback([&] { run = [&] { return root_search(map_path, n, restarts, seed); }; });

    auto* vr = app.add_subcommand("verify-root", "certificate for a claimed proper root");
    vr->add_option("--tau", tau_path, "candidate root")->required();
    vr->add_option("--phi", phi_path, "target map")->required();
    vr->add_option("--n", n, "order")->required();
    vr->callback([&] { run = [&] { return verify_root(tau_path, phi_path, n); }; });

    auto* as = app.add_subcommand("asymptotic", "asymptotic continuous root of an idempotent");
    as->add_option("--map", map_path, "map file")->required();
    times = "0,0.5,1,2,5";
    as->add_option("--times", times, "comma-separated times");
    as->callback([&] { run = [&] { return asymptotic(map_path, times); }; });

    auto* co = app.add_subcommand("continuous", "principal-logarithm continuous root candidate");
    co->add_option("--map", map_path, "map file")->required();
    co->callback([&] { run = [&] { return continuous(map_path); }; });

    auto* sd = app.add_subcommand("shift-demo", "grid shift semigroup for a pure state");
    sd->add_option("--m", m, "grid cells");
    sd->add_option("--times", times, "comma-separated times");
    sd->add_option("--seed", seed, "seed for the random test map");
    sd->callback([&] {
        // Every grid point, then two times past 1.
        if (sd->count("--times") == 0) {
            times.clear();
            for (int k = 0; k <= m; ++k) times += std::to_string(k) + "/" + std::to_string(m) + ",";
            times += "1.5,2";
        }
        run = [&] { return shift_demo(m, times, seed); };
    });

    auto* fx = app.add_subcommand("fixtures", "run the fixture table");
    fx->add_flag("--text", text, "print a plain table instead of JSON");
    fx->callback([&] { run = [&] { return cli::run_fixtures(g_out_dir); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kInputError;
    }

    try {
        const Outcome out = run();
        if (text && out.report.contains("table")) {
            for (const json& row : out.report["table"])
                std::cout << (row["pass"].get<bool>() ? "PASS  " : "FAIL  ") << row["fixture"].get<std::string>()
                          << ": " << row["claim"].get<std::string>() << "  [" << row["detail"].get<std::string>()
                          << "]\n";
        } else {
            std::cout << out.report.dump(2) << '\n';
        }
        return out.exit_code;
    } catch (const Error& e) {
        const bool input = is_input_error(e.code());
        std::cerr << e.what() << '\n';
        std::cout << json{{"error", error_code_name(e.code())},
                          {"message", e.what()},
                          {"verdict", input ? "input-error" : "rejected"}}
                         .dump(2)
                  << '\n';
        return input ? cli::kInputError : cli::kReject;
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return cli::kInputError;
    }
}
