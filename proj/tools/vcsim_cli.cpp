// Command-line front end: run scenarios and suites, solve closing games,
// sweep parameter regimes, dump traces and chain state.

#include "CLI11.hpp"
#include "json.hpp"

#include "vcsim/gametheory/checks.hpp"
#include "vcsim/scenarios/suite.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

using json = nlohmann::json;
using namespace vcsim;

namespace {

constexpr int kSchemaVersion = 1;

struct check_line {
    std::string id;
    bool pass = false;
    std::string detail;
};

int emit_checks(const std::vector<check_line>& checks, const std::string& format,
                const std::string& out_dir) {
    bool all = true;
    json machine = json::array();
    for (const auto& c : checks) {
        all = all && c.pass;
        machine.push_back({{"check", c.id}, {"pass", c.pass}, {"detail", c.detail}});
        if (format == "text")
            std::cout << (c.pass ? "PASS " : "FAIL ") << c.id
                      << (c.detail.empty() ? "" : "  " + c.detail) << "\n";
    }
    if (format == "machine") std::cout << machine.dump(2) << "\n";
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::ofstream f(out_dir + "/checks.json");
        f << machine.dump(2) << "\n";
    }
    return all ? 0 : 1;
}

actors::party_behavior parse_party_behavior(const std::string& s) {
    if (s == "honest") return actors::party_behavior::honest;
    if (s == "offline") return actors::party_behavior::offline;
    if (s == "double_state_colluder") return actors::party_behavior::double_state_colluder;
    if (s == "old_state_closer") return actors::party_behavior::old_state_closer;
    if (s == "inconsistent_funder") return actors::party_behavior::inconsistent_funder;
    if (s == "collusive_intermediary") return actors::party_behavior::collusive_intermediary;
    throw std::invalid_argument("unknown party behavior: " + s);
}

actors::warden_behavior parse_warden_behavior(const std::string& s) {
    if (s == "honest") return actors::warden_behavior::honest;
    if (s == "stale_publisher") return actors::warden_behavior::stale_publisher;
    if (s == "double_signer") return actors::warden_behavior::double_signer;
    if (s == "withholder") return actors::warden_behavior::withholder;
    if (s == "crash") return actors::warden_behavior::crash;
    throw std::invalid_argument("unknown warden behavior: " + s);
}

scenarios::close_style parse_close_style(const std::string& s) {
    if (s == "none") return scenarios::close_style::none;
    if (s == "optimistic") return scenarios::close_style::optimistic;
    if (s == "unilateral") return scenarios::close_style::unilateral;
    if (s == "collab_fallback") return scenarios::close_style::collab_fallback;
    if (s == "simultaneous_unilateral")
        return scenarios::close_style::simultaneous_unilateral;
    if (s == "intermediary_direct") return scenarios::close_style::intermediary_direct;
    throw std::invalid_argument("unknown close style: " + s);
}

void reject_unknown_keys(const json& j, const std::vector<std::string>& known,
                         const std::string& where) {
    for (const auto& [key, _] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw std::invalid_argument("unknown key '" + key + "' in " + where);
}

// Scenario files are versioned and fail closed: any unknown key is an error.
scenarios::scenario_config load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw std::invalid_argument("cannot open scenario file " + path);
    json j = json::parse(in);
    reject_unknown_keys(
        j,
        {"version", "name", "hops", "f", "vc_balance", "vc_left_share", "deposit_slack",
         "closing_fee", "seed", "horizon", "jitter", "updates", "parties", "wardens", "close",
         "flags", "patience", "max_steps"},
        "scenario");
    if (!j.contains("version") || j["version"].get<int>() != kSchemaVersion)
        throw std::invalid_argument("scenario schema version must be " +
                                    std::to_string(kSchemaVersion));

    scenarios::scenario_config cfg;
    cfg.name = j.value("name", std::string("scenario"));
    cfg.hops = j.value("hops", 2u);
    cfg.f = j.value("f", 3u);
    cfg.vc_balance = j.value("vc_balance", 10);
    cfg.vc_left_share = j.value("vc_left_share", 4);
    cfg.deposit_slack = j.value("deposit_slack", 6);
    cfg.closing_fee = j.value("closing_fee", 0);
    cfg.seed = j.value("seed", 1ull);
    cfg.policy.seed = cfg.seed;
    cfg.policy.horizon = j.value("horizon", 50ull);
    cfg.policy.jitter = j.value("jitter", 3ull);
    cfg.patience = j.value("patience", 0ull);
    cfg.max_steps = j.value("max_steps", 0ull);

    if (j.contains("updates")) {
        for (const auto& u : j["updates"]) {
            reject_unknown_keys(u, {"initiator", "amount", "kind"}, "updates[]");
            scenarios::update_step step;
            step.initiator = u.value("initiator", 0);
            step.amount = u.value("amount", 1);
            step.kind = u.value("kind", 0);
            cfg.updates.push_back(step);
        }
    }
    if (j.contains("parties")) {
        for (const auto& [key, spec] : j["parties"].items()) {
            reject_unknown_keys(spec,
                                {"behavior", "collude_partner", "old_close_seq",
                                 "funder_delta", "offline_at_close", "returns_later"},
                                "parties." + key);
            scenarios::party_spec ps;
            ps.behavior = parse_party_behavior(spec.value("behavior", std::string("honest")));
            if (spec.contains("collude_partner")) {
                const auto idx = spec["collude_partner"].get<std::uint32_t>();
                ps.collude_partner = core::make_party(idx, std::string(1, 'A' + idx));
            }
            ps.old_close_seq = spec.value("old_close_seq", 0ull);
            ps.funder_delta = spec.value("funder_delta", 0);
            ps.offline_at_close = spec.value("offline_at_close", false);
            ps.returns_later = spec.value("returns_later", false);
            cfg.parties[std::stoul(key)] = ps;
        }
    }
    if (j.contains("wardens")) {
        for (const auto& [key, spec] : j["wardens"].items()) {
            reject_unknown_keys(
                spec, {"behavior", "stale_seq", "withhold_target_party", "crash_at_close"},
                "wardens." + key);
            scenarios::warden_spec ws;
            ws.behavior = parse_warden_behavior(spec.value("behavior", std::string("honest")));
            ws.stale_seq = spec.value("stale_seq", 0ull);
            ws.withhold_target_party = spec.value("withhold_target_party", 0u);
            ws.crash_at_close = spec.value("crash_at_close", false);
            cfg.wardens[key] = ws;
        }
    }
    if (j.contains("close")) {
        reject_unknown_keys(j["close"], {"style", "initiator"}, "close");
        cfg.close = parse_close_style(j["close"].value("style", std::string("optimistic")));
        cfg.close_initiator = j["close"].value("initiator", 0);
    }
    if (j.contains("flags")) {
        reject_unknown_keys(j["flags"],
                            {"force_simultaneous_crosscheck", "disable_crosscheck",
                             "skip_open", "pc_close_at_end", "pessimistic_pc_close"},
                            "flags");
        cfg.force_simultaneous_crosscheck =
            j["flags"].value("force_simultaneous_crosscheck", false);
        cfg.disable_crosscheck = j["flags"].value("disable_crosscheck", false);
        cfg.skip_open = j["flags"].value("skip_open", false);
        cfg.pc_close_at_end = j["flags"].value("pc_close_at_end", true);
        cfg.pessimistic_pc_close = j["flags"].value("pessimistic_pc_close", false);
    }
    return cfg;
}

json report_json(const scenarios::execution_report& r) {
    json j;
    j["scenario"] = r.scenario;
    j["seed"] = r.seed;
    j["completed"] = r.completed;
    j["all_closed"] = r.all_closed;
    j["liveness"] = r.liveness;
    j["vc_opened"] = r.vc_opened;
    j["trace_digest"] = r.trace_digest;
    j["steps"] = r.steps;
    j["blocks"] = r.blocks;
    json losses = json::object();
    for (const auto& [who, l] : r.losses)
        if (r.honest.count(who)) losses[who.label] = l;
    j["honest_losses"] = losses;
    json contracts = json::array();
    for (const auto& oc : r.contracts) {
        json c;
        c["id"] = oc.id;
        c["phase"] = chainsim::phase_name(oc.phase);
        if (oc.applied_ws) c["ws_seq"] = oc.applied_ws->state.seq;
        c["penalty"] = oc.penalty;
        c["fraud_overflow"] = oc.fraud_overflow;
        c["publications"] = oc.publications;
        c["valid_proofs"] = oc.valid_proofs;
        contracts.push_back(c);
    }
    j["contracts"] = contracts;
    json counters = json::object();
    auto phase_counts = [&](scenarios::tx_phase p) {
        auto counts = scenarios::count_onchain_txs(r, p);
        return json{{"party", counts.party_txs}, {"warden", counts.warden_txs}};
    };
    counters["setup"] = phase_counts(scenarios::tx_phase::setup);
    counters["vc_close"] = phase_counts(scenarios::tx_phase::vc_close);
    counters["pc_close"] = phase_counts(scenarios::tx_phase::pc_close);
    j["counters"] = counters;
    j["violations"] = r.violations;
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic virtual-channel protocol simulator and game analyzer"};
    app.require_subcommand(1);

    std::string scenario = "optimistic";
    std::uint64_t seed = 0;
    std::uint32_t f = 3;
    std::uint32_t hops = 2;
    std::size_t runs = 1;
    netsim::step_no horizon = 50;
    std::string out_dir;
    std::string format = "text";
    bool ablate_crosscheck = false;
    bool seed_given = false;

    auto add_common = [&](CLI::App* cmd, bool need_seed) {
        cmd->add_option("--seed", seed, "deterministic run seed")
            ->required(need_seed)
            ->each([&](const std::string&) { seed_given = true; });
        cmd->add_option("--runs", runs, "number of runs")->check(CLI::PositiveNumber);
        cmd->add_option("--horizon", horizon, "adversary delay horizon H");
        cmd->add_option("--out", out_dir, "output directory for artifacts");
        cmd->add_option("--format", format, "report format")
            ->check(CLI::IsMember({"text", "machine"}));
    };

    auto* sim = app.add_subcommand("sim", "run one scenario and check its properties");
    sim->add_option("--scenario", scenario, "scenario name or JSON file path");
    sim->add_option("--f", f, "committee fault bound");
    sim->add_flag("--ablate", ablate_crosscheck, "disable contract cross-checking");
    add_common(sim, true);

    auto* dump = app.add_subcommand("dump", "run a scenario and dump the chain and trace");
    dump->add_option("--scenario", scenario, "scenario name or JSON file path");
    dump->add_option("--f", f, "committee fault bound");
    add_common(dump, true);

    std::string suite_name = "balance";
    auto* suite = app.add_subcommand("suite", "run a property suite");
    suite->add_option("--name", suite_name, "balance | liveness | closure | ablation")
        ->check(CLI::IsMember({"balance", "liveness", "closure", "ablation"}));
    suite->add_option("--hops", hops, "path length (2 = one intermediary)");
    add_common(suite, false);

    std::string game_name = "closing";
    bool knows = false;
    bool negative_regime = false;
    std::size_t sweep_n = 0;
    bool dump_tree = false;
    auto* game = app.add_subcommand("game", "build and solve a closing game");
    game->add_option("name", game_name, "closing | subgame1 | opening")
        ->check(CLI::IsMember({"closing", "subgame1", "opening"}));
    game->add_option("--f", f, "committee fault bound");
    game->add_flag("--knows", knows, "the intermediary can tell requests apart");
    game->add_flag("--d-exceeds-collateral", negative_regime,
                   "sample outside the security regime");
    game->add_option("--sweep", sweep_n, "sample this many parameter sets");
    game->add_flag("--dump", dump_tree, "print the game tree");
    add_common(game, false);

    auto* sweep_cmd = app.add_subcommand("sweep", "regime conformance across all checks");
    sweep_cmd->add_option("--samples", sweep_n, "parameter sets to sample");
    add_common(sweep_cmd, false);

    CLI11_PARSE(app, argc, argv);
    if (seed == 0) seed = 1;

    try {
        if (sim->parsed() || dump->parsed()) {
            scenarios::scenario_config cfg;
            if (scenario.find(".json") != std::string::npos ||
                scenario.find('/') != std::string::npos) {
                cfg = load_scenario_file(scenario);
            } else {
                auto found = scenarios::scenario_by_name(scenario, f, seed);
                if (!found) {
                    std::cerr << "unknown scenario '" << scenario << "'; known:\n";
                    for (const auto& n : scenarios::scenario_names())
                        std::cerr << "  " << n << "\n";
                    return 2;
                }
                cfg = *found;
            }
            cfg.seed = seed;
            cfg.policy.seed = seed;
            if (horizon) cfg.policy.horizon = horizon;
            if (ablate_crosscheck) cfg.disable_crosscheck = true;

            auto report = scenarios::run_scenario(cfg);
            if (dump->parsed()) {
                std::cout << report.summary() << "\n";
                std::cout << report_json(report).dump(2) << "\n";
                if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
                return 0;
            }
            std::vector<check_line> checks;
            checks.push_back({"conservation", report.violations.empty(), ""});
            checks.push_back({"liveness", scenarios::check_liveness(report), ""});
            if (report.all_closed)
                checks.push_back({"balance-security",
                                  scenarios::check_balance_security(report), ""});
            bool any_ws = false;
            for (const auto& oc : report.contracts)
                if (oc.applied_ws) any_ws = true;
            if (any_ws)
                checks.push_back({"same-state-closure",
                                  scenarios::check_same_state_closure(report), ""});
            if (format == "text") std::cout << report.summary();
            if (!out_dir.empty()) {
                std::filesystem::create_directories(out_dir);
                std::ofstream rep(out_dir + "/report.json");
                rep << report_json(report).dump(2) << "\n";
            }
            return emit_checks(checks, format, out_dir);
        }

        if (suite->parsed()) {
            std::vector<check_line> checks;
            if (suite_name == "balance") {
                auto res = scenarios::balance_security_suite(runs ? runs : 200, seed, hops);
                checks.push_back({"balance-security-suite", res.ok(),
                                  std::to_string(res.passed) + "/" +
                                      std::to_string(res.runs)});
                for (std::size_t i = 0; i < res.failures.size() && i < 3; ++i)
                    std::cerr << res.failures[i];
            } else if (suite_name == "liveness") {
                auto res = scenarios::liveness_suite(runs ? runs : 100, seed, {10, 50, 200},
                                                     hops);
                checks.push_back({"liveness-suite", res.ok(),
                                  std::to_string(res.passed) + "/" +
                                      std::to_string(res.runs)});
            } else if (suite_name == "closure") {
                auto res = scenarios::same_state_closure_suite(runs ? runs : 50, seed, hops);
                checks.push_back({"same-state-closure-suite", res.ok(),
                                  std::to_string(res.passed) + "/" +
                                      std::to_string(res.runs)});
            } else {
                const bool breached = scenarios::ablation_shows_breach(seed);
                checks.push_back({"ablation-breaks-closure", breached,
                                  "cross-checking disabled"});
            }
            return emit_checks(checks, format, out_dir);
        }

        if (game->parsed()) {
            std::uint64_t rng = seed;
            auto params = gametheory::sample_params(rng, !negative_regime, f);
            std::vector<check_line> checks;
            if (game_name == "subgame1") {
                if (sweep_n) {
                    auto res = gametheory::sweep(
                        sweep_n, seed, !negative_regime,
                        negative_regime ? gametheory::negative_regime_admits_cheating
                                        : gametheory::regime_all_honest_publication);
                    std::cout << (negative_regime ? "cheating equilibrium present: "
                                                  : "regime holds: ")
                              << res.passed << "/" << res.samples << "\n";
                    checks.push_back({"subgame1-sweep", res.ok(), ""});
                } else {
                    auto g = gametheory::build_subgame1(params);
                    if (dump_tree) std::cout << g.dump();
                    for (const auto& s : gametheory::backward_induction(g))
                        std::cout << "SPNE: " << gametheory::strategy_str(g, s.strategy)
                                  << "\n";
                    checks.push_back(
                        {"subgame1-regime",
                         negative_regime
                             ? gametheory::negative_regime_admits_cheating(params)
                             : gametheory::regime_all_honest_publication(params),
                         ""});
                }
            } else if (game_name == "closing") {
                auto g = gametheory::build_closing_game(params, knows);
                if (dump_tree) std::cout << g.dump();
                if (!knows) {
                    const auto t = gametheory::closing_game_table(params);
                    std::cout << "strategic form (rows: closer, columns: intermediary)\n";
                    for (const auto& b : t.bob_actions) {
                        std::cout << b << ":";
                        for (const auto& i : t.ingrid_actions) {
                            const auto& cell = t.cells.at({b, i});
                            std::cout << "  (" << cell.first.str() << ", "
                                      << cell.second.str() << ")";
                        }
                        std::cout << "\n";
                    }
                    checks.push_back({"closing-nfg-table",
                                      gametheory::nfg_table_matches(params), ""});
                    checks.push_back({"old-ignore-equilibrium",
                                      gametheory::old_ignore_is_equilibrium(params), ""});
                } else {
                    for (const auto& s : gametheory::backward_induction(g))
                        std::cout << "SPNE: " << gametheory::strategy_str(g, s.strategy)
                                  << "\n";
                    checks.push_back({"knowledge-equilibria",
                                      gametheory::knowledge_case_equilibria(params), ""});
                }
            } else {
                checks.push_back({"opening-game", gametheory::check_opening_game(params),
                                  ""});
            }
            return emit_checks(checks, format, out_dir);
        }

        if (sweep_cmd->parsed()) {
            const std::size_t n = sweep_n ? sweep_n : 200;
            std::vector<check_line> checks;
            auto run = [&](const char* id, gametheory::param_check fn, bool regime) {
                auto res = gametheory::sweep(n, seed, regime, fn);
                checks.push_back({id, res.ok(),
                                  std::to_string(res.passed) + "/" +
                                      std::to_string(res.samples)});
            };
            run("regime-honest-publication", gametheory::regime_all_honest_publication,
                true);
            run("negative-regime-cheating", gametheory::negative_regime_admits_cheating,
                false);
            run("old-ignore-equilibrium", gametheory::old_ignore_is_equilibrium, true);
            run("knowledge-equilibria", gametheory::knowledge_case_equilibria, true);
            run("warden-knowledge-inequality", gametheory::warden_knowledge_inequality,
                true);
            run("oracle-equivalence", gametheory::oracle_equivalence, true);
            run("nfg-table", gametheory::nfg_table_matches, true);
            run("security", gametheory::check_security, true);
            run("opening-game", gametheory::check_opening_game, true);
            return emit_checks(checks, format, out_dir);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
