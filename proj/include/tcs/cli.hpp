#pragma once

// Command-line front end. One verb per pipeline stage, JSON in / JSON out,
// every path a thin shell over the library:
//
//   validate   check a metric space file against the axioms
//   tc-norm    transportation cost norm of a problem, plan + potentials
//   match      minimum-weight perfect matching of all points of a space
//   dual       laminar odd-cut dual with its certificate
//   project    build the projection (optionally with a pinned dual)
//   certify    build + run the full projection certificate
//   criterion  prefix minimum-matching criterion for a pair sequence
//   generate   random metric space from a seeded generator
//   suite      the property suite over generated instances
//
// Exit codes: 0 success / property holds, 1 property fails (witness on
// stdout), 2 input or usage error.

#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "tcs/error.hpp"
#include "tcs/harness.hpp"
#include "tcs/json_io.hpp"
#include "tcs/matching.hpp"
#include "tcs/projection.hpp"
#include "tcs/transport.hpp"

namespace tcs::cli {

namespace cli_detail {

struct Options {
    std::string space_file, pairs_file, problem_file, dual_file, out_file;
    std::string dump_lp_file;
    std::string format = "json";
    std::string kind = "euclidean-rounded";
    int size = 6;
    int trials = 20;
    int denominator_bound = 4;
    std::uint64_t seed = 1;
    bool inject_fault = false;
};

struct Emitter {
    std::ostream& out;
    const Options& opt;

    void emit(const Json& j, const std::string& text_form) const {
        std::string payload =
            opt.format == "text" ? text_form + "\n" : j.dump(2) + "\n";
        if (!opt.out_file.empty()) {
            std::ofstream f(opt.out_file);
            if (!f) throw TcsError(ErrorCode::IoError, "cannot write " + opt.out_file);
            f << payload;
        } else {
            out << payload;
        }
    }
};

inline FiniteMetricSpace load_space(const Options& opt) {
    if (opt.space_file.empty())
        throw TcsError(ErrorCode::InvalidSpec, "--space is required");
    return space_from_json(read_json_file(opt.space_file));
}

inline std::vector<std::pair<int, int>> load_pairs(const FiniteMetricSpace& s,
                                                   const Options& opt) {
    if (opt.pairs_file.empty())
        throw TcsError(ErrorCode::InvalidSpec, "--pairs is required");
    return pairs_from_json(s, read_json_file(opt.pairs_file));
}

inline MatchingInstance whole_space_instance(const FiniteMetricSpace& s) {
    std::vector<int> verts(s.size());
    for (int i = 0; i < s.size(); ++i) verts[i] = i;
    return MatchingInstance::create(s, std::move(verts));
}

inline Json matching_to_json(const MatchingInstance& inst, const Matching& m) {
    Json arr = Json::array();
    for (const auto& p : m.pairs)
        arr.push_back(Json::array(
            {inst.local_label(p.first), inst.local_label(p.second)}));
    return arr;
}

inline int cmd_validate(const Options& opt, const Emitter& em) {
    if (opt.space_file.empty())
        throw TcsError(ErrorCode::InvalidSpec, "--space is required");
    Json raw = read_json_file(opt.space_file);
    std::vector<std::string> labels;
    DistanceMatrix dist;
    if (!raw.is_object() || !raw.contains("points") || !raw.contains("distances"))
        throw TcsError(ErrorCode::SyntaxError,
                       "space file needs 'points' and 'distances'");
    for (const auto& p : raw.at("points")) labels.push_back(p.get<std::string>());
    for (const auto& row : raw.at("distances")) {
        std::vector<Rational> r;
        for (const auto& cell : row) r.push_back(rational_from_json(cell));
        dist.push_back(std::move(r));
    }
    if (auto v = check_metric_axioms(labels, dist)) {
        Json j;
        j["valid"] = false;
        Json viol;
        viol["axiom"] = error_code_name(v->code);
        viol["witnesses"] = v->witnesses;
        j["violation"] = std::move(viol);
        em.emit(j, "invalid: " + v->describe());
        return 1;
    }
    Json j;
    j["valid"] = true;
    j["points"] = static_cast<int>(labels.size());
    em.emit(j, "valid (" + std::to_string(labels.size()) + " points)");
    return 0;
}

inline int cmd_tc_norm(const Options& opt, const Emitter& em) {
    auto space = load_space(opt);
    if (opt.problem_file.empty())
        throw TcsError(ErrorCode::InvalidSpec, "--problem is required");
    auto f = problem_from_json(space, read_json_file(opt.problem_file));
    if (!opt.dump_lp_file.empty()) {
        std::vector<int> sources, sinks;
        std::vector<Rational> supply, demand;
        for (int i = 0; i < space.size(); ++i) {
            if (f.mass(i) > 0) sources.push_back(i), supply.push_back(f.mass(i));
            if (f.mass(i) < 0) sinks.push_back(i), demand.push_back(-f.mass(i));
        }
        if (!sources.empty())
            write_json_file(opt.dump_lp_file,
                            lp_to_json(transport_detail::make_transport_lp(
                                space, sources, supply, sinks, demand)));
    }
    auto r = tc_norm(space, f);
    Json j;
    j["value"] = rational_to_json(r.value);
    j["plan"] = plan_to_json(space, r.plan);
    j["potentials"] = potentials_to_json(space, r.potentials);
    em.emit(j, "value = " + to_string(r.value));
    return 0;
}

inline int cmd_match(const Options& opt, const Emitter& em) {
    auto space = load_space(opt);
    auto inst = whole_space_instance(space);
    if (!opt.dump_lp_file.empty())
        write_json_file(opt.dump_lp_file, lp_to_json(make_matching_lp(inst)));
    auto r = solve_matching_lp(inst);
    Json j;
    j["weight"] = rational_to_json(r.weight);
    j["matching"] = matching_to_json(inst, r.matching);
    em.emit(j, "weight = " + to_string(r.weight));
    return 0;
}

inline int cmd_dual(const Options& opt, const Emitter& em) {
    auto space = load_space(opt);
    auto inst = whole_space_instance(space);
    if (!opt.dump_lp_file.empty())
        write_json_file(opt.dump_lp_file, lp_to_json(make_dual_lp(inst, true)));
    auto mr = solve_matching_lp(inst);
    auto lam = uncross_to_laminar(inst, mr.matching, solve_dual_lp(inst));
    auto rep = verify_dual_certificate(inst, mr.matching, lam);
    Json j;
    j["matching"] = matching_to_json(inst, mr.matching);
    j["weight"] = rational_to_json(mr.weight);
    j["dual"] = dual_to_json(inst, lam);
    j["certificate"] = report_to_json(rep);
    em.emit(j, rep.all_pass() ? "dual certified, objective = " + to_string(lam.objective())
                              : "dual certificate FAILED: " + rep.first_failure());
    return rep.all_pass() ? 0 : 1;
}

inline ProjectionOperator build_from_options(const FiniteMetricSpace& space,
                                             const Options& opt) {
    auto pairs = load_pairs(space, opt);
    if (!opt.dual_file.empty()) {
        std::vector<int> verts;
        for (const auto& [x, y] : pairs) {
            verts.push_back(x);
            verts.push_back(y);
        }
        auto inst = MatchingInstance::create(space, verts);
        auto dual = dual_from_json(inst, read_json_file(opt.dual_file));
        return build_projection_with_dual(space, pairs, std::move(dual));
    }
    return build_projection(space, pairs);
}

inline int cmd_project(const Options& opt, const Emitter& em) {
    auto space = load_space(opt);
    try {
        auto P = build_from_options(space, opt);
        em.emit(projection_to_json(P),
                "projection built on " + std::to_string(P.num_pairs()) + " pairs");
        return 0;
    } catch (const TcsError& e) {
        if (e.code() == ErrorCode::NotAMinimumMatching) {
            Json j;
            j["failing_prefix"] = e.index();
            em.emit(j, "not a minimum matching at prefix " +
                           std::to_string(e.index()));
            return 1;
        }
        throw;
    }
}

inline int cmd_certify(const Options& opt, const Emitter& em) {
    auto space = load_space(opt);
    try {
        auto P = build_from_options(space, opt);
        auto rep = certify_projection(P);
        em.emit(report_to_json(rep),
                rep.all_pass() ? "all checks passed"
                               : "FAILED: " + rep.first_failure());
        return rep.all_pass() ? 0 : 1;
    } catch (const TcsError& e) {
        if (e.code() == ErrorCode::NotAMinimumMatching) {
            Json j;
            j["failing_prefix"] = e.index();
            em.emit(j, "not a minimum matching at prefix " +
                           std::to_string(e.index()));
            return 1;
        }
        throw;
    }
}

inline int cmd_criterion(const Options& opt, const Emitter& em) {
    auto space = load_space(opt);
    auto pairs = load_pairs(space, opt);
    auto fail = check_prefix_matching_criterion(space, pairs);
    Json j;
    j["pass"] = !fail.has_value();
    if (fail) {
        j["failing_prefix"] = *fail;
        em.emit(j, "failed at prefix " + std::to_string(*fail));
        return 1;
    }
    em.emit(j, "pass");
    return 0;
}

inline int cmd_generate(const Options& opt, const Emitter& em) {
    GeneratorSpec spec{metric_kind_from_name(opt.kind), opt.size, opt.seed,
                       opt.denominator_bound};
    auto space = gen_random_metric(spec);
    em.emit(space_to_json(space),
            std::string(metric_kind_name(spec.kind)) + " space with " +
                std::to_string(space.size()) + " points");
    return 0;
}

inline int cmd_suite(const Options& opt, const Emitter& em) {
    GeneratorSpec spec{metric_kind_from_name(opt.kind), opt.size, opt.seed,
                       opt.denominator_bound};
    auto rep = run_property_suite(spec, opt.trials, opt.inject_fault);
    bool ok = rep.failures == 0;
    em.emit(rep.to_json(),
            ok ? "suite passed (" + std::to_string(rep.trials) + " trials)"
               : "suite FAILED (" + std::to_string(rep.failures) + " failures)");
    return ok ? 0 : 1;
}

} // namespace cli_detail

/// Parses and dispatches. Streams are injectable for tests.
inline int run(std::vector<std::string> args, std::ostream& out,
               std::ostream& err) {
    CLI::App app{"exact transportation-cost projections over finite metric spaces",
                 "tcs"};
    app.require_subcommand(1);
    cli_detail::Options opt;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--format", opt.format, "json or text")
            ->check(CLI::IsMember({"json", "text"}));
        cmd->add_option("--out", opt.out_file, "write the report to a file");
    };
    auto add_space = [&](CLI::App* cmd) {
        cmd->add_option("--space", opt.space_file, "metric space JSON file");
    };

    auto* validate = app.add_subcommand("validate", "check the metric axioms");
    add_space(validate);
    add_common(validate);

    auto* tcn = app.add_subcommand("tc-norm", "transportation cost norm");
    add_space(tcn);
    add_common(tcn);
    tcn->add_option("--problem", opt.problem_file, "transportation problem JSON");
    tcn->add_option("--dump-lp", opt.dump_lp_file, "dump the LP instance");

    auto* match = app.add_subcommand("match", "minimum-weight perfect matching");
    add_space(match);
    add_common(match);
    match->add_option("--dump-lp", opt.dump_lp_file, "dump the LP instance");

    auto* dual = app.add_subcommand("dual", "laminar odd-cut dual + certificate");
    add_space(dual);
    add_common(dual);
    dual->add_option("--dump-lp", opt.dump_lp_file, "dump the LP instance");

    auto* project = app.add_subcommand("project", "build the projection");
    add_space(project);
    add_common(project);
    project->add_option("--pairs", opt.pairs_file, "matched pairs JSON");
    project->add_option("--dual", opt.dual_file, "pin a laminar dual JSON");

    auto* certify = app.add_subcommand("certify", "projection certificate");
    add_space(certify);
    add_common(certify);
    certify->add_option("--pairs", opt.pairs_file, "matched pairs JSON");
    certify->add_option("--dual", opt.dual_file, "pin a laminar dual JSON");

    auto* criterion = app.add_subcommand("criterion", "prefix matching criterion");
    add_space(criterion);
    add_common(criterion);
    criterion->add_option("--pairs", opt.pairs_file, "matched pairs JSON");

    auto* generate = app.add_subcommand("generate", "random metric space");
    add_common(generate);
    generate->add_option("--kind", opt.kind, "generator kind");
    generate->add_option("--size", opt.size, "number of points");
    generate->add_option("--seed", opt.seed, "64-bit seed");
    generate->add_option("--denominator-bound", opt.denominator_bound,
                         "max denominator of generated rationals");

    auto* suite = app.add_subcommand("suite", "property suite over generated instances");
    add_common(suite);
    suite->add_option("--kind", opt.kind, "generator kind");
    suite->add_option("--size", opt.size, "points per instance");
    suite->add_option("--seed", opt.seed, "64-bit seed");
    suite->add_option("--trials", opt.trials, "number of trials");
    suite->add_option("--denominator-bound", opt.denominator_bound,
                      "max denominator of generated rationals");
    suite->add_flag("--inject-fault", opt.inject_fault,
                    "perturb each dual and expect certification failures");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help
            out << app.help();
            return 0;
        }
        err << e.what() << "\n";
        return 2;
    }

    cli_detail::Emitter em{out, opt};
    try {
        if (validate->parsed()) return cli_detail::cmd_validate(opt, em);
        if (tcn->parsed()) return cli_detail::cmd_tc_norm(opt, em);
        if (match->parsed()) return cli_detail::cmd_match(opt, em);
        if (dual->parsed()) return cli_detail::cmd_dual(opt, em);
        if (project->parsed()) return cli_detail::cmd_project(opt, em);
        if (certify->parsed()) return cli_detail::cmd_certify(opt, em);
        if (criterion->parsed()) return cli_detail::cmd_criterion(opt, em);
        if (generate->parsed()) return cli_detail::cmd_generate(opt, em);
        if (suite->parsed()) return cli_detail::cmd_suite(opt, em);
        err << "no subcommand\n";
        return 2;
    } catch (const TcsError& e) {
        Json j;
        j["error"] = error_code_name(e.code());
        j["message"] = e.what();
        if (!e.witnesses().empty()) j["witnesses"] = e.witnesses();
        out << j.dump(2) << "\n";
        return 2;
    }
}

} // namespace tcs::cli
