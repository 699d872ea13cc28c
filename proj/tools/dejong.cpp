#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dejong/bounds.hpp"
#include "dejong/distances.hpp"
#include "dejong/errors.hpp"
#include "dejong/exact_engine.hpp"
#include "dejong/family.hpp"
#include "dejong/json_io.hpp"
#include "dejong/mc.hpp"
#include "dejong/model.hpp"
#include "dejong/pair.hpp"

namespace {

using namespace dejong;
using nlohmann::json;

constexpr int kExitOk = 0;         // success
constexpr int kExitViolation = 1;  // a verified mathematical statement failed
constexpr int kExitParse = 2;      // malformed input or invalid spec
constexpr int kExitGuard = 3;      // resource guard (space too large, no sampler)
constexpr int kExitKappa = 4;      // kappa needed but unknown

struct Options {
    std::string spec_path;
    std::string out_path;
    std::string format = "json";
    std::string kappa_str;
    std::uint64_t mc_samples = 0;  // 0 = exact only
    std::uint64_t seed = 0;
    double delta = 0.01;
    unsigned workers = 1;
    // bound --inputs-only: evaluate the formulas on synthetic inputs
    bool inputs_only = false;
    double e4 = 3.0;
    double rho = 0.0;
    bool rho_given = false;  // declared rho for MC-only runs
    int p = 1;
    int n = 1;
    bool symmetric = false;
};

std::uint64_t max_outcomes_limit() {
    if (const char* env = std::getenv("DEJONG_MAX_OUTCOMES")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return v;
    }
    return kDefaultMaxOutcomes;
}

void write_output(const Options& o, const std::string& text) {
    if (o.out_path.empty()) {
        std::cout << text << '\n';
    } else {
        std::ofstream out(o.out_path);
        if (!out) throw ParseError("cannot open output file: " + o.out_path);
        out << text << '\n';
    }
}

std::optional<double> user_kappa(const Options& o) {
    if (o.kappa_str.empty()) return std::nullopt;
    return to_double(parse_rational_or_throw(o.kappa_str));
}

void require_valid_spec(const SpecDocument& doc) {
    const auto violations =
        doc.is_rational() ? validate_spec(doc.rational()) : validate_spec(doc.real());
    if (violations.empty()) return;
    std::string msg = "invalid spec:";
    for (const auto& v : violations) {
        msg += ' ';
        msg += violation_name(v.code);
        if (!v.detail.empty()) msg += " (" + v.detail + ")";
        msg += ';';
    }
    throw ParseError(msg);
}

// ---------------------------------------------------------------- decompose

template <class S>
json decompose_typed(const UStatisticSpec<S>& spec) {
    auto space = OutcomeSpace<S>::build(spec, max_outcomes_limit());
    auto dec = hoeffding_decompose(space, statistic_table(space, spec));
    return decomposition_json(space, dec, spec.n);
}

int cmd_decompose(const Options& o) {
    auto doc = load_spec_file(o.spec_path);
    require_valid_spec(doc);
    json j = doc.is_rational() ? decompose_typed(doc.rational()) : decompose_typed(doc.real());
    write_output(o, j.dump(2));
    return kExitOk;
}

// ------------------------------------------------------------------- verify

template <class S>
int verify_typed(const UStatisticSpec<S>& spec, const Options& o, json& out) {
    using T = scalar_traits<S>;
    const auto cap = max_outcomes_limit();
    auto ctx = PairContext<S>::build(spec, cap);

    std::optional<S> kappa;
    if (!o.kappa_str.empty())
        kappa = T::from_rational(parse_rational_or_throw(o.kappa_str));
    else if (spec.symmetric)
        kappa = T::from_ratio(2 * spec.order(), 1);
    else
        throw KappaUnknown("spec is not symmetric; give --kappa");

    auto rep = pair_report(ctx, kappa);
    auto degeneracy = check_degeneracy(ctx.space, spec);
    out = pair_report_json(rep);

    json identities;
    bool ok = true;
    auto record = [&](const char* name, bool holds) {
        identities[name] = holds;
        ok = ok && holds;
    };
    record("regression", T::is_zero(rep.regression_max_residual));
    // E[(W'-W)^2] = (2p/n) E[W^2], stated against E[W^2] so non-normalized
    // specs are judged by the scale-free identity.
    record("mean_sq_increment",
           T::is_zero(rep.mean_sq_increment - (rep.lambda + rep.lambda) * rep.e2));
    record("degenerate", degeneracy.degenerate);
    record("conditional_hoeffding", rep.hoeff_cond_match);
    record("exchangeability", T::is_zero(rep.exchangeability_discrepancy));
    record("energy_tower", T::is_zero(rep.energy_grouped - rep.energy_direct));

    // Signed-square product identity over the first coordinate pair, lifted
    // over two fresh copies; skipped when the lifted space exceeds the guard.
    if (spec.n >= 2) {
        try {
            auto theta = theta_product_identity(ctx, 0, 1, cap);
            record("theta_identity", T::is_zero(theta.lhs - theta.rhs));
            record("theta_swap_sign", T::is_zero(theta.swap_one + theta.lhs));
            record("theta_swap_both", T::is_zero(theta.swap_both - theta.lhs));
            out["theta_identity"] = {{"lhs", scalar_json(theta.lhs)},
                                     {"rhs", scalar_json(theta.rhs)},
                                     {"swap_one", scalar_json(theta.swap_one)},
                                     {"swap_both", scalar_json(theta.swap_both)}};
        } catch (const SpaceTooLarge&) {
            out["theta_identity"] = "skipped: lifted space exceeds the outcome guard";
        }
    }

    // Each coordinate difference D_i changes sign under swapping the original
    // variable with its fresh copy, so the signed square averages to zero.
    try {
        bool theta_mean_ok = true;
        for (int i = 0; i < spec.n; ++i) {
            auto diff = difference_statistic(ctx, i);
            auto dspace = OutcomeSpace<S>::build(diff.spec, cap);
            auto d = statistic_table(dspace, diff.spec);
            theta_mean_ok = theta_mean_ok && T::is_zero(expectation(dspace, theta_table(d)));
        }
        record("theta_mean_zero", theta_mean_ok);
    } catch (const SpaceTooLarge&) {
        out["theta_mean_zero"] = "skipped: lifted space exceeds the outcome guard";
    }

    json offenders = json::array();
    for (const auto& sub : degeneracy.offenders) {
        json s = json::array();
        for (int axis : sub) s.push_back(axis + 1);
        offenders.push_back(s);
    }
    out["degeneracy_offenders"] = offenders;

    // Slack inequalities are only meaningful for normalized statistics.
    const bool unit_variance = detail::scalar_eq(rep.e2, T::one());
    if (unit_variance) {
        json slacks_ok;
        auto record_slack = [&](const char* name, const S& slack) {
            slacks_ok[name] = T::is_nonneg(slack);
            ok = ok && T::is_nonneg(slack);
        };
        if (rep.lemma1_slack) record_slack("lemma1", *rep.lemma1_slack);
        if (rep.lemma2_slack) record_slack("lemma2", *rep.lemma2_slack);
        record_slack("lemma3a", rep.lemma3a_slack);
        record_slack("lemma3b", rep.lemma3b_slack);
        out["slack_checks"] = slacks_ok;
    } else {
        out["slack_checks"] = "skipped: statistic is not normalized to unit variance";
    }

    out["identities"] = identities;
    out["pass"] = ok;
    return ok ? kExitOk : kExitViolation;
}

int cmd_verify(const Options& o) {
    auto doc = load_spec_file(o.spec_path);
    require_valid_spec(doc);
    json out;
    int code = doc.is_rational() ? verify_typed(doc.rational(), o, out)
                                 : verify_typed(doc.real(), o, out);
    write_output(o, out.dump(2));
    return code;
}

// ----------------------------------------------------- bound and distances

struct ExactSummary {
    double e2 = 0, e4 = 0, rho2 = 0;
    double dk = 0, dw = 0;
    bool degenerate = true;
};

template <class S>
ExactSummary exact_summary_typed(const UStatisticSpec<S>& spec) {
    using T = scalar_traits<S>;
    const auto cap = max_outcomes_limit();
    auto space = OutcomeSpace<S>::build(spec, cap);
    auto w = statistic_table(space, spec);
    auto dec = hoeffding_decompose(space, w);
    ExactSummary s;
    s.e2 = T::to_double(moment(space, spec, 2));
    s.e4 = T::to_double(moment(space, spec, 4));
    s.rho2 = T::to_double(rho_squared(component_variances(dec), spec.n));
    for (const auto& c : dec.components)
        if (static_cast<int>(c.subset.size()) != spec.order()) s.degenerate = false;
    auto law = law_from_space(space, w);
    s.dk = kolmogorov_exact(law);
    s.dw = wasserstein_exact(law);
    return s;
}

ExactSummary exact_summary(const SpecDocument& doc) {
    return doc.is_rational() ? exact_summary_typed(doc.rational())
                             : exact_summary_typed(doc.real());
}

struct PipelineResult {
    BoundReport report;
    std::optional<ExactSummary> exact;
    std::optional<DistanceEstimate> mc;
    std::optional<MomentEstimate> mc_e4;
};

PipelineResult bound_pipeline(const SpecDocument& doc, const Options& o) {
    require_valid_spec(doc);
    const int p = doc.is_rational() ? doc.rational().order() : doc.real().order();
    const int n = doc.is_rational() ? doc.rational().n : doc.real().n;
    const bool symmetric = doc.is_rational() ? doc.rational().symmetric : doc.real().symmetric;

    PipelineResult result;
    try {
        result.exact = exact_summary(doc);
    } catch (const SpaceTooLarge&) {
        if (o.mc_samples == 0) throw;
    } catch (const SamplerOnlyVariable&) {
        if (o.mc_samples == 0) throw;
    }

    RunConfig cfg{.seed = o.seed, .samples = o.mc_samples, .delta = o.delta,
                  .workers = o.workers};
    if (o.mc_samples > 0) {
        auto real_spec = doc.as_real();
        result.mc = estimate_distances(real_spec, cfg);
        if (!result.exact) result.mc_e4 = estimate_fourth_moment(real_spec, cfg);
    }

    double e4 = 0, rho = 0;
    if (result.exact) {
        e4 = result.exact->e4;
        rho = std::sqrt(result.exact->rho2);
    } else {
        e4 = result.mc_e4->estimate;
        if (o.rho_given)
            rho = o.rho;
        else if (symmetric)
            rho = std::sqrt(static_cast<double>(p) / n);  // exact for symmetric specs
        else
            throw SpaceTooLarge(
                "rho is not Monte-Carlo estimable; declare --rho or shrink the spec");
    }

    auto kappa = kappa_policy(symmetric, p, user_kappa(o));
    BoundInputs in{.fourth_moment = e4, .rho = rho, .kappa = kappa.value, .p = p, .n = n,
                   .symmetric = symmetric};
    result.report = make_bound_report(
        in, kappa.source,
        result.exact ? std::optional<double>(result.exact->dk) : std::nullopt,
        result.exact ? std::optional<double>(result.exact->dw) : std::nullopt,
        result.mc ? std::optional<double>(result.mc->dk_est) : std::nullopt,
        result.mc ? std::optional<double>(result.mc->dk_band) : std::nullopt);
    return result;
}

int cmd_bound(const Options& o) {
    if (o.inputs_only) {
        auto kappa = kappa_policy(o.symmetric, o.p, user_kappa(o));
        BoundInputs in{.fourth_moment = o.e4, .rho = o.rho, .kappa = kappa.value, .p = o.p,
                       .n = o.n, .symmetric = o.symmetric};
        auto report = make_bound_report(in, kappa.source, std::nullopt, std::nullopt,
                                        std::nullopt, std::nullopt);
        if (o.format == "csv")
            write_output(o, bound_report_csv_header() + '\n' +
                                bound_report_csv_row("inputs-only", report));
        else
            write_output(o, bound_report_json(report).dump(2));
        return kExitOk;
    }
    auto doc = load_spec_file(o.spec_path);
    auto result = bound_pipeline(doc, o);
    if (o.format == "csv") {
        write_output(o, bound_report_csv_header() + '\n' +
                            bound_report_csv_row(doc.id, result.report));
    } else {
        json j = bound_report_json(result.report);
        j["spec_id"] = doc.id;
        if (result.mc) j["distances"]["dw_mc"] = scalar_json(result.mc->dw_est);
        if (result.mc_e4) j["mc_e4_std_error"] = scalar_json(result.mc_e4->std_error);
        write_output(o, j.dump(2));
    }
    return kExitOk;
}

int cmd_distance(const Options& o) {
    auto doc = load_spec_file(o.spec_path);
    require_valid_spec(doc);
    json j;
    std::optional<ExactSummary> exact;
    try {
        exact = exact_summary(doc);
    } catch (const SpaceTooLarge&) {
        if (o.mc_samples == 0) throw;
    } catch (const SamplerOnlyVariable&) {
        if (o.mc_samples == 0) throw;
    }
    if (exact) {
        j["dk_exact"] = scalar_json(exact->dk);
        j["dw_exact"] = scalar_json(exact->dw);
        j["dk_dw_consistent"] = dk_dw_consistency(exact->dk, exact->dw);
    }
    if (o.mc_samples > 0) {
        RunConfig cfg{.seed = o.seed, .samples = o.mc_samples, .delta = o.delta,
                      .workers = o.workers};
        auto est = estimate_distances(doc.as_real(), cfg);
        j["dk_mc"] = scalar_json(est.dk_est);
        j["dk_band"] = scalar_json(est.dk_band);
        j["dw_mc"] = scalar_json(est.dw_est);
    }
    j["spec_id"] = doc.id;
    write_output(o, j.dump(2));
    return kExitOk;
}

// ----------------------------------------------------------------- simulate

int cmd_simulate(const Options& o) {
    auto doc = load_spec_file(o.spec_path);
    require_valid_spec(doc);
    RunConfig cfg{.seed = o.seed,
                  .samples = o.mc_samples == 0 ? 1'000'000 : o.mc_samples,
                  .delta = o.delta,
                  .workers = o.workers};
    auto summary = run_simulation(doc.as_real(), cfg);
    if (o.format == "csv")
        write_output(o, simulation_summary_csv_header() + '\n' +
                            simulation_summary_csv_row(summary));
    else
        write_output(o, simulation_summary_json(summary).dump(2));
    return kExitOk;
}

// -------------------------------------------------------------------- sweep

int cmd_sweep(const Options& o) {
    auto docs = load_sweep_file(o.spec_path);
    std::string out = bound_report_csv_header();
    for (const auto& doc : docs) {
        try {
            auto result = bound_pipeline(doc, o);
            out += '\n' + bound_report_csv_row(doc.id, result.report);
        } catch (const std::exception& e) {
            std::cerr << "sweep: " << doc.id << " failed: " << e.what() << '\n';
            out += '\n' + doc.id + ",,,,,,,,,,,,error";
        }
    }
    write_output(o, out);
    return kExitOk;
}

int dispatch(int (*fn)(const Options&), const Options& o) {
    try {
        return fn(o);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const SpecError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const InvalidKappa& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const KappaUnknown& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitKappa;
    } catch (const SpaceTooLarge& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitGuard;
    } catch (const SubsetBudgetExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitGuard;
    } catch (const SamplerOnlyVariable& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitGuard;
    } catch (const NoSampler& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitGuard;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact and Monte-Carlo analysis of normalized degenerate U-statistics: "
                 "Hoeffding decompositions, exchangeable-pair identities, and "
                 "normal-approximation bounds"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* cmd, bool needs_spec) {
        if (needs_spec)
            cmd->add_option("spec", o.spec_path, "spec JSON file")->required();
        cmd->add_option("--out", o.out_path, "write the report to this file (default stdout)");
        cmd->add_option("--format", o.format, "json|csv")
            ->check(CLI::IsMember({"json", "csv"}));
        cmd->add_option("--kappa", o.kappa_str,
                        "kappa as a rational, e.g. 4 or 7/2 (symmetric specs default to 2p)");
        cmd->add_option("--mc", o.mc_samples, "Monte-Carlo sample count");
        cmd->add_option("--seed", o.seed, "Monte-Carlo seed");
        cmd->add_option("--delta", o.delta, "DKW confidence parameter (default 0.01)");
        cmd->add_option("--workers", o.workers, "sampling threads (never changes results)");
    };

    auto* decompose = app.add_subcommand("decompose", "export the Hoeffding decomposition");
    add_common(decompose, true);
    auto* verify = app.add_subcommand(
        "verify", "check every exchangeable-pair identity and slack inequality");
    add_common(verify, true);
    auto* bound = app.add_subcommand("bound", "evaluate the normal-approximation bounds");
    bound->add_flag("--inputs-only", o.inputs_only,
                    "evaluate formulas on synthetic inputs, no spec file");
    bound->add_option("--e4", o.e4, "fourth moment (with --inputs-only)");
    auto* rho_opt = bound->add_option(
        "--rho", o.rho, "rho (with --inputs-only, or declared for MC-only runs)");
    bound->add_option("--p", o.p, "order (with --inputs-only)");
    bound->add_option("--n", o.n, "variable count (with --inputs-only)");
    bound->add_flag("--symmetric", o.symmetric, "treat inputs as symmetric (with --inputs-only)");
    bound->add_option("spec", o.spec_path, "spec JSON file");
    bound->add_option("--out", o.out_path, "write the report to this file (default stdout)");
    bound->add_option("--format", o.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    bound->add_option("--kappa", o.kappa_str, "kappa as a rational");
    bound->add_option("--mc", o.mc_samples, "Monte-Carlo sample count");
    bound->add_option("--seed", o.seed, "Monte-Carlo seed");
    bound->add_option("--delta", o.delta, "DKW confidence parameter");
    bound->add_option("--workers", o.workers, "sampling threads");
    auto* distance = app.add_subcommand("distance", "exact/empirical distances to N(0,1)");
    add_common(distance, true);
    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo sample summary");
    add_common(simulate, true);
    auto* sweep = app.add_subcommand("sweep", "bound-vs-distance CSV over a spec family");
    add_common(sweep, true);

    CLI11_PARSE(app, argc, argv);
    o.rho_given = rho_opt->count() > 0;

    if (decompose->parsed()) return dispatch(cmd_decompose, o);
    if (verify->parsed()) return dispatch(cmd_verify, o);
    if (bound->parsed()) {
        if (!o.inputs_only && o.spec_path.empty()) {
            std::cerr << "error: bound needs a spec file or --inputs-only\n";
            return kExitParse;
        }
        return dispatch(cmd_bound, o);
    }
    if (distance->parsed()) return dispatch(cmd_distance, o);
    if (simulate->parsed()) return dispatch(cmd_simulate, o);
    if (sweep->parsed()) return dispatch(cmd_sweep, o);
    return kExitParse;
}
