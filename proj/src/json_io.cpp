#include "dejong/json_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "dejong/errors.hpp"

namespace dejong {

namespace {

using nlohmann::json;

Rational parse_scalar_rational(const json& v, const std::string& where) {
    try {
        if (v.is_string()) return parse_rational_or_throw(v.get<std::string>());
        if (v.is_number_integer()) {
            Rational q;
            q = static_cast<long>(v.get<long long>());
            return q;
        }
    } catch (const std::invalid_argument& e) {
        throw ParseError(where + ": " + e.what());
    }
    throw ParseError(where + ": rational mode takes \"num/den\" strings or integers");
}

double parse_scalar_real(const json& v, const std::string& where) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        try {
            return to_double(parse_rational_or_throw(v.get<std::string>()));
        } catch (const std::invalid_argument& e) {
            throw ParseError(where + ": " + e.what());
        }
    }
    throw ParseError(where + ": expected a number or numeric string");
}

std::vector<int> parse_subset(const json& js, int n, const std::string& where) {
    if (!js.is_array() || js.empty())
        throw ParseError(where + ": subset must be a nonempty array");
    std::vector<int> out;
    long long prev = 0;
    for (const auto& e : js) {
        if (!e.is_number_integer())
            throw ParseError(where + ": subset entries must be integers");
        const long long v = e.get<long long>();
        if (v < 1 || v > n) throw ParseError(where + ": subset index outside [1, n]");
        if (v <= prev) throw ParseError(where + ": subset must be strictly ascending");
        prev = v;
        out.push_back(static_cast<int>(v) - 1);
    }
    return out;
}

template <class S, class ParseFn>
UStatisticSpec<S> parse_typed_spec(const json& j, ParseFn parse_scalar) {
    UStatisticSpec<S> spec;
    spec.n = j.at("n").get<int>();
    if (spec.n < 1) throw ParseError("n must be positive");
    spec.kernels.order = j.at("p").get<int>();
    spec.symmetric = j.value("symmetric", false);

    const auto& jvars = j.at("variables");
    if (!jvars.is_array() || static_cast<int>(jvars.size()) != spec.n)
        throw ParseError("variables must be an array of length n");
    int vi = 0;
    for (const auto& jv : jvars) {
        const std::string where = "variables[" + std::to_string(vi++) + "]";
        Variable<S> v;
        if (jv.contains("sampler")) {
            if (jv.contains("atoms"))
                throw ParseError(where + ": a variable has either atoms or a sampler, not both");
            const auto name = jv.at("sampler").get<std::string>();
            if (name != "standard_normal")
                throw ParseError(where + ": unknown sampler '" + name + "'");
            v.sampler = SamplerKind::StandardNormal;
        } else {
            if (!jv.contains("atoms") || !jv.at("atoms").is_array() || jv.at("atoms").empty())
                throw ParseError(where + ": needs a nonempty atoms array or a sampler");
            for (const auto& ja : jv.at("atoms"))
                v.atoms.push_back({parse_scalar(ja.at("v"), where + ".v"),
                                   parse_scalar(ja.at("prob"), where + ".prob")});
        }
        spec.variables.push_back(std::move(v));
    }

    const auto& jk = j.at("kernels");
    const auto type = jk.at("type").get<std::string>();
    if (type == "homogeneous") {
        for (const auto& jc : jk.at("coeffs")) {
            Kernel<S> k;
            k.subset = parse_subset(jc.at("subset"), spec.n, "kernels.coeffs");
            k.is_product = true;
            k.coeff = parse_scalar(jc.at("a"), "kernels.coeffs.a");
            spec.kernels.entries.push_back(std::move(k));
        }
    } else if (type == "table") {
        for (const auto& je : jk.at("entries")) {
            Kernel<S> k;
            k.subset = parse_subset(je.at("subset"), spec.n, "kernels.entries");
            k.is_product = false;
            const auto& jt = je.at("table");
            if (!jt.is_array()) throw ParseError("kernels.entries.table must be an array");
            for (const auto& tv : jt) k.table.push_back(parse_scalar(tv, "kernels.entries.table"));
            spec.kernels.entries.push_back(std::move(k));
        }
    } else {
        throw ParseError("kernels.type must be \"homogeneous\" or \"table\"");
    }
    return spec;
}

json scalar_atoms_json(const Variable<Rational>& v) {
    json atoms = json::array();
    for (const auto& a : v.atoms)
        atoms.push_back({{"v", rational_str(a.value)}, {"prob", rational_str(a.prob)}});
    return atoms;
}

json scalar_atoms_json(const Variable<double>& v) {
    json atoms = json::array();
    for (const auto& a : v.atoms)
        atoms.push_back({{"v", decimal15(a.value)}, {"prob", decimal15(a.prob)}});
    return atoms;
}

std::string wire_scalar(const Rational& q) { return rational_str(q); }
std::string wire_scalar(double v) { return decimal15(v); }

template <class S>
json spec_body_json(const UStatisticSpec<S>& spec) {
    json j;
    j["n"] = spec.n;
    j["p"] = spec.kernels.order;
    j["symmetric"] = spec.symmetric;
    j["variables"] = json::array();
    for (const auto& v : spec.variables) {
        if (!v.finite())
            j["variables"].push_back({{"sampler", "standard_normal"}});
        else
            j["variables"].push_back({{"atoms", scalar_atoms_json(v)}});
    }
    const bool all_product =
        std::all_of(spec.kernels.entries.begin(), spec.kernels.entries.end(),
                    [](const auto& k) { return k.is_product; });
    json subsets_1based = json::array();
    if (all_product) {
        json coeffs = json::array();
        for (const auto& k : spec.kernels.entries) {
            json subset = json::array();
            for (int axis : k.subset) subset.push_back(axis + 1);
            coeffs.push_back({{"subset", subset}, {"a", wire_scalar(k.coeff)}});
        }
        j["kernels"] = {{"type", "homogeneous"}, {"coeffs", coeffs}};
    } else {
        json entries = json::array();
        for (const auto& k : spec.kernels.entries) {
            json subset = json::array();
            for (int axis : k.subset) subset.push_back(axis + 1);
            json table = json::array();
            if (k.is_product) {
                // Expand the product form over the subset's joint support,
                // lowest subset coordinate varying fastest.
                std::size_t total = 1;
                for (int axis : k.subset)
                    total *= spec.variables[static_cast<std::size_t>(axis)].atoms.size();
                for (std::size_t cell = 0; cell < total; ++cell) {
                    S value = k.coeff;
                    std::size_t rest = cell;
                    for (int axis : k.subset) {
                        const auto& atoms = spec.variables[static_cast<std::size_t>(axis)].atoms;
                        value = value * atoms[rest % atoms.size()].value;
                        rest /= atoms.size();
                    }
                    table.push_back(wire_scalar(value));
                }
            } else {
                for (const auto& tv : k.table) table.push_back(wire_scalar(tv));
            }
            entries.push_back({{"subset", subset}, {"table", table}});
        }
        j["kernels"] = {{"type", "table"}, {"entries", entries}};
    }
    return j;
}

template <class S>
json decomposition_json_impl(const Decomposition<S>& dec, int n) {
    auto comps = dec.components;
    std::sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) {
        const int pa = __builtin_popcountll(a.mask), pb = __builtin_popcountll(b.mask);
        return pa != pb ? pa < pb : a.mask < b.mask;
    });
    json out;
    out["components"] = json::array();
    for (const auto& c : comps) {
        json subset = json::array();
        for (int axis : c.subset) subset.push_back(axis + 1);
        json table = json::array();
        for (const auto& v : c.table.data) table.push_back(scalar_json(v));
        out["components"].push_back(
            {{"subset", subset}, {"sigma2", scalar_json(c.sigma2)}, {"table", table}});
    }
    auto vars = component_variances(dec);
    out["var"] = scalar_json(vars.var);
    out["rho2"] = scalar_json(rho_squared(vars, n));
    return out;
}

template <class S>
json pair_report_json_impl(const PairReport<S>& rep) {
    json j;
    j["n"] = rep.n;
    j["p"] = rep.p;
    j["lambda"] = scalar_json(rep.lambda);
    j["regression_max_residual"] = scalar_json(rep.regression_max_residual);
    j["mean_sq_increment"] = scalar_json(rep.mean_sq_increment);
    j["var_cond_sq"] = scalar_json(rep.var_cond_sq);
    j["fourth_increment"] = scalar_json(rep.fourth_increment);
    j["e2"] = scalar_json(rep.e2);
    j["e4"] = scalar_json(rep.e4);
    j["rho2"] = scalar_json(rep.rho2);
    if (rep.kappa) j["kappa"] = scalar_json(*rep.kappa);
    json slacks;
    if (rep.lemma1_slack) slacks["lemma1"] = scalar_json(*rep.lemma1_slack);
    if (rep.lemma2_slack) slacks["lemma2"] = scalar_json(*rep.lemma2_slack);
    slacks["lemma3a"] = scalar_json(rep.lemma3a_slack);
    slacks["lemma3b"] = scalar_json(rep.lemma3b_slack);
    j["lemma_slacks"] = slacks;
    j["shzh"] = {{"term1", scalar_json(rep.shzh_term1)},
                 {"term2", scalar_json(rep.shzh_term2)},
                 {"term1_x", scalar_json(rep.shzh_term1_x)},
                 {"term2_x", scalar_json(rep.shzh_term2_x)}};
    j["energy"] = {{"grouped", scalar_json(rep.energy_grouped)},
                   {"direct", scalar_json(rep.energy_direct)}};
    j["exchangeability_discrepancy"] = scalar_json(rep.exchangeability_discrepancy);
    j["conditional_hoeffding"] = {{"match", rep.hoeff_cond_match},
                                  {"max_abs_diff", scalar_json(rep.hoeff_cond_max_diff)}};
    return j;
}

Verdict overall_verdict(const BoundReport& rep) {
    bool any_violated = rep.verdict_kolmogorov == Verdict::Violated ||
                        rep.verdict_symmetric == Verdict::Violated ||
                        rep.verdict_wasserstein == Verdict::Violated;
    if (any_violated) return Verdict::Violated;
    bool any_known = rep.verdict_kolmogorov == Verdict::Dominates ||
                     rep.verdict_symmetric == Verdict::Dominates ||
                     rep.verdict_wasserstein == Verdict::Dominates;
    return any_known ? Verdict::Dominates : Verdict::Unknown;
}

}  // namespace

std::string decimal15(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

nlohmann::json scalar_json(double v) { return {{"decimal", decimal15(v)}}; }

nlohmann::json scalar_json(const Rational& v) {
    return {{"decimal", decimal15(to_double(v))}, {"rational", rational_str(v)}};
}

SpecDocument parse_spec_document(const nlohmann::json& j, const std::string& default_id) {
    try {
        SpecDocument doc;
        doc.mode = j.at("mode").get<std::string>();
        doc.id = j.value("id", default_id);
        if (doc.mode == "rational")
            doc.spec = parse_typed_spec<Rational>(j, parse_scalar_rational);
        else if (doc.mode == "real")
            doc.spec = parse_typed_spec<double>(j, parse_scalar_real);
        else
            throw ParseError("mode must be \"rational\" or \"real\"");
        return doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed spec document: ") + e.what());
    }
}

namespace {

std::string file_stem(const std::string& path) {
    const auto slash = path.find_last_of("/\\");
    std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
    const auto dot = name.find_last_of('.');
    return dot == std::string::npos ? name : name.substr(0, dot);
}

nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

}  // namespace

SpecDocument load_spec_file(const std::string& path) {
    return parse_spec_document(load_json_file(path), file_stem(path));
}

std::vector<SpecDocument> load_sweep_file(const std::string& path) {
    nlohmann::json j = load_json_file(path);
    const nlohmann::json* list = &j;
    if (j.is_object()) {
        if (!j.contains("specs"))
            throw ParseError(path + ": sweep file needs a top-level array or a \"specs\" array");
        list = &j.at("specs");
    }
    if (!list->is_array()) throw ParseError(path + ": sweep \"specs\" must be an array");
    std::vector<SpecDocument> out;
    int index = 0;
    for (const auto& e : *list)
        out.push_back(parse_spec_document(e, file_stem(path) + "_" + std::to_string(index++)));
    return out;
}

nlohmann::json spec_to_json(const SpecDocument& doc) {
    json j = doc.is_rational() ? spec_body_json(doc.rational()) : spec_body_json(doc.real());
    j["mode"] = doc.mode;
    j["id"] = doc.id;
    return j;
}

nlohmann::json decomposition_json(const OutcomeSpace<Rational>&, const Decomposition<Rational>& dec,
                                  int n) {
    return decomposition_json_impl(dec, n);
}

nlohmann::json decomposition_json(const OutcomeSpace<double>&, const Decomposition<double>& dec,
                                  int n) {
    return decomposition_json_impl(dec, n);
}

nlohmann::json pair_report_json(const PairReport<Rational>& rep) {
    return pair_report_json_impl(rep);
}

nlohmann::json pair_report_json(const PairReport<double>& rep) { return pair_report_json_impl(rep); }

nlohmann::json bound_report_json(const BoundReport& rep) {
    json j;
    j["inputs"] = {{"fourth_moment", scalar_json(rep.inputs.fourth_moment)},
                   {"rho", scalar_json(rep.inputs.rho)},
                   {"kappa", scalar_json(rep.inputs.kappa)},
                   {"p", rep.inputs.p},
                   {"n", rep.inputs.n},
                   {"symmetric", rep.inputs.symmetric}};
    j["kappa_source"] = kappa_source_tag(rep.kappa_source);
    json bounds;
    bounds["kolmogorov"] = scalar_json(rep.kolmogorov);
    bounds["wasserstein"] = scalar_json(rep.wasserstein);
    bounds["proof_kolmogorov"] = scalar_json(rep.proof_kolmogorov);
    if (rep.symmetric) bounds["symmetric"] = scalar_json(*rep.symmetric);
    j["bounds"] = bounds;
    json dist;
    if (rep.exact_dk) dist["dk_exact"] = scalar_json(*rep.exact_dk);
    if (rep.exact_dw) dist["dw_exact"] = scalar_json(*rep.exact_dw);
    if (rep.empirical_dk) dist["dk_mc"] = scalar_json(*rep.empirical_dk);
    if (rep.empirical_band) dist["dk_band"] = scalar_json(*rep.empirical_band);
    j["distances"] = dist;
    json verdicts;
    verdicts["kolmogorov"] = verdict_tag(rep.verdict_kolmogorov);
    verdicts["wasserstein"] = verdict_tag(rep.verdict_wasserstein);
    if (rep.symmetric) verdicts["symmetric"] = verdict_tag(rep.verdict_symmetric);
    verdicts["overall"] = verdict_tag(overall_verdict(rep));
    j["verdicts"] = verdicts;
    j["dk_dw_consistent"] = rep.dk_dw_consistent;
    return j;
}

std::string bound_report_csv_header() {
    return "spec_id,p,n,E4,rho,kappa,bK,bW,dK_exact,dW_exact,dK_mc,band,verdict";
}

std::string bound_report_csv_row(const std::string& spec_id, const BoundReport& rep) {
    auto opt = [](const std::optional<double>& v) { return v ? decimal15(*v) : std::string(); };
    std::string row = spec_id;
    row += ',' + std::to_string(rep.inputs.p);
    row += ',' + std::to_string(rep.inputs.n);
    row += ',' + decimal15(rep.inputs.fourth_moment);
    row += ',' + decimal15(rep.inputs.rho);
    row += ',' + decimal15(rep.inputs.kappa);
    row += ',' + decimal15(rep.kolmogorov);
    row += ',' + decimal15(rep.wasserstein);
    row += ',' + opt(rep.exact_dk);
    row += ',' + opt(rep.exact_dw);
    row += ',' + opt(rep.empirical_dk);
    row += ',' + opt(rep.empirical_band);
    row += ',';
    row += verdict_tag(overall_verdict(rep));
    return row;
}

nlohmann::json simulation_summary_json(const SimulationSummary& s) {
    json j;
    j["seed"] = s.seed;
    j["m"] = s.m;
    j["mean"] = scalar_json(s.mean);
    j["var"] = scalar_json(s.var);
    j["m4"] = scalar_json(s.m4);
    j["m4_std_error"] = scalar_json(s.m4_std_error);
    j["dk_est"] = scalar_json(s.dk_est);
    j["dk_band"] = scalar_json(s.dk_band);
    j["dw_est"] = scalar_json(s.dw_est);
    return j;
}

std::string simulation_summary_csv_header() {
    return "seed,m,mean,var,m4,dk_est,dk_band,dw_est";
}

std::string simulation_summary_csv_row(const SimulationSummary& s) {
    std::string row = std::to_string(s.seed);
    row += ',' + std::to_string(s.m);
    row += ',' + decimal15(s.mean);
    row += ',' + decimal15(s.var);
    row += ',' + decimal15(s.m4);
    row += ',' + decimal15(s.dk_est);
    row += ',' + decimal15(s.dk_band);
    row += ',' + decimal15(s.dw_est);
    return row;
}

}  // namespace dejong
