#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>
#include <map>

#include "dejong/errors.hpp"
#include "dejong/json_io.hpp"
#include "doctest.h"

using namespace dejong;
using nlohmann::json;

namespace {

json x1x2_doc() {
    return json::parse(R"({
        "n": 2, "p": 2, "mode": "rational",
        "variables": [
            {"atoms": [{"v": "-1", "prob": "1/2"}, {"v": "1", "prob": "1/2"}]},
            {"atoms": [{"v": "-1", "prob": "1/2"}, {"v": "1", "prob": "1/2"}]}
        ],
        "kernels": {"type": "homogeneous", "coeffs": [{"subset": [1, 2], "a": "1"}]},
        "symmetric": false
    })");
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& content) : path(name) {
        std::ofstream out(path);
        out << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("rational spec document parses") {
    auto doc = parse_spec_document(x1x2_doc(), "x1x2");
    CHECK(doc.mode == "rational");
    CHECK(doc.id == "x1x2");
    REQUIRE(doc.is_rational());
    const auto& spec = doc.rational();
    CHECK(spec.n == 2);
    CHECK(spec.order() == 2);
    CHECK_FALSE(spec.symmetric);
    REQUIRE(spec.kernels.entries.size() == 1);
    CHECK(spec.kernels.entries[0].subset == std::vector<int>{0, 1});  // 1-based on the wire
    CHECK(spec.kernels.entries[0].coeff == Rational(1));
    CHECK(spec.variables[0].atoms[0].value == Rational(-1));
    CHECK(spec.variables[0].atoms[0].prob == Rational(1, 2));
    CHECK(validate_spec(spec).empty());
}

TEST_CASE("real mode accepts numbers and numeric strings") {
    json j = x1x2_doc();
    j["mode"] = "real";
    j["variables"][0]["atoms"][0]["v"] = -1.0;
    j["variables"][0]["atoms"][0]["prob"] = 0.5;
    j["kernels"]["coeffs"][0]["a"] = "1/4";
    auto doc = parse_spec_document(j);
    REQUIRE_FALSE(doc.is_rational());
    CHECK(doc.real().kernels.entries[0].coeff == 0.25);
    CHECK(doc.real().variables[0].atoms[0].value == -1.0);
}

TEST_CASE("sampler variables") {
    json j = x1x2_doc();
    j["mode"] = "real";
    j["variables"][0] = {{"sampler", "standard_normal"}};
    j["variables"][1]["atoms"][0]["v"] = -1.0;
    auto doc = parse_spec_document(j);
    CHECK(doc.real().variables[0].sampler == SamplerKind::StandardNormal);
    CHECK_FALSE(doc.real().variables[0].finite());

    json both = j;
    both["variables"][0]["atoms"] = j["variables"][1]["atoms"];
    CHECK_THROWS_AS(parse_spec_document(both), ParseError);

    json unknown = j;
    unknown["variables"][0]["sampler"] = "cauchy";
    CHECK_THROWS_AS(parse_spec_document(unknown), ParseError);
}

TEST_CASE("table kernels parse") {
    json j = x1x2_doc();
    j["kernels"] = {{"type", "table"},
                    {"entries", json::array({json{{"subset", json::array({1, 2})},
                                                  {"table", json::array({"0", "0", "-2", "2"})}}})}};
    auto doc = parse_spec_document(j);
    const auto& k = doc.rational().kernels.entries.at(0);
    CHECK_FALSE(k.is_product);
    REQUIRE(k.table.size() == 4);
    CHECK(k.table[2] == Rational(-2));
    CHECK(validate_spec(doc.rational()).empty());
}

TEST_CASE("parse errors carry context") {
    auto expect_error = [](json j) { CHECK_THROWS_AS(parse_spec_document(j), ParseError); };

    json bad_mode = x1x2_doc();
    bad_mode["mode"] = "decimal";
    expect_error(bad_mode);

    json zero_based = x1x2_doc();
    zero_based["kernels"]["coeffs"][0]["subset"] = {0, 1};
    expect_error(zero_based);

    json descending = x1x2_doc();
    descending["kernels"]["coeffs"][0]["subset"] = {2, 1};
    expect_error(descending);

    json out_of_range = x1x2_doc();
    out_of_range["kernels"]["coeffs"][0]["subset"] = {1, 3};
    expect_error(out_of_range);

    json missing_vars = x1x2_doc();
    missing_vars.erase("variables");
    expect_error(missing_vars);

    json short_vars = x1x2_doc();
    short_vars["variables"].erase(1);
    expect_error(short_vars);

    json bad_rational = x1x2_doc();
    bad_rational["variables"][0]["atoms"][0]["prob"] = "1/0";
    expect_error(bad_rational);

    json float_in_rational = x1x2_doc();
    float_in_rational["variables"][0]["atoms"][0]["prob"] = 0.5;
    expect_error(float_in_rational);

    json bad_kernel_type = x1x2_doc();
    bad_kernel_type["kernels"]["type"] = "fourier";
    expect_error(bad_kernel_type);

    json fractional_subset = x1x2_doc();
    fractional_subset["kernels"]["coeffs"][0]["subset"] = {1.5, 2};
    expect_error(fractional_subset);
}

TEST_CASE("spec json round-trip") {
    auto doc = parse_spec_document(x1x2_doc(), "x1x2");
    auto j = spec_to_json(doc);
    CHECK(j["mode"] == "rational");
    CHECK(j["id"] == "x1x2");
    auto again = parse_spec_document(j);
    CHECK(again.rational().n == 2);
    CHECK(again.rational().kernels.entries[0].coeff == Rational(1));
    CHECK(again.rational().variables[1].atoms[1].value == Rational(1));

    // Real-mode round trip preserves doubles through decimal15.
    json realdoc = x1x2_doc();
    realdoc["mode"] = "real";
    auto rdoc = parse_spec_document(realdoc);
    auto rj = spec_to_json(rdoc);
    auto ragain = parse_spec_document(rj);
    CHECK(ragain.real().variables[0].atoms[0].prob == 0.5);
}

TEST_CASE("file loading") {
    TempFile good("test_json_spec.json", x1x2_doc().dump());
    auto doc = load_spec_file(good.path);
    CHECK(doc.id == "test_json_spec");  // default id is the file stem
    CHECK(doc.rational().n == 2);

    CHECK_THROWS_AS(load_spec_file("does_not_exist.json"), ParseError);

    TempFile bad("test_json_bad.json", "{ not json");
    CHECK_THROWS_AS(load_spec_file(bad.path), ParseError);
}

TEST_CASE("sweep files: bare array and specs object") {
    json member = x1x2_doc();
    json arr = json::array({member, member});
    TempFile f1("test_sweep_arr.json", arr.dump());
    auto docs = load_sweep_file(f1.path);
    REQUIRE(docs.size() == 2);
    CHECK(docs[0].id == "test_sweep_arr_0");
    CHECK(docs[1].id == "test_sweep_arr_1");

    member["id"] = "named";
    json obj = {{"specs", json::array({member})}};
    TempFile f2("test_sweep_obj.json", obj.dump());
    auto named = load_sweep_file(f2.path);
    REQUIRE(named.size() == 1);
    CHECK(named[0].id == "named");

    TempFile f3("test_sweep_empty.json", "[]");
    CHECK(load_sweep_file(f3.path).empty());

    TempFile f4("test_sweep_bad.json", R"({"nope": 1})");
    CHECK_THROWS_AS(load_sweep_file(f4.path), ParseError);
}

TEST_CASE("decimal serialization") {
    CHECK(decimal15(2.5) == "2.5");
    CHECK(decimal15(0.5353773215478798) == "0.53537732154788");
    CHECK(decimal15(41.929141392239835) == "41.9291413922398");
    auto sj = scalar_json(Rational(3, 5));
    CHECK(sj["rational"] == "3/5");
    CHECK(sj["decimal"] == "0.6");
    CHECK(scalar_json(0.25)["decimal"] == "0.25");
    CHECK_FALSE(scalar_json(0.25).contains("rational"));
}

TEST_CASE("decomposition export") {
    auto doc = parse_spec_document(x1x2_doc());
    const auto& spec = doc.rational();
    auto space = OutcomeSpace<Rational>::build(spec);
    auto dec = hoeffding_decompose(space, statistic_table(space, spec));
    auto j = decomposition_json(space, dec, spec.n);
    REQUIRE(j["components"].size() == 1);
    CHECK(j["components"][0]["subset"] == json::array({1, 2}));
    CHECK(j["components"][0]["sigma2"]["rational"] == "1");
    CHECK(j["components"][0]["table"].size() == 4);
    CHECK(j["var"]["rational"] == "1");
    CHECK(j["rho2"]["rational"] == "1");
}

TEST_CASE("pair report export") {
    auto doc = parse_spec_document(x1x2_doc());
    auto ctx = PairContext<Rational>::build(doc.rational());
    auto rep = pair_report(ctx, std::optional<Rational>(Rational(4)));
    auto j = pair_report_json(rep);
    CHECK(j["lambda"]["rational"] == "1");
    CHECK(j["regression_max_residual"]["rational"] == "0");
    CHECK(j["mean_sq_increment"]["rational"] == "2");
    CHECK(j["fourth_increment"]["rational"] == "2");
    CHECK(j["kappa"]["rational"] == "4");
    CHECK(j["lemma_slacks"]["lemma1"]["rational"] == "2");
    CHECK(j["lemma_slacks"]["lemma2"]["rational"] == "6");
    CHECK(j["lemma_slacks"]["lemma3a"]["rational"] == "0");
    CHECK(j["lemma_slacks"]["lemma3b"]["rational"] == "0");
    CHECK(j["shzh"]["term1"]["rational"] == "0");
    CHECK(j["shzh"]["term2"]["rational"] == "2");
    CHECK(j["conditional_hoeffding"]["match"] == true);
}

TEST_CASE("bound report export and csv") {
    BoundInputs in{.fourth_moment = 1.0, .rho = 1.0, .kappa = 4.0, .p = 2, .n = 2,
                   .symmetric = false};
    auto rep = make_bound_report(in, KappaSource::User, 0.34134474606854293,
                                 0.5353773215478798, std::nullopt, std::nullopt);
    auto j = bound_report_json(rep);
    CHECK(j["bounds"]["kolmogorov"]["decimal"] == decimal15(41.929141392239835));
    CHECK(j["bounds"]["wasserstein"]["decimal"] == decimal15(7.875752695576275));
    CHECK_FALSE(j["bounds"].contains("symmetric"));
    CHECK(j["verdicts"]["kolmogorov"] == "dominates");
    CHECK(j["verdicts"]["wasserstein"] == "dominates");
    CHECK(j["verdicts"]["overall"] == "dominates");
    CHECK(j["kappa_source"] == "user");
    CHECK(j["dk_dw_consistent"] == true);
    CHECK(j["distances"]["dk_exact"]["decimal"] == decimal15(0.34134474606854293));

    CHECK(bound_report_csv_header() ==
          "spec_id,p,n,E4,rho,kappa,bK,bW,dK_exact,dW_exact,dK_mc,band,verdict");
    std::string row = bound_report_csv_row("x1x2", rep);
    std::string expected = "x1x2,2,2,1,1,4," + decimal15(rep.kolmogorov) + ',' +
                           decimal15(rep.wasserstein) + ',' + decimal15(*rep.exact_dk) + ',' +
                           decimal15(*rep.exact_dw) + ",,,dominates";
    CHECK(row == expected);

    // A violated member flips the overall verdict.
    auto bad = make_bound_report(BoundInputs{.fourth_moment = 3.0, .rho = 0.0, .kappa = 1.0,
                                             .p = 1, .n = 4, .symmetric = false},
                                 KappaSource::User, 0.25, std::nullopt, std::nullopt,
                                 std::nullopt);
    CHECK(bound_report_json(bad)["verdicts"]["overall"] == "violated");
    CHECK(bound_report_csv_row("zero", bad).find(",violated") != std::string::npos);
}

TEST_CASE("simulation summary export") {
    SimulationSummary s;
    s.seed = 7;
    s.m = 1000;
    s.mean = 0.001;
    s.var = 0.998;
    s.m4 = 2.5;
    s.m4_std_error = 0.01;
    s.dk_est = 0.34;
    s.dk_band = 0.05;
    s.dw_est = 0.53;
    auto j = simulation_summary_json(s);
    CHECK(j["seed"] == 7);
    CHECK(j["m"] == 1000);
    CHECK(j["m4"]["decimal"] == "2.5");
    CHECK(simulation_summary_csv_header() == "seed,m,mean,var,m4,dk_est,dk_band,dw_est");
    CHECK(simulation_summary_csv_row(s) ==
          "7,1000,0.001,0.998,2.5,0.34,0.05,0.53");
}
