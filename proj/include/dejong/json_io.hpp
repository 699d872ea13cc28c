#ifndef DEJONG_JSON_IO_HPP
#define DEJONG_JSON_IO_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "dejong/bounds.hpp"
#include "dejong/exact_engine.hpp"
#include "dejong/mc.hpp"
#include "dejong/model.hpp"
#include "dejong/pair.hpp"

namespace dejong {

// Spec documents carry their arithmetic mode; rationals are "num/den" strings
// and subsets are 1-based ascending lists on the wire, 0-based internally.
struct SpecDocument {
    std::string mode;  // "rational" | "real"
    std::string id;    // sweep row label; defaults to the file stem or "spec"
    std::variant<UStatisticSpec<Rational>, UStatisticSpec<double>> spec;

    bool is_rational() const { return spec.index() == 0; }
    const UStatisticSpec<Rational>& rational() const {
        return std::get<UStatisticSpec<Rational>>(spec);
    }
    const UStatisticSpec<double>& real() const { return std::get<UStatisticSpec<double>>(spec); }
    // Real-mode view regardless of stored mode.
    UStatisticSpec<double> as_real() const {
        return is_rational() ? to_real(rational()) : real();
    }
};

// Throws ParseError on any malformed document.
SpecDocument parse_spec_document(const nlohmann::json& j, const std::string& default_id = "spec");
SpecDocument load_spec_file(const std::string& path);

// A sweep file is either a JSON array of spec documents or {"specs": [...]}.
std::vector<SpecDocument> load_sweep_file(const std::string& path);

nlohmann::json spec_to_json(const SpecDocument& doc);

// 15 significant digits; stable across runs for identical doubles.
std::string decimal15(double v);

// Numeric wire format: {"decimal": "..."} plus {"rational": "num/den"} when
// the value is exact.
nlohmann::json scalar_json(double v);
nlohmann::json scalar_json(const Rational& v);

nlohmann::json decomposition_json(const OutcomeSpace<Rational>& space,
                                  const Decomposition<Rational>& dec, int n);
nlohmann::json decomposition_json(const OutcomeSpace<double>& space,
                                  const Decomposition<double>& dec, int n);

nlohmann::json pair_report_json(const PairReport<Rational>& rep);
nlohmann::json pair_report_json(const PairReport<double>& rep);

nlohmann::json bound_report_json(const BoundReport& rep);

// CSV row per spec: spec_id, p, n, E4, rho, kappa, bK, bW, dK_exact,
// dW_exact, dK_mc, band, verdict. Missing optionals serialize empty.
std::string bound_report_csv_header();
std::string bound_report_csv_row(const std::string& spec_id, const BoundReport& rep);

nlohmann::json simulation_summary_json(const SimulationSummary& s);
std::string simulation_summary_csv_header();
std::string simulation_summary_csv_row(const SimulationSummary& s);

}  // namespace dejong

#endif
