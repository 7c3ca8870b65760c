#include "divexp/serialize.hpp"

namespace divexp {

Json to_json(const GbmParams& p) { return {{"r", p.r()}, {"sigma", p.sigma()}, {"T", p.T()}}; }

Json to_json(const McConfig& cfg) {
    return {{"paths", cfg.paths},
            {"steps", cfg.steps},
            {"seed", cfg.seed},
            {"averaging", cfg.averaging == Averaging::Trapezoid ? "trapezoid" : "left"},
            {"threads", cfg.threads}};
}

Json to_json(const McEstimate& e, const McConfig& cfg) {
    return {{"value", e.value}, {"stderr", e.std_error}, {"paths", e.paths_used}, {"steps", cfg.steps},
            {"seed", cfg.seed}};
}

Json to_json(const CorrelationReport& report) {
    return {{"R", report.R},
            {"covariance", report.covariance},
            {"var_S", report.var_S},
            {"var_A", report.var_A},
            {"s_statistic", report.s_statistic}};
}

Json to_json(const PriceQuote& quote) {
    Json inputs = Json::object();
    for (const auto& [name, value] : quote.inputs) inputs[name] = value;
    return {{"value", quote.value}, {"method", to_string(quote.method)}, {"inputs", inputs}};
}

Json to_json(const GridCell& cell) { return {{"r", cell.r}, {"a", cell.a}, {"S", cell.S}}; }

}  // namespace divexp
