#pragma once

#include <json.hpp>

#include "divexp/gbm.hpp"
#include "divexp/moments.hpp"
#include "divexp/montecarlo.hpp"
#include "divexp/pricing.hpp"

namespace divexp {

using Json = nlohmann::ordered_json;

// nlohmann prints doubles in shortest round-trip form, so every number
// survives a parse/print cycle. Non-finite values become null.

Json to_json(const GbmParams& p);
Json to_json(const McConfig& cfg);
/// {"value", "stderr", "paths", "steps", "seed"}
Json to_json(const McEstimate& e, const McConfig& cfg);
Json to_json(const CorrelationReport& report);
/// {"value", "method", "inputs": {...}}
Json to_json(const PriceQuote& quote);
Json to_json(const GridCell& cell);

}  // namespace divexp
