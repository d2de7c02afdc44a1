#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "novikov/critical.hpp"
#include "novikov/embedding.hpp"
#include "novikov/ndscan.hpp"
#include "novikov/tracer2d.hpp"

namespace novikov {

/// Shortest round-trip decimal form ("%.17g" trimmed); inf and nan spelled
/// out. Used for every CSV number.
std::string format_double(double v);

nlohmann::json to_json(const ScaleRecord& r);
/// Report without the kept components.
nlohmann::json to_json(const ScaleReport& r);
nlohmann::json to_json(const Bracket& b);
nlohmann::json to_json(const CriticalIntervalEstimate& e);
nlohmann::json to_json(const SituationLabel& s);
nlohmann::json to_json(const LabeledSample& s);
nlohmann::json to_json(const Violation& v);
nlohmann::json to_json(const Theorem22Result& r);
nlohmann::json to_json(const TransferResult& r);
nlohmann::json to_json(const DiameterBoundEstimate& d);
nlohmann::json to_json(const DirectionClass& d);
nlohmann::json to_json(const LevelBandComponent& b);

/// Compact-ish deterministic dump: two-space indent, trailing newline.
std::string dump(const nlohmann::json& j);

/// Level-component dump: id, closed, kind, diameter, touches_boundary,
/// vertex_count (polyline vertices, without the closing repeat).
std::string components_csv(const std::vector<LevelComponent>& comps);

/// One row per scale.
std::string scales_csv(const std::string& config_hash, const std::vector<ScaleRecord>& scales);

/// shift_index, c, label, verdict and the six evidence bits.
std::string sweep_csv(const std::string& config_hash, const std::vector<LabeledSample>& labels);

/// One row per (shift, scale) with both onsets.
std::string onsets_csv(const std::string& config_hash, const CriticalIntervalEstimate& e);

std::string bands_csv(const std::vector<LevelBandComponent>& bands);

}  // namespace novikov
