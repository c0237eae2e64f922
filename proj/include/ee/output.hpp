#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "ee/certificate.hpp"
#include "ee/estimates.hpp"
#include "ee/threshold.hpp"

namespace ee {

nlohmann::json to_json(const ConvergenceReport& r);
nlohmann::json to_json(const DecayReport& r);
nlohmann::json to_json(const BoundsReport& r);
nlohmann::json to_json(const GrowthCertificate& c);
nlohmann::json to_json(const UniquenessProbe& p);
nlohmann::json to_json(const ThresholdMap& m);
nlohmann::json to_json(const EntropyBalance& e);
nlohmann::json to_json(const WeakResidual& w);

/// printf("%.17g").
std::string format_number(double v);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

/// node_id,x,y,value
void write_field_csv(const std::filesystem::path& path, const Field& f);

/// Filled contour plot: the P1 field is split into 10 equal value bands,
/// each drawn with a fixed color ramp.
void write_field_svg(const std::filesystem::path& path, const Field& f, const std::string& title);

}  // namespace ee
