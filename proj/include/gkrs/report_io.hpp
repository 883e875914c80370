#pragma once

// JSON views of reports and family metadata.

#include <string>

#include <json.hpp>

#include "gkrs/families.hpp"
#include "gkrs/verify.hpp"

namespace gkrs {

nlohmann::json to_json(const VerificationReport& r);
nlohmann::json to_json(const ResidualReports& r);
nlohmann::json to_json(const GrowthReport& r);
nlohmann::json family_metadata(const AnalyticFamily& fam);

/// Writes `doc` to `path`, indented, with a trailing newline.
void write_json(const std::string& path, const nlohmann::json& doc);

}  // namespace gkrs
