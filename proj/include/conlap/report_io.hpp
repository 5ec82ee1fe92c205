#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "conlap/harness.hpp"

namespace conlap {

/// Column header of the eigenvalue-comparison CSV (no trailing newline).
std::string csv_header();

/// Header plus one line per row; doubles with %.17g, booleans as 0/1.
void write_rows_csv(std::ostream& os, const std::vector<LevelRow>& rows);

nlohmann::json manifold_to_json(const ManifoldModel& m);
nlohmann::json bundle_to_json(const BundleModel& b);

/// Full experiment report: config echo, one block per scale level (rows,
/// operator scale, essential-gap bound, failure message if the level was
/// skipped) and the cross-level decay summary.
nlohmann::json report_to_json(const ExperimentConfig& cfg,
                              const ConvergenceReport& report);

nlohmann::json lemma_report_to_json(const LemmaReport& report);

/// Validates `doc` against the JSON-schema subset used by the shipped
/// schemas: type, properties, required, items, enum, minimum.  Returns true
/// on success; otherwise fills `*error` (if non-null) with the failing path.
bool validate_json_subset(const nlohmann::json& schema,
                          const nlohmann::json& doc, std::string* error);

}  // namespace conlap
