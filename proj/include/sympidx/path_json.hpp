#pragma once

#include "sympidx/path.hpp"
#include "sympidx/recurrence.hpp"

#include "json.hpp"

#include <string>

namespace sympidx {

inline constexpr int kSchemaVersion = 1;

nlohmann::json matrix_to_json(const Mat& m);
Mat matrix_from_json(const nlohmann::json& j);

// Tagged union: {"type": "rotation" | "shear" | "generator" | "direct_sum" | "iterate" |
// "inverse" | "concatenate" | "loop_multiply" | "half_period_extend" | "product" |
// "conjugate", "duration": T, ...}.
nlohmann::json path_spec_to_json(const PathSpec& s);
PathSpec path_spec_from_json(const nlohmann::json& j);

// Document form {"schema_version": 1, "path": {...}}.
std::string dump_path_document(const PathSpec& s);
PathSpec parse_path_document(const std::string& text);

// {"schema_version": 1, "certificate": {"d", "k", "eta", "ell0", "N"}}
nlohmann::json certificate_to_json(const IRTCertificate& c);
IRTCertificate certificate_from_json(const nlohmann::json& j);
std::string dump_certificate_document(const IRTCertificate& c);
IRTCertificate parse_certificate_document(const std::string& text);

nlohmann::json ledger_to_json(const IRTLedger& l);
nlohmann::json index_report_to_json(const IndexReport& r);
nlohmann::json replay_to_json(const ReplayReport& r);

}  // namespace sympidx
