#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "twotier/behavioral.hpp"
#include "twotier/model.hpp"
#include "twotier/welfare.hpp"

namespace twotier::io {

// Configuration files are JSON objects:
//   {"group_sizes": [21, 21, 21], "support_rates": [0.5, 0.5, 0.5],
//    "benefit": 1000, "cost_cap": 200, "label": "optional"}
// benefit and cost_cap default to 1000 and 200.
// Throws ParseError for malformed text, ValidationError (with the field
// path) for wrong or out-of-range fields.
ElectorateConfig parse_config(std::string_view text);
ElectorateConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const ElectorateConfig& config);

// Flat record CSV shared by observed turnout and cutpoint samples:
//   config_id,rule,group,candidate,value
// Groups are 1-based in the file and 0-based in memory.
struct Record {
  int config_id = 0;
  Rule rule = Rule::wta;
  int group = 0;
  Candidate candidate = Candidate::a;
  double value = 0.0;
};

inline constexpr std::string_view kRecordHeader =
    "config_id,rule,group,candidate,value";

std::vector<Record> parse_records(std::string_view text);
std::vector<Record> load_records(const std::filesystem::path& path);
std::string records_to_csv(const std::vector<Record>& records);

// One ObservedTurnout per (config_id, rule); every key needs exactly one
// group-1 value per candidate.
std::vector<ObservedTurnout> observed_turnout(const std::vector<Record>& records);

// Group-1 samples of one (config_id, rule), candidate A then B. Throws
// EmptySample when either candidate has no rows.
std::pair<CutpointSample, CutpointSample> cutpoint_samples(
    const std::vector<Record>& records, int config_id, Rule rule);

// Fixed-point decimal, independent of the global locale.
std::string format_fixed(double value, int decimals);

}  // namespace twotier::io
