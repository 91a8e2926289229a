#include "twotier/io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include <fmt/format.h>
#include <json.hpp>

#include "twotier/error.hpp"

namespace twotier::io {

namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

double number_field(const json& value, const std::string& field) {
  if (!value.is_number()) throw ValidationError(field, "expected a number");
  return value.get<double>();
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

template <typename T>
T parse_number(std::string_view text, const std::string& where) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw ParseError(where + ": cannot parse number '" + std::string(text) +
                     "'");
  }
  return value;
}

}  // namespace

ElectorateConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("config: expected a JSON object");

  ElectorateConfig config;
  for (const char* key : {"group_sizes", "support_rates"}) {
    if (!doc.contains(key)) throw ValidationError(key, "missing field");
    const json& arr = doc.at(key);
    if (!arr.is_array() || arr.size() != kNumGroups) {
      throw ValidationError(key, "expected an array of three numbers");
    }
  }
  for (std::size_t g = 0; g < kNumGroups; ++g) {
    const std::string size_field = "group_sizes[" + std::to_string(g) + "]";
    const json& size = doc["group_sizes"][g];
    if (!size.is_number_integer()) {
      throw ValidationError(size_field, "expected an integer");
    }
    config.group_sizes[g] = size.get<int>();
    config.support_rates[g] = number_field(
        doc["support_rates"][g], "support_rates[" + std::to_string(g) + "]");
  }
  if (doc.contains("benefit")) {
    config.benefit = number_field(doc["benefit"], "benefit");
  }
  if (doc.contains("cost_cap")) {
    config.cost_cap = number_field(doc["cost_cap"], "cost_cap");
  }
  if (doc.contains("label")) {
    if (!doc["label"].is_string()) {
      throw ValidationError("label", "expected a string");
    }
    config.label = doc["label"].get<std::string>();
  }
  config.validate();
  return config;
}

ElectorateConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_file(path));
}

std::string config_to_json(const ElectorateConfig& config) {
  json doc;
  doc["group_sizes"] = config.group_sizes;
  doc["support_rates"] = config.support_rates;
  doc["benefit"] = config.benefit;
  doc["cost_cap"] = config.cost_cap;
  if (!config.label.empty()) doc["label"] = config.label;
  return doc.dump(2) + "\n";
}

std::vector<Record> parse_records(std::string_view text) {
  std::vector<Record> records;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view line = trim(text.substr(pos, nl - pos));
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line);
    const std::string where = "line " + std::to_string(line_no);
    if (!header_seen) {
      std::string joined;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) joined += ',';
        joined += fields[i];
      }
      if (joined != kRecordHeader) {
        throw ParseError(where + ": expected header '" +
                         std::string(kRecordHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 5) {
      throw ParseError(where + ": expected 5 fields, found " +
                       std::to_string(fields.size()));
    }
    Record r;
    r.config_id = parse_number<int>(fields[0], where);
    try {
      r.rule = parse_rule(fields[1]);
      r.candidate = parse_candidate(fields[3]);
    } catch (const ParseError& e) {
      throw ParseError(where + ": " + e.what());
    }
    const int group = parse_number<int>(fields[2], where);
    if (group < 1 || group > kNumGroups) {
      throw ValidationError(where + ".group", "group must be 1, 2 or 3");
    }
    r.group = group - 1;
    r.value = parse_number<double>(fields[4], where);
    records.push_back(r);
  }
  if (!header_seen) throw ParseError("records: empty input");
  return records;
}

std::vector<Record> load_records(const std::filesystem::path& path) {
  return parse_records(read_file(path));
}

std::string records_to_csv(const std::vector<Record>& records) {
  std::string out(kRecordHeader);
  out += '\n';
  for (const Record& r : records) {
    out += fmt::format("{},{},{},{},{}\n", r.config_id, to_string(r.rule),
                       r.group + 1, to_string(r.candidate),
                       format_fixed(r.value, 6));
  }
  return out;
}

std::vector<ObservedTurnout> observed_turnout(
    const std::vector<Record>& records) {
  struct Pair {
    std::optional<double> a;
    std::optional<double> b;
  };
  std::map<std::pair<int, Rule>, Pair> by_key;
  for (const Record& r : records) {
    const std::string where = fmt::format("record config {} {} {}", r.config_id,
                                          to_string(r.rule), to_string(r.candidate));
    if (r.group != 0) {
      throw ValidationError(where, "observed turnout is defined for group 1");
    }
    if (!(r.value >= 0.0 && r.value <= 1.0)) {
      throw ValidationError(where, "turnout must lie in [0, 1]");
    }
    Pair& pair = by_key[{r.config_id, r.rule}];
    std::optional<double>& slot = r.candidate == Candidate::a ? pair.a : pair.b;
    if (slot) throw ValidationError(where, "duplicate value");
    slot = r.value;
  }
  std::vector<ObservedTurnout> out;
  for (const auto& [key, pair] : by_key) {
    if (!pair.a || !pair.b) {
      throw MissingKey(fmt::format("config {} {} needs values for A and B",
                                   key.first, to_string(key.second)));
    }
    out.push_back({key.first, key.second, *pair.a, *pair.b});
  }
  return out;
}

std::pair<CutpointSample, CutpointSample> cutpoint_samples(
    const std::vector<Record>& records, int config_id, Rule rule) {
  CutpointSample a{0, Candidate::a, {}};
  CutpointSample b{0, Candidate::b, {}};
  for (const Record& r : records) {
    if (r.config_id != config_id || r.rule != rule || r.group != 0) continue;
    (r.candidate == Candidate::a ? a : b).values.push_back(r.value);
  }
  for (const CutpointSample* s : {&a, &b}) {
    if (s->values.empty()) {
      throw EmptySample(fmt::format("no group-1 {} cutpoints for config {} {}",
                                    to_string(s->candidate), config_id,
                                    to_string(rule)));
    }
  }
  return {std::move(a), std::move(b)};
}

std::string format_fixed(double value, int decimals) {
  // fmt formatting ignores the global locale unless asked for it.
  return fmt::format("{:.{}f}", value, decimals);
}

}  // namespace twotier::io
