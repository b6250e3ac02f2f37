#include "annosel/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <system_error>

#include "annosel/error.hpp"

namespace annosel {

namespace {

std::string_view trim(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t' || text.front() == '\r')) {
    text.remove_prefix(1);
  }
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  return text;
}

std::vector<std::string> split(std::string_view line, char delimiter) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delimiter, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      return out;
    }
    out.emplace_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::optional<double> parse_double(std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    return std::nullopt;
  }
  return value;
}

std::optional<std::int64_t> parse_int64(std::string_view text) {
  text = trim(text);
  std::int64_t value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    return std::nullopt;
  }
  return value;
}

std::optional<std::uint64_t> parse_uint64(std::string_view text) {
  text = trim(text);
  std::uint64_t value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    return std::nullopt;
  }
  return value;
}

[[noreturn]] void parse_fail(const std::string& source, std::size_t line,
                             const std::string& message) {
  throw Error("parse", source + ":" + std::to_string(line) + ": " + message);
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("io", "cannot open \"" + path + "\" for reading");
  }
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error("io", "cannot open \"" + path + "\" for writing");
  }
  return out;
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6g", value);
  return buffer;
}

std::string format_exact(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc{}) {
    return format_double(value);  // unreachable for finite doubles
  }
  return std::string(buffer, ptr);
}

// --- pool files ---------------------------------------------------------------

Pool read_pool(std::istream& in, const std::string& source_name) {
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line) || trim(line) != "#annosel-pool v1") {
    parse_fail(source_name, 1, "expected \"#annosel-pool v1\" header");
  }
  line_no = 1;

  std::optional<std::size_t> feature_dim;
  bool type_order_seen = false;
  bool columns_seen = false;
  std::vector<SampleRecord> samples;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (text.empty()) {
      continue;
    }
    if (text.front() == '#') {
      const std::string_view meta = text.substr(1);
      const std::size_t eq = meta.find('=');
      if (eq == std::string_view::npos) {
        continue;  // free-form comment
      }
      const std::string_view key = trim(meta.substr(0, eq));
      const std::string_view value = trim(meta.substr(eq + 1));
      if (key == "feature_dim") {
        const auto parsed = parse_int64(value);
        if (!parsed || *parsed < 1) {
          parse_fail(source_name, line_no, "feature_dim must be a positive integer");
        }
        feature_dim = static_cast<std::size_t>(*parsed);
      } else if (key == "type_order") {
        if (value != "s,l,d") {
          parse_fail(source_name, line_no, "type_order must be s,l,d");
        }
        type_order_seen = true;
      }
      continue;
    }

    if (!columns_seen) {
      if (!feature_dim) {
        parse_fail(source_name, line_no, "missing #feature_dim=... before the column header");
      }
      if (!type_order_seen) {
        parse_fail(source_name, line_no, "missing #type_order=s,l,d before the column header");
      }
      std::string expected = "id";
      for (std::size_t i = 0; i < *feature_dim; ++i) {
        expected += ",f" + std::to_string(i);
      }
      expected += ",u_s,u_l,u_d,annotated";
      if (text != expected) {
        parse_fail(source_name, line_no, "column header must be \"" + expected + "\"");
      }
      columns_seen = true;
      continue;
    }

    const std::vector<std::string> fields = split(text, ',');
    const std::size_t expected_fields = *feature_dim + 5;
    if (fields.size() != expected_fields) {
      parse_fail(source_name, line_no,
                 "expected " + std::to_string(expected_fields) + " fields, got " +
                     std::to_string(fields.size()));
    }

    SampleRecord sample;
    sample.id = std::string(trim(fields[0]));
    sample.features.reserve(*feature_dim);
    for (std::size_t i = 0; i < *feature_dim; ++i) {
      const auto value = parse_double(fields[1 + i]);
      if (!value) {
        parse_fail(source_name, line_no, "feature f" + std::to_string(i) + " is not a number");
      }
      sample.features.push_back(*value);
    }
    for (std::size_t i = 0; i < kNumAnnotationTypes; ++i) {
      const auto value = parse_double(fields[1 + *feature_dim + i]);
      if (!value) {
        parse_fail(source_name, line_no,
                   std::string("uncertainty u_") + type_code(kAnnotationTypes[i]) +
                       " is not a number");
      }
      sample.uncertainty[kAnnotationTypes[i]] = *value;
    }
    try {
      sample.annotated = SelectionMask::parse(trim(fields[*feature_dim + 4]));
    } catch (const std::invalid_argument& e) {
      parse_fail(source_name, line_no, e.what());
    }
    samples.push_back(std::move(sample));
  }

  if (!columns_seen) {
    parse_fail(source_name, line_no, "pool file has no column header");
  }
  try {
    return Pool(std::move(samples));
  } catch (const std::invalid_argument& e) {
    throw Error("parse", source_name + ": " + e.what());
  }
}

Pool load_pool(const std::string& path) {
  std::ifstream in = open_input(path);
  return read_pool(in, path);
}

void write_pool(std::ostream& out, const Pool& pool) {
  out << "#annosel-pool v1\n";
  out << "#feature_dim=" << (pool.empty() ? 1 : pool.feature_dim()) << "\n";
  out << "#type_order=s,l,d\n";
  const std::size_t dim = pool.empty() ? 1 : pool.feature_dim();
  out << "id";
  for (std::size_t i = 0; i < dim; ++i) {
    out << ",f" << i;
  }
  out << ",u_s,u_l,u_d,annotated\n";
  for (const SampleRecord& sample : pool.samples()) {
    if (sample.id.find(',') != std::string::npos || sample.id.find('#') == 0) {
      throw Error("io", "sample id \"" + sample.id + "\" cannot be serialized");
    }
    out << sample.id;
    for (double f : sample.features) {
      out << ',' << format_exact(f);
    }
    for (AnnotationType type : kAnnotationTypes) {
      out << ',' << format_exact(sample.uncertainty[type]);
    }
    out << ',' << sample.annotated.to_string() << '\n';
  }
}

void save_pool(const std::string& path, const Pool& pool) {
  std::ofstream out = open_output(path);
  write_pool(out, pool);
}

// --- flat key = value configs ---------------------------------------------------

KeyValueMap read_key_values(std::istream& in, const std::string& source_name) {
  KeyValueMap kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (text.empty() || text.front() == '#') {
      continue;
    }
    const std::size_t eq = text.find('=');
    if (eq == std::string_view::npos) {
      parse_fail(source_name, line_no, "expected key = value");
    }
    const std::string key(trim(text.substr(0, eq)));
    const std::string value(trim(text.substr(eq + 1)));
    if (key.empty()) {
      parse_fail(source_name, line_no, "empty key");
    }
    if (!kv.emplace(key, value).second) {
      parse_fail(source_name, line_no, "duplicate key \"" + key + "\"");
    }
  }
  return kv;
}

AppConfig app_config_from_key_values(const KeyValueMap& kv) {
  AppConfig config;
  std::string violations;
  auto flag = [&violations](const std::string& message) {
    if (!violations.empty()) {
      violations += "; ";
    }
    violations += message;
  };

  auto as_double = [&flag](const std::string& key, const std::string& text, double& target) {
    if (const auto value = parse_double(text)) {
      target = *value;
    } else {
      flag(key + ": not a number");
    }
  };
  auto as_int = [&flag](const std::string& key, const std::string& text, int& target) {
    if (const auto value = parse_int64(text)) {
      target = static_cast<int>(*value);
    } else {
      flag(key + ": not an integer");
    }
  };
  auto as_int64 = [&flag](const std::string& key, const std::string& text, std::int64_t& target) {
    if (const auto value = parse_int64(text)) {
      target = *value;
    } else {
      flag(key + ": not an integer");
    }
  };
  auto as_uint64 = [&flag](const std::string& key, const std::string& text,
                           std::uint64_t& target) {
    if (const auto value = parse_uint64(text)) {
      target = *value;
    } else {
      flag(key + ": not a non-negative integer");
    }
  };

  for (const auto& [key, value] : kv) {
    if (key == "costs.s") {
      as_int64(key, value, config.campaign.costs[AnnotationType::kSegmentation]);
    } else if (key == "costs.l") {
      as_int64(key, value, config.campaign.costs[AnnotationType::kLandmarks]);
    } else if (key == "costs.d") {
      as_int64(key, value, config.campaign.costs[AnnotationType::kDetection]);
    } else if (key == "values.s") {
      as_double(key, value, config.campaign.initial_values[AnnotationType::kSegmentation]);
    } else if (key == "values.l") {
      as_double(key, value, config.campaign.initial_values[AnnotationType::kLandmarks]);
    } else if (key == "values.d") {
      as_double(key, value, config.campaign.initial_values[AnnotationType::kDetection]);
    } else if (key == "lambda_u") {
      as_double(key, value, config.campaign.lambda_u);
    } else if (key == "lambda_s") {
      as_double(key, value, config.campaign.lambda_s);
    } else if (key == "kernel_bandwidth") {
      as_double(key, value, config.campaign.kernel_bandwidth);
    } else if (key == "K") {
      as_int(key, value, config.campaign.rounds);
    } else if (key == "initial_fraction") {
      as_double(key, value, config.campaign.initial_fraction);
    } else if (key == "budget") {
      std::int64_t budget = 0;
      as_int64(key, value, budget);
      config.campaign.total_budget = budget;
    } else if (key == "budget_fraction") {
      double fraction = 0.0;
      as_double(key, value, fraction);
      config.campaign.budget_fraction = fraction;
    } else if (key == "solver") {
      try {
        config.campaign.solver = solver_from_name(value);
      } catch (const std::invalid_argument& e) {
        flag(key + ": " + e.what());
      }
    } else if (key == "seed") {
      as_uint64(key, value, config.campaign.seed);
    } else if (key == "world.n") {
      as_int(key, value, config.world.n_samples);
    } else if (key == "world.dim") {
      as_int(key, value, config.world.feature_dim);
    } else if (key == "world.clusters") {
      as_int(key, value, config.world.n_clusters);
    } else if (key == "world.spread") {
      as_double(key, value, config.world.cluster_spread);
    } else if (key == "world.weights.s") {
      as_double(key, value, config.world.type_weights[AnnotationType::kSegmentation]);
    } else if (key == "world.weights.l") {
      as_double(key, value, config.world.type_weights[AnnotationType::kLandmarks]);
    } else if (key == "world.weights.d") {
      as_double(key, value, config.world.type_weights[AnnotationType::kDetection]);
    } else if (key == "world.iou0") {
      as_double(key, value, config.world.iou_floor);
    } else if (key == "world.ioumax") {
      as_double(key, value, config.world.iou_ceiling);
    } else if (key == "world.tau") {
      as_double(key, value, config.world.saturation_scale);
    } else if (key == "world.noise") {
      as_double(key, value, config.world.uncertainty_noise);
    } else if (key == "world.seed") {
      as_uint64(key, value, config.world.seed);
    } else {
      flag("unknown key \"" + key + "\"");
    }
  }

  const std::string campaign_violations = campaign_config_violations(config.campaign);
  if (!campaign_violations.empty()) {
    flag(campaign_violations);
  }
  const std::string world_violations = world_config_violations(config.world);
  if (!world_violations.empty()) {
    flag(world_violations);
  }
  if (!violations.empty()) {
    throw Error("config", "invalid config: " + violations);
  }
  return config;
}

AppConfig load_app_config(const std::string& path) {
  std::ifstream in = open_input(path);
  return app_config_from_key_values(read_key_values(in, path));
}

// --- value-state files -----------------------------------------------------------

ValueState read_value_state(std::istream& in, const std::string& source_name) {
  const KeyValueMap kv = read_key_values(in, source_name);
  ValueState state;
  std::string violations;
  auto flag = [&violations](const std::string& message) {
    if (!violations.empty()) {
      violations += "; ";
    }
    violations += message;
  };
  for (AnnotationType type : kAnnotationTypes) {
    const std::string value_key = std::string("values.") + type_code(type);
    const std::string count_key = std::string("counts.") + type_code(type);
    const auto value_it = kv.find(value_key);
    if (value_it == kv.end()) {
      flag(value_key + ": missing");
    } else if (const auto value = parse_double(value_it->second);
               value && std::isfinite(*value) && *value >= 0.0) {
      state.values[type] = *value;
    } else {
      flag(value_key + ": must be a finite non-negative number");
    }
    const auto count_it = kv.find(count_key);
    if (count_it == kv.end()) {
      flag(count_key + ": missing");
    } else if (const auto count = parse_int64(count_it->second); count && *count >= 0) {
      state.cumulative_counts[type] = *count;
    } else {
      flag(count_key + ": must be a non-negative integer");
    }
  }
  for (const auto& [key, value] : kv) {
    if (key.rfind("values.", 0) != 0 && key.rfind("counts.", 0) != 0) {
      flag("unknown key \"" + key + "\"");
    }
  }
  if (!violations.empty()) {
    throw Error("config", source_name + ": invalid value state: " + violations);
  }
  return state;
}

ValueState load_value_state(const std::string& path) {
  std::ifstream in = open_input(path);
  return read_value_state(in, path);
}

void write_value_state(std::ostream& out, const ValueState& state) {
  out << "#annosel-state v1\n";
  for (AnnotationType type : kAnnotationTypes) {
    out << "values." << type_code(type) << " = " << format_exact(state.values[type]) << "\n";
  }
  for (AnnotationType type : kAnnotationTypes) {
    out << "counts." << type_code(type) << " = " << state.cumulative_counts[type] << "\n";
  }
}

void save_value_state(const std::string& path, const ValueState& state) {
  std::ofstream out = open_output(path);
  write_value_state(out, state);
}

// --- campaign logs and sweep tables ------------------------------------------------

void write_campaign_log(std::ostream& out, const CampaignLog& log) {
  const CampaignConfig& config = log.config;
  out << "#annosel-campaign v1\n";
  if (config.total_budget) {
    out << "#config budget=" << *config.total_budget << "\n";
  }
  if (config.budget_fraction) {
    out << "#config budget_fraction=" << format_double(*config.budget_fraction) << "\n";
  }
  out << "#config K=" << config.rounds << "\n";
  out << "#config initial_fraction=" << format_double(config.initial_fraction) << "\n";
  for (AnnotationType type : kAnnotationTypes) {
    out << "#config costs." << type_code(type) << "=" << config.costs[type] << "\n";
  }
  for (AnnotationType type : kAnnotationTypes) {
    out << "#config values." << type_code(type) << "="
        << format_double(config.initial_values[type]) << "\n";
  }
  out << "#config lambda_u=" << format_double(config.lambda_u) << "\n";
  out << "#config lambda_s=" << format_double(config.lambda_s) << "\n";
  out << "#config kernel_bandwidth=" << format_double(config.kernel_bandwidth) << "\n";
  out << "#config solver=" << solver_name(config.solver) << "\n";
  out << "#config seed=" << config.seed << "\n";
  out << "#max_budget=" << log.max_budget << "\n";
  out << "#total_budget=" << log.total_budget << "\n";
  out << "#initial_iou=" << format_double(log.initial_iou) << "\n";
  out << "round,allocated,spent,granted_s,granted_l,granted_d,iou,delta_iou,"
         "V_s,V_l,V_d,objective\n";
  for (const RoundRecord& record : log.rounds) {
    out << record.round << ',' << record.allocated << ',' << record.spent;
    for (AnnotationType type : kAnnotationTypes) {
      out << ',' << record.granted[type];
    }
    out << ',' << format_double(record.iou_after) << ',' << format_double(record.delta_iou);
    for (AnnotationType type : kAnnotationTypes) {
      out << ',' << format_double(record.values_after[type]);
    }
    out << ',' << format_double(record.objective) << '\n';
  }
  out << "#summary total_spent=" << log.total_spent()
      << " final_iou=" << format_double(log.final_iou());
  for (AnnotationType type : kAnnotationTypes) {
    out << " share_" << type_code(type) << "="
        << format_double(log.annotation_distribution[type]);
  }
  out << "\n";
}

std::string campaign_log_to_string(const CampaignLog& log) {
  std::ostringstream out;
  write_campaign_log(out, log);
  return out.str();
}

void write_sweep_table(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "#annosel-sweep v1\n";
  out << "fraction,seed,method,final_iou,pct_s,pct_l,pct_d\n";
  for (const SweepRow& row : rows) {
    out << format_double(row.fraction) << ',' << row.seed << ',' << row.method << ','
        << format_double(row.final_iou);
    for (AnnotationType type : kAnnotationTypes) {
      out << ',' << format_double(row.pct[type]);
    }
    out << '\n';
  }
}

void write_selection(std::ostream& out, const SelectionProblem& problem,
                     const SelectionResult& result) {
  out << "#annosel-selection v1\n";
  out << "#budget=" << problem.budget << "\n";
  out << "id,granted,cost,profit\n";
  for (std::size_t g = 0; g < result.assignment.size(); ++g) {
    const auto& [id, mask] = result.assignment[g];
    const SelectionGroup& group = problem.groups[g];
    const SelectionOption* chosen = nullptr;
    for (const SelectionOption& option : group.options) {
      if (option.mask == mask) {
        chosen = &option;
        break;
      }
    }
    if (chosen == nullptr) {
      throw std::invalid_argument("assignment mask missing from group \"" + id + "\"");
    }
    out << id << ',' << mask.to_string() << ',' << chosen->cost << ','
        << format_double(chosen->profit) << '\n';
  }
  out << "TOTAL,," << result.total_cost << ',' << format_double(result.total_profit) << '\n';
}

// --- recorded-data oracle -------------------------------------------------------------

std::vector<double> read_iou_schedule(std::istream& in, const std::string& source_name) {
  std::vector<double> schedule;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (text.empty() || text.front() == '#') {
      continue;
    }
    const auto value = parse_double(text);
    if (!value || !(*value >= 0.0 && *value <= 1.0)) {
      parse_fail(source_name, line_no, "IoU values must be numbers in [0, 1]");
    }
    schedule.push_back(*value);
  }
  return schedule;
}

std::vector<double> load_iou_schedule(const std::string& path) {
  std::ifstream in = open_input(path);
  return read_iou_schedule(in, path);
}

FileOracle::FileOracle(Pool pool, std::vector<double> iou_schedule)
    : pool_(std::move(pool)), iou_schedule_(std::move(iou_schedule)) {
  if (iou_schedule_.empty()) {
    throw Error("config", "IoU schedule must contain at least one value");
  }
}

double FileOracle::eval_iou(const Pool& /*pool*/, int round) const {
  if (round < 0 || static_cast<std::size_t>(round) >= iou_schedule_.size()) {
    throw Error("oracle", "IoU schedule has " + std::to_string(iou_schedule_.size()) +
                              " entries but round " + std::to_string(round) +
                              " was queried (need K+1 entries)");
  }
  return iou_schedule_[static_cast<std::size_t>(round)];
}

UncertaintyTriple FileOracle::eval_uncertainty(const Pool& /*pool*/, const SampleRecord& x,
                                               int /*round*/) const {
  if (!pool_.contains(x.id)) {
    throw Error("oracle", "sample \"" + x.id + "\" is not part of the recorded pool");
  }
  return x.uncertainty;
}

}  // namespace annosel
