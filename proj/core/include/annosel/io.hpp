#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "annosel/campaign.hpp"
#include "annosel/solver.hpp"
#include "annosel/synthetic_world.hpp"
#include "annosel/types.hpp"
#include "annosel/value_update.hpp"

namespace annosel {

// All files are line-oriented, comma-separated text with '#'-prefixed header
// lines, so they stay diffable and plottable with anything.
//
// Pool file        one record per sample: id, features, per-type
//                  uncertainty, annotation mask (e.g. "101" in s,l,d order).
// Config file      flat "key = value" pairs.
// State file       value estimates plus cumulative counts.
// Campaign log     one row per round plus a summary line.
// Sweep table      one row per (fraction, seed, method).
//
// Pool and state files keep full double precision (shortest round-tripping
// form); result files print 6 significant digits.

// --- numbers ---------------------------------------------------------------

std::string format_double(double value);  // 6 significant digits
std::string format_exact(double value);   // shortest round-trip

// --- pool files -------------------------------------------------------------

Pool read_pool(std::istream& in, const std::string& source_name);
Pool load_pool(const std::string& path);
void write_pool(std::ostream& out, const Pool& pool);
void save_pool(const std::string& path, const Pool& pool);

// --- flat key = value configs ----------------------------------------------

using KeyValueMap = std::map<std::string, std::string>;

KeyValueMap read_key_values(std::istream& in, const std::string& source_name);

struct AppConfig {
  CampaignConfig campaign;
  WorldConfig world;
};

// Applies `kv` on top of defaults. Collects unknown keys, malformed values
// and semantic violations into one Error("config", ...) listing all of them.
AppConfig app_config_from_key_values(const KeyValueMap& kv);
AppConfig load_app_config(const std::string& path);

// --- value-state files -------------------------------------------------------

ValueState read_value_state(std::istream& in, const std::string& source_name);
ValueState load_value_state(const std::string& path);
void write_value_state(std::ostream& out, const ValueState& state);
void save_value_state(const std::string& path, const ValueState& state);

// --- campaign logs and sweep tables ------------------------------------------

void write_campaign_log(std::ostream& out, const CampaignLog& log);
std::string campaign_log_to_string(const CampaignLog& log);

struct SweepRow {
  double fraction = 0.0;
  std::uint64_t seed = 0;
  std::string method;
  double final_iou = 0.0;
  ValueTriple pct;  // percentage of granted annotations per type, sums to 100
};

void write_sweep_table(std::ostream& out, const std::vector<SweepRow>& rows);

// Per-sample granted masks with their option cost/profit, plus totals.
void write_selection(std::ostream& out, const SelectionProblem& problem,
                     const SelectionResult& result);

// --- recorded-data oracle -----------------------------------------------------

// One IoU value per line; '#' comments allowed. Values must lie in [0, 1].
std::vector<double> read_iou_schedule(std::istream& in, const std::string& source_name);
std::vector<double> load_iou_schedule(const std::string& path);

// WorldOracle over a recorded pool file and an IoU schedule: uncertainties
// come from the records, eval_iou(round) returns schedule[round].
class FileOracle final : public WorldOracle {
 public:
  FileOracle(Pool pool, std::vector<double> iou_schedule);

  const std::vector<SampleRecord>& samples() const override { return pool_.samples(); }
  double eval_iou(const Pool& pool, int round) const override;
  UncertaintyTriple eval_uncertainty(const Pool& pool, const SampleRecord& x,
                                     int round) const override;

 private:
  Pool pool_;
  std::vector<double> iou_schedule_;
};

}  // namespace annosel
