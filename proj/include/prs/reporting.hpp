#pragma once

// Practitioner-facing surface: file ingestion, per-snapshot monitoring
// reports, the append-only history and the simulation study runner.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "prs/divergences.hpp"
#include "prs/error.hpp"
#include "prs/resemblance.hpp"

#include "json.hpp"

namespace prs {

/// Input file problem; the message carries source, line and field.
class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

struct Snapshot {
  std::string label;
  CategoryCounts counts;
  std::optional<std::string> timestamp;
};

/// Reference file: `category,count` or `category,prob` CSV, or a bare list of
/// values ("10,10,10,10,10" is read as counts, "0.2,0.2,..." as probabilities).
ReferenceDistribution parse_reference(std::string_view text,
                                      std::string_view source = "<reference>");
ReferenceDistribution load_reference(const std::filesystem::path& path);

/// CSV with header `category,count` and categories 1..B, each exactly once.
Snapshot parse_snapshot_csv(std::string_view text, std::string label,
                            std::string_view source = "<snapshot>");
/// JSON object {"label": str, "counts": [int...], "timestamp": str?}.
Snapshot parse_snapshot_json(std::string_view text, std::string_view source = "<snapshot>");
/// Dispatches on extension (.json or CSV). CSV snapshots are labelled by file stem.
Snapshot load_snapshot(const std::filesystem::path& path);

struct MonitorSettings {
  ResemblanceConfig config;
  std::uint64_t seed = 20240101;
  std::int64_t ks_replications = 10000;
};

/// Flat `key = value` lines; keys c, M, alpha1, alpha2, delta_override, seed,
/// ks_replications. `#` starts a comment.
MonitorSettings parse_config(std::string_view text, std::string_view source = "<config>");
MonitorSettings load_config(const std::filesystem::path& path);

struct MonitoringReport {
  std::string label;
  std::optional<std::string> timestamp;
  std::vector<std::int64_t> counts;
  std::vector<double> reference;
  std::int64_t n = 0;
  std::size_t categories = 0;
  DecisionBoundaries boundaries;

  double prs = 0.0;
  Region prs_region = Region::kAcceptable;

  double psi = 0.0;
  Region psi_fixed_region = Region::kAcceptable;
  NormedPsiBoundaries normed;
  Region psi_normed_region = Region::kAcceptable;

  double ks_statistic = 0.0;
  double ks_p_value = 1.0;
  std::int64_t ks_replications = 0;
  Region ks_region = Region::kAcceptable;

  ResemblanceConfig config;
  std::uint64_t seed = 0;

  friend bool operator==(const MonitoringReport&, const MonitoringReport&) = default;
};

/// Computes every statistic, boundary and classification for one snapshot.
MonitoringReport monitor(const Snapshot& snapshot, const ReferenceDistribution& reference,
                         const MonitorSettings& settings, int threads = 0);

/// True when the stored regions follow from the stored statistics and boundaries.
bool regions_consistent(const MonitoringReport& report);

nlohmann::json to_json(const MonitoringReport& report);
MonitoringReport report_from_json(const nlohmann::json& j);

/// "<0.001" below one in a thousand, otherwise three decimals.
std::string format_p_value(double p);

std::string render_text(const MonitoringReport& report);
std::string render_json(const MonitoringReport& report);
/// Header line plus one data row.
std::string render_csv(const MonitoringReport& report);

/// FNV-1a 64 of the canonical JSON encoding, as 16 hex digits.
std::string content_hash(const MonitoringReport& report);

struct AppendResult {
  bool appended = false;    // false: an identical (label, hash) record already exists
  std::size_t records = 0;  // records in the file afterwards
  std::string hash;
};

/// Appends one JSON line under an exclusive lock. Re-submitting a report
/// with the same label and content hash is a no-op.
AppendResult append_history(const MonitoringReport& report, const std::filesystem::path& path);

/// All records in file order. Throws ParseError naming the corrupt line.
std::vector<MonitoringReport> read_history(const std::filesystem::path& path);

struct TimelineEntry {
  std::string label;
  Region prs_region;
};
std::vector<TimelineEntry> timeline(const std::filesystem::path& path);

enum class StudyId { kReconstruction, kStability, kSweep };

/// Accepts "table1", "stability", "stability_ratios" and "sweep".
StudyId parse_study_id(std::string_view name);
std::string_view study_name(StudyId id) noexcept;

struct StudyRequest {
  StudyId id = StudyId::kSweep;
  std::vector<std::int64_t> n_values;   // empty: study default grid
  std::vector<std::size_t> categories;  // empty: study default
  std::vector<double> target_j;         // reconstruction study only
  double psi_threshold = 0.25;
  ResemblanceConfig config;  // sweep only
  int grid_points = 30;
  std::int64_t replications = 100000;
  std::uint64_t seed = 20240101;
  int threads = 0;  // not part of the output
};

/// Writes metadata comment lines followed by the study's CSV rows.
void run_study(const StudyRequest& request, std::ostream& os);
void run_study(const StudyRequest& request, const std::filesystem::path& output);

}  // namespace prs
