#include "prs/reporting.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "prs/simulation.hpp"

namespace prs {
namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

struct Line {
  std::size_t number;
  std::string_view text;
};

// Non-empty lines with '#' comments stripped.
std::vector<Line> content_lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    auto line = text.substr(start, end - start);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty()) out.push_back({number, line});
    start = end + 1;
  }
  return out;
}

[[noreturn]] void parse_fail(std::string_view source, std::size_t line, std::string_view field,
                             const std::string& what) {
  std::string msg(source);
  msg += ":" + std::to_string(line) + ": ";
  if (!field.empty()) msg += "field '" + std::string(field) + "': ";
  msg += what;
  throw ParseError(msg);
}

std::optional<std::int64_t> to_int(std::string_view s) {
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end) return std::nullopt;
  return v;
}

std::optional<double> to_double(std::string_view s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Rows of a `category,<column>` CSV, placed by category index 1..B.
template <class T, class Convert>
std::vector<T> read_category_table(const std::vector<Line>& lines, std::string_view source,
                                   std::string_view column, Convert convert) {
  std::map<std::int64_t, T> by_category;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split(lines[i].text, ',');
    if (fields.size() != 2) {
      parse_fail(source, lines[i].number, "",
                 "expected 2 fields, found " + std::to_string(fields.size()));
    }
    const auto category = to_int(fields[0]);
    if (!category || *category < 1) {
      parse_fail(source, lines[i].number, "category",
                 "expected a positive integer, got '" + std::string(fields[0]) + "'");
    }
    const std::optional<T> value = convert(fields[1]);
    if (!value) {
      parse_fail(source, lines[i].number, column, "invalid value '" + std::string(fields[1]) + "'");
    }
    if (!by_category.emplace(*category, *value).second) {
      parse_fail(source, lines[i].number, "category",
                 "duplicate category " + std::to_string(*category));
    }
  }
  std::vector<T> out;
  std::int64_t expected = 1;
  for (const auto& [category, value] : by_category) {
    if (category != expected) {
      throw ParseError(std::string(source) + ": missing category " + std::to_string(expected));
    }
    out.push_back(value);
    ++expected;
  }
  return out;
}

std::optional<std::int64_t> to_count(std::string_view s) {
  auto v = to_int(s);
  if (v && *v < 0) return std::nullopt;
  return v;
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string general(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string join(const std::vector<std::int64_t>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(xs[i]);
  }
  return out;
}

std::string join(const std::vector<std::size_t>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(xs[i]);
  }
  return out;
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ' ';
    out += general(xs[i]);
  }
  return out;
}

class FileLock {
 public:
  explicit FileLock(const std::filesystem::path& path)
      : fd_(::open(path.c_str(), O_RDWR | O_CREAT | O_APPEND, 0644)) {
    if (fd_ < 0) {
      throw ValidationError("cannot open history '" + path.string() + "': " + std::strerror(errno));
    }
    if (::flock(fd_, LOCK_EX) != 0) {
      ::close(fd_);
      throw ValidationError("cannot lock history '" + path.string() + "'");
    }
  }
  ~FileLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

  std::string read_all() const {
    std::string out;
    char buf[8192];
    ::lseek(fd_, 0, SEEK_SET);
    for (;;) {
      const auto got = ::read(fd_, buf, sizeof buf);
      if (got < 0) throw ValidationError("history read failed");
      if (got == 0) break;
      out.append(buf, static_cast<std::size_t>(got));
    }
    return out;
  }

  void append(const std::string& line) const {
    std::size_t written = 0;
    while (written < line.size()) {
      const auto put = ::write(fd_, line.data() + written, line.size() - written);
      if (put < 0) throw ValidationError("history write failed");
      written += static_cast<std::size_t>(put);
    }
  }

 private:
  int fd_;
};

struct HistoryRecord {
  MonitoringReport report;
  std::string hash;
};

std::vector<HistoryRecord> parse_history(std::string_view text, std::string_view source) {
  std::vector<HistoryRecord> out;
  std::size_t number = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    const auto line = trim(text.substr(start, end - start));
    start = end + 1;
    if (line.empty()) continue;
    try {
      const auto j = json::parse(line);
      HistoryRecord rec{report_from_json(j), j.at("content_hash").get<std::string>()};
      out.push_back(std::move(rec));
    } catch (const std::exception& e) {
      parse_fail(source, number, "", std::string("corrupt history record: ") + e.what());
    }
  }
  return out;
}

}  // namespace

ReferenceDistribution parse_reference(std::string_view text, std::string_view source) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw ParseError(std::string(source) + ": empty reference file");

  const auto header = split(lines.front().text, ',');
  if (!header.empty() && lower(header[0]) == "category") {
    if (header.size() != 2) parse_fail(source, lines.front().number, "", "expected 2 columns");
    const auto column = lower(header[1]);
    if (column == "count") {
      const auto counts = read_category_table<std::int64_t>(lines, source, "count", to_count);
      return ReferenceDistribution::from_counts(counts);
    }
    if (column == "prob" || column == "probability") {
      const auto probs = read_category_table<double>(lines, source, "prob", to_double);
      return ReferenceDistribution{probs};
    }
    parse_fail(source, lines.front().number, "header",
               "second column must be 'count' or 'prob', got '" + std::string(header[1]) + "'");
  }

  // Bare list of values.
  std::vector<std::string_view> tokens;
  std::vector<std::size_t> token_lines;
  for (const auto& line : lines) {
    for (auto tok : split(line.text, ',')) {
      if (tok.empty()) parse_fail(source, line.number, "", "empty value");
      tokens.push_back(tok);
      token_lines.push_back(line.number);
    }
  }
  const bool all_integers =
      std::all_of(tokens.begin(), tokens.end(), [](auto t) { return to_int(t).has_value(); });
  if (all_integers) {
    std::vector<std::int64_t> counts;
    for (auto t : tokens) counts.push_back(*to_int(t));
    return ReferenceDistribution::from_counts(counts);
  }
  std::vector<double> probs;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto v = to_double(tokens[i]);
    if (!v) {
      parse_fail(source, token_lines[i], "prob", "invalid number '" + std::string(tokens[i]) + "'");
    }
    probs.push_back(*v);
  }
  return ReferenceDistribution{probs};
}

ReferenceDistribution load_reference(const std::filesystem::path& path) {
  return parse_reference(read_file(path), path.string());
}

Snapshot parse_snapshot_csv(std::string_view text, std::string label, std::string_view source) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw ParseError(std::string(source) + ": empty snapshot file");
  const auto header = split(lines.front().text, ',');
  if (header.size() != 2 || lower(header[0]) != "category" || lower(header[1]) != "count") {
    parse_fail(source, lines.front().number, "header", "expected 'category,count'");
  }
  if (label.empty()) throw ParseError(std::string(source) + ": snapshot label is empty");
  auto counts = read_category_table<std::int64_t>(lines, source, "count", to_count);
  return Snapshot{std::move(label), CategoryCounts{std::move(counts)}, std::nullopt};
}

Snapshot parse_snapshot_json(std::string_view text, std::string_view source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(source) + ": invalid JSON: " + e.what());
  }
  auto fail = [&](std::string_view field, const std::string& what) -> void {
    throw ParseError(std::string(source) + ": field '" + std::string(field) + "': " + what);
  };
  if (!j.is_object()) fail("<root>", "expected an object");
  if (!j.contains("label") || !j["label"].is_string() || j["label"].get<std::string>().empty()) {
    fail("label", "expected a non-empty string");
  }
  if (!j.contains("counts") || !j["counts"].is_array()) fail("counts", "expected an array");
  std::vector<std::int64_t> counts;
  for (std::size_t i = 0; i < j["counts"].size(); ++i) {
    const auto& v = j["counts"][i];
    if (!v.is_number_integer())
      fail("counts", "entry " + std::to_string(i + 1) + " is not an integer");
    const auto c = v.get<std::int64_t>();
    if (c < 0) fail("counts", "entry " + std::to_string(i + 1) + " is negative");
    counts.push_back(c);
  }
  std::optional<std::string> timestamp;
  if (j.contains("timestamp") && !j["timestamp"].is_null()) {
    if (!j["timestamp"].is_string()) fail("timestamp", "expected a string");
    timestamp = j["timestamp"].get<std::string>();
  }
  return Snapshot{j["label"].get<std::string>(), CategoryCounts{std::move(counts)},
                  std::move(timestamp)};
}

Snapshot load_snapshot(const std::filesystem::path& path) {
  const auto text = read_file(path);
  if (lower(path.extension().string()) == ".json") return parse_snapshot_json(text, path.string());
  return parse_snapshot_csv(text, path.stem().string(), path.string());
}

MonitorSettings parse_config(std::string_view text, std::string_view source) {
  MonitorSettings s;
  for (const auto& line : content_lines(text)) {
    const auto sep = line.text.find_first_of("=:");
    if (sep == std::string_view::npos) parse_fail(source, line.number, "", "expected key = value");
    const auto key = std::string(trim(line.text.substr(0, sep)));
    const auto value = trim(line.text.substr(sep + 1));
    auto real = [&]() {
      const auto v = to_double(value);
      if (!v) parse_fail(source, line.number, key, "invalid number '" + std::string(value) + "'");
      return *v;
    };
    auto integer = [&]() {
      const auto v = to_int(value);
      if (!v || *v < 0) {
        parse_fail(source, line.number, key, "invalid integer '" + std::string(value) + "'");
      }
      return *v;
    };
    if (key == "c") {
      s.config.c = real();
    } else if (key == "M") {
      s.config.M = real();
    } else if (key == "alpha1") {
      s.config.alpha1 = real();
    } else if (key == "alpha2") {
      s.config.alpha2 = real();
    } else if (key == "delta_override" || key == "delta") {
      s.config.delta_override = real();
    } else if (key == "seed") {
      s.seed = static_cast<std::uint64_t>(integer());
    } else if (key == "ks_replications") {
      s.ks_replications = integer();
    } else {
      parse_fail(source, line.number, key, "unknown key");
    }
  }
  return s;
}

MonitorSettings load_config(const std::filesystem::path& path) {
  return parse_config(read_file(path), path.string());
}

MonitoringReport monitor(const Snapshot& snapshot, const ReferenceDistribution& reference,
                         const MonitorSettings& settings, int threads) {
  if (snapshot.counts.size() != reference.size()) {
    throw DimensionMismatch(
        "snapshot '" + snapshot.label + "' has " + std::to_string(snapshot.counts.size()) +
        " categories but the reference has " + std::to_string(reference.size()));
  }
  MonitoringReport r;
  r.label = snapshot.label;
  r.timestamp = snapshot.timestamp;
  r.counts.assign(snapshot.counts.counts().begin(), snapshot.counts.counts().end());
  r.reference.assign(reference.probs().begin(), reference.probs().end());
  r.n = snapshot.counts.total();
  r.categories = reference.size();
  r.config = settings.config;
  r.seed = settings.seed;

  r.boundaries = decision_boundaries(reference, r.n, settings.config);
  const auto phat = proportions(snapshot.counts);
  r.prs = prs(phat, reference);
  r.prs_region = classify_prs(r.prs, r.boundaries);

  r.psi = psi(phat, reference);
  r.psi_fixed_region = classify_psi_fixed(r.psi);
  r.normed = normed_psi_boundaries(r.n, r.categories);
  r.psi_normed_region = r.normed.classify(r.psi);

  r.ks_statistic = ks_statistic(phat, reference);
  r.ks_replications = settings.ks_replications;
  r.ks_p_value =
      ks_p_value(snapshot.counts, reference, settings.ks_replications, settings.seed, threads);
  r.ks_region = classify_ks(r.ks_p_value);
  return r;
}

bool regions_consistent(const MonitoringReport& r) {
  return classify_prs(r.prs, r.boundaries) == r.prs_region &&
         classify_psi_fixed(r.psi) == r.psi_fixed_region &&
         r.normed.classify(r.psi) == r.psi_normed_region &&
         classify_ks(r.ks_p_value) == r.ks_region;
}

json to_json(const MonitoringReport& r) {
  json j;
  j["label"] = r.label;
  j["timestamp"] = r.timestamp ? json(*r.timestamp) : json(nullptr);
  j["counts"] = r.counts;
  j["reference"] = r.reference;
  j["n"] = r.n;
  j["categories"] = r.categories;
  j["boundaries"] = {{"delta", r.boundaries.delta},
                     {"lambda_sup", r.boundaries.lambda_sup},
                     {"tau1", r.boundaries.tau1},
                     {"tau2", r.boundaries.tau2}};
  j["prs"] = {{"value", r.prs}, {"region", rag_name(r.prs_region)}};
  j["psi"] = {{"value", r.psi},
              {"psi_fixed_region", rag_name(r.psi_fixed_region)},
              {"psi_normed_region", rag_name(r.psi_normed_region)},
              {"normed_tau_red", r.normed.tau_red},
              {"normed_tau_green", r.normed.tau_green},
              {"normed_alpha_upper", r.normed.alpha_upper},
              {"normed_alpha_lower", r.normed.alpha_lower}};
  j["ks"] = {{"statistic", r.ks_statistic},
             {"p_value", r.ks_p_value},
             {"replications", r.ks_replications},
             {"region", rag_name(r.ks_region)}};
  j["config"] = {
      {"c", r.config.c},
      {"M", r.config.M},
      {"alpha1", r.config.alpha1},
      {"alpha2", r.config.alpha2},
      {"delta_override", r.config.delta_override ? json(*r.config.delta_override) : json(nullptr)}};
  j["seed"] = r.seed;
  return j;
}

MonitoringReport report_from_json(const json& j) {
  auto region = [](const json& v) { return region_from_rag(v.get<std::string>()); };
  MonitoringReport r;
  r.label = j.at("label").get<std::string>();
  if (!j.at("timestamp").is_null()) r.timestamp = j.at("timestamp").get<std::string>();
  r.counts = j.at("counts").get<std::vector<std::int64_t>>();
  r.reference = j.at("reference").get<std::vector<double>>();
  r.n = j.at("n").get<std::int64_t>();
  r.categories = j.at("categories").get<std::size_t>();
  const auto& b = j.at("boundaries");
  r.boundaries.delta = b.at("delta").get<double>();
  r.boundaries.lambda_sup = b.at("lambda_sup").get<double>();
  r.boundaries.tau1 = b.at("tau1").get<double>();
  r.boundaries.tau2 = b.at("tau2").get<double>();
  r.boundaries.n = r.n;
  r.boundaries.categories = r.categories;
  r.prs = j.at("prs").at("value").get<double>();
  r.prs_region = region(j.at("prs").at("region"));
  const auto& p = j.at("psi");
  r.psi = p.at("value").get<double>();
  r.psi_fixed_region = region(p.at("psi_fixed_region"));
  r.psi_normed_region = region(p.at("psi_normed_region"));
  r.normed.tau_red = p.at("normed_tau_red").get<double>();
  r.normed.tau_green = p.at("normed_tau_green").get<double>();
  r.normed.alpha_upper = p.at("normed_alpha_upper").get<double>();
  r.normed.alpha_lower = p.at("normed_alpha_lower").get<double>();
  const auto& k = j.at("ks");
  r.ks_statistic = k.at("statistic").get<double>();
  r.ks_p_value = k.at("p_value").get<double>();
  r.ks_replications = k.at("replications").get<std::int64_t>();
  r.ks_region = region(k.at("region"));
  const auto& c = j.at("config");
  r.config.c = c.at("c").get<double>();
  r.config.M = c.at("M").get<double>();
  r.config.alpha1 = c.at("alpha1").get<double>();
  r.config.alpha2 = c.at("alpha2").get<double>();
  if (!c.at("delta_override").is_null())
    r.config.delta_override = c.at("delta_override").get<double>();
  r.seed = j.at("seed").get<std::uint64_t>();
  return r;
}

std::string format_p_value(double p) {
  if (p < 0.001) return "<0.001";
  return fixed(p, 3);
}

std::string render_text(const MonitoringReport& r) {
  std::ostringstream os;
  os << "snapshot     " << r.label << "  (n = " << r.n << ", B = " << r.categories << ")";
  if (r.timestamp) os << "  " << *r.timestamp;
  os << '\n';
  os << "config       c = " << general(r.config.c) << ", M = " << general(r.config.M)
     << ", alpha1 = " << general(r.config.alpha1) << ", alpha2 = " << general(r.config.alpha2)
     << '\n';
  os << "delta        " << fixed(r.boundaries.delta, 6)
     << "  (n*delta = " << fixed(static_cast<double>(r.n) * r.boundaries.delta, 2)
     << " cases per category)\n";
  os << "lambda_sup   " << fixed(r.boundaries.lambda_sup, 4) << '\n';
  os << "tau1, tau2   " << fixed(r.boundaries.tau1, 5) << ", " << fixed(r.boundaries.tau2, 5)
     << '\n';
  os << "PRS          " << fixed(r.prs, 4) << "  " << rag_name(r.prs_region) << '\n';
  os << "PSI          " << fixed(r.psi, 4) << "  fixed " << rag_name(r.psi_fixed_region)
     << ", normed " << rag_name(r.psi_normed_region) << "  (normed green < "
     << fixed(r.normed.tau_green, 4) << ", red > " << fixed(r.normed.tau_red, 4) << ")\n";
  os << "KS           " << fixed(r.ks_statistic, 4) << "  p = " << format_p_value(r.ks_p_value)
     << "  " << rag_name(r.ks_region) << "  (" << r.ks_replications << " replications, seed "
     << r.seed << ")\n";
  return os.str();
}

std::string render_json(const MonitoringReport& r) { return to_json(r).dump(2) + "\n"; }

std::string render_csv(const MonitoringReport& r) {
  std::ostringstream os;
  os << "label,n,B,delta,lambda_sup,tau1,tau2,prs,prs_rag,psi,psi_fixed_rag,psi_normed_rag,ks,ks_p_"
        "value,"
        "ks_rag,seed\n";
  os << r.label << ',' << r.n << ',' << r.categories << ',' << general(r.boundaries.delta) << ','
     << general(r.boundaries.lambda_sup) << ',' << general(r.boundaries.tau1) << ','
     << general(r.boundaries.tau2) << ',' << general(r.prs) << ',' << rag_name(r.prs_region) << ','
     << general(r.psi) << ',' << rag_name(r.psi_fixed_region) << ','
     << rag_name(r.psi_normed_region) << ',' << general(r.ks_statistic) << ','
     << general(r.ks_p_value) << ',' << rag_name(r.ks_region) << ',' << r.seed << '\n';
  return os.str();
}

std::string content_hash(const MonitoringReport& report) {
  const auto canonical = to_json(report).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

AppendResult append_history(const MonitoringReport& report, const std::filesystem::path& path) {
  FileLock lock(path);
  const auto existing = parse_history(lock.read_all(), path.string());
  AppendResult result;
  result.hash = content_hash(report);
  const bool duplicate = std::any_of(existing.begin(), existing.end(), [&](const auto& rec) {
    return rec.report.label == report.label && rec.hash == result.hash;
  });
  if (duplicate) {
    result.records = existing.size();
    return result;
  }
  auto j = to_json(report);
  j["content_hash"] = result.hash;
  lock.append(j.dump() + "\n");
  result.appended = true;
  result.records = existing.size() + 1;
  return result;
}

std::vector<MonitoringReport> read_history(const std::filesystem::path& path) {
  std::vector<MonitoringReport> out;
  if (!std::filesystem::exists(path)) return out;
  for (auto& rec : parse_history(read_file(path), path.string()))
    out.push_back(std::move(rec.report));
  return out;
}

std::vector<TimelineEntry> timeline(const std::filesystem::path& path) {
  std::vector<TimelineEntry> out;
  for (const auto& r : read_history(path)) out.push_back({r.label, r.prs_region});
  return out;
}

StudyId parse_study_id(std::string_view name) {
  if (name == "table1" || name == "reconstruction") return StudyId::kReconstruction;
  if (name == "stability" || name == "stability_ratios") return StudyId::kStability;
  if (name == "sweep") return StudyId::kSweep;
  throw ValidationError("unknown study '" + std::string(name) +
                        "' (expected table1, stability or sweep)");
}

std::string_view study_name(StudyId id) noexcept {
  switch (id) {
    case StudyId::kReconstruction:
      return "table1";
    case StudyId::kStability:
      return "stability";
    case StudyId::kSweep:
      return "sweep";
  }
  return "unknown";
}

void run_study(const StudyRequest& req, std::ostream& os) {
  CsvMetadata meta{{"study", std::string(study_name(req.id))},
                   {"seed", std::to_string(req.seed)},
                   {"replications", std::to_string(req.replications)}};
  switch (req.id) {
    case StudyId::kReconstruction: {
      const std::vector<std::int64_t> ns =
          req.n_values.empty() ? std::vector<std::int64_t>{50, 100, 200, 500} : req.n_values;
      const std::vector<std::size_t> bs =
          req.categories.empty() ? std::vector<std::size_t>{5, 10} : req.categories;
      const std::vector<double> js =
          req.target_j.empty() ? std::vector<double>{0.0, 0.1} : req.target_j;
      meta.emplace_back("n", join(ns));
      meta.emplace_back("B", join(bs));
      meta.emplace_back("target_j", join(js));
      meta.emplace_back("psi_threshold", general(req.psi_threshold));
      std::vector<ReconstructionRow> rows;
      for (double target : js) {
        for (std::size_t b : bs) {
          for (std::int64_t n : ns) {
            SimulationSpec spec{n, b, req.replications, req.seed, NoShift{}, req.threads};
            if (target > 0.0) spec.scenario = TargetJ{target};
            rows.push_back({n, b, target, reconstruction_probability(spec, req.psi_threshold)});
          }
        }
      }
      write_csv_metadata(os, meta);
      write_reconstruction_csv(os, rows);
      return;
    }
    case StudyId::kStability: {
      const std::vector<std::int64_t> ns =
          req.n_values.empty() ? std::vector<std::int64_t>{20,  30,  40,  50,  75,  100, 150, 200,
                                                           300, 400, 500, 600, 700, 800, 900, 1000}
                               : req.n_values;
      const std::vector<std::size_t> bs =
          req.categories.empty() ? std::vector<std::size_t>{5} : req.categories;
      meta.emplace_back("n", join(ns));
      meta.emplace_back("B", join(bs));
      std::vector<StabilityRatios> rows;
      for (std::size_t b : bs) {
        for (std::int64_t n : ns) {
          rows.push_back(stability_ratios(n, b, req.replications, req.seed, req.threads));
        }
      }
      write_csv_metadata(os, meta);
      write_stability_csv(os, rows);
      return;
    }
    case StudyId::kSweep: {
      const std::int64_t n = req.n_values.empty() ? 50 : req.n_values.front();
      const std::size_t b = req.categories.empty() ? 5 : req.categories.front();
      if (req.n_values.size() > 1 || req.categories.size() > 1) {
        throw ValidationError("sweep study takes a single n and a single B");
      }
      const auto sweep = classification_sweep(n, b, req.config, req.grid_points, req.replications,
                                              req.seed, req.threads);
      meta.emplace_back("n", std::to_string(n));
      meta.emplace_back("B", std::to_string(b));
      meta.emplace_back("c", general(req.config.c));
      meta.emplace_back("M", general(req.config.M));
      meta.emplace_back("alpha1", general(req.config.alpha1));
      meta.emplace_back("alpha2", general(req.config.alpha2));
      meta.emplace_back("delta", general(sweep.boundaries.delta));
      meta.emplace_back("lambda_sup", general(sweep.boundaries.lambda_sup));
      meta.emplace_back("tau1", general(sweep.boundaries.tau1));
      meta.emplace_back("tau2", general(sweep.boundaries.tau2));
      meta.emplace_back("requested_upper", general(sweep.requested_upper));
      meta.emplace_back("grid_upper", general(sweep.grid_upper));
      write_csv_metadata(os, meta);
      write_sweep_csv(os, sweep);
      return;
    }
  }
}

void run_study(const StudyRequest& request, const std::filesystem::path& output) {
  std::ostringstream buffer;
  run_study(request, buffer);
  std::ofstream out(output, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write '" + output.string() + "'");
  out << buffer.str();
}

}  // namespace prs
