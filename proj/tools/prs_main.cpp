// Command-line front end: monitor snapshots, print decision boundaries,
// run simulation studies and inspect the monitoring history.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "prs/error.hpp"
#include "prs/reporting.hpp"
#include "prs/resemblance.hpp"

namespace {

enum ExitCode : int { kOk = 0, kValidation = 2, kNumerical = 3, kConfiguration = 4 };

struct ConfigFlags {
  std::optional<double> c, M, alpha1, alpha2, delta;
  std::optional<std::uint64_t> seed;

  void attach(CLI::App* cmd) {
    cmd->add_option("--c", c, "delta scale relative to the proportion standard error");
    cmd->add_option("--M", M, "full-discrepancy multiplier (> 1)");
    cmd->add_option("--alpha1", alpha1, "sensitivity to reconstruction, sets tau2");
    cmd->add_option("--alpha2", alpha2, "sensitivity to continued use, sets tau1");
    cmd->add_option("--delta", delta, "use this delta instead of c * min standard error");
    cmd->add_option("--seed", seed, "Monte Carlo seed");
  }

  void apply(prs::MonitorSettings& s) const {
    if (c) s.config.c = *c;
    if (M) s.config.M = *M;
    if (alpha1) s.config.alpha1 = *alpha1;
    if (alpha2) s.config.alpha2 = *alpha2;
    if (delta) s.config.delta_override = *delta;
    if (seed) s.seed = *seed;
  }
};

prs::MonitorSettings settings_from(const std::string& config_path, const ConfigFlags& flags) {
  prs::MonitorSettings s =
      config_path.empty() ? prs::MonitorSettings{} : prs::load_config(config_path);
  flags.apply(s);
  s.config.validate();
  return s;
}

int report_error(const char* kind, const std::exception& e, int code) {
  std::fprintf(stderr, "prs: %s: %s\n", kind, e.what());
  return code;
}

void print_boundaries(const prs::DecisionBoundaries& b, const prs::ResemblanceConfig& cfg) {
  std::printf("n           %lld\n", static_cast<long long>(b.n));
  std::printf("B           %zu\n", b.categories);
  std::printf("c, M        %g, %g\n", cfg.c, cfg.M);
  std::printf("alpha1      %g\n", cfg.alpha1);
  std::printf("alpha2      %g\n", cfg.alpha2);
  std::printf("delta       %.6f\n", b.delta);
  std::printf("n*delta     %.2f\n", static_cast<double>(b.n) * b.delta);
  std::printf("lambda_sup  %.4f\n", b.lambda_sup);
  std::printf("tau1        %.5f\n", b.tau1);
  std::printf("tau2        %.5f\n", b.tau2);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Population Resemblance Statistic monitoring and simulation"};
  app.require_subcommand(1);

  // monitor
  auto* mon = app.add_subcommand("monitor", "score one snapshot against the reference");
  std::string snapshot_path, reference_path, config_path, history_path, label;
  std::string format = "text";
  std::optional<std::int64_t> ks_reps;
  int threads = 0;
  ConfigFlags mon_flags;
  mon->add_option("--snapshot", snapshot_path, "snapshot CSV or JSON")
      ->required()
      ->check(CLI::ExistingFile);
  mon->add_option("--reference", reference_path, "reference counts or probabilities")
      ->required()
      ->check(CLI::ExistingFile);
  mon->add_option("--config", config_path, "key = value configuration file")
      ->check(CLI::ExistingFile);
  mon->add_option("--history", history_path, "JSON-lines history to append to");
  mon->add_option("--format", format, "text, json or csv")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  mon->add_option("--label", label, "override the snapshot label");
  mon->add_option("--ks-replications", ks_reps, "Monte Carlo replications for the KS p-value");
  mon->add_option("--threads", threads, "OpenMP threads (0: default)");
  mon_flags.attach(mon);

  // boundaries
  auto* bnd = app.add_subcommand("boundaries", "print delta, lambda_sup, tau1 and tau2");
  std::string bnd_reference, bnd_config;
  std::optional<std::size_t> bnd_categories;
  std::int64_t bnd_n = 0;
  ConfigFlags bnd_flags;
  auto* ref_opt =
      bnd->add_option("--reference", bnd_reference, "reference file")->check(CLI::ExistingFile);
  auto* cat_opt = bnd->add_option("--categories,--B", bnd_categories,
                                  "equi-probable reference on B categories");
  ref_opt->excludes(cat_opt);
  bnd->add_option("--n", bnd_n, "sample size")->required();
  bnd->add_option("--config", bnd_config, "key = value configuration file")
      ->check(CLI::ExistingFile);
  bnd_flags.attach(bnd);

  // study
  auto* st = app.add_subcommand("study", "run a simulation study and write CSV");
  std::string study_name, out_path;
  prs::StudyRequest req;
  ConfigFlags st_flags;
  st->add_option("--study", study_name, "table1, stability or sweep")->required();
  st->add_option("--out", out_path, "output CSV (stdout if omitted)");
  st->add_option("--n", req.n_values, "sample sizes");
  st->add_option("--B", req.categories, "category counts");
  st->add_option("--j", req.target_j, "target J divergences (table1)");
  st->add_option("--psi-threshold", req.psi_threshold, "PSI reconstruction threshold (table1)");
  st->add_option("--grid-points", req.grid_points, "delta_v grid points (sweep)");
  st->add_option("--K", req.replications, "Monte Carlo replications");
  st->add_option("--threads", req.threads, "OpenMP threads (0: default)");
  st_flags.attach(st);

  // timeline
  auto* tl = app.add_subcommand("timeline", "list the PRS status of every recorded snapshot");
  std::string tl_history;
  tl->add_option("--history", tl_history, "JSON-lines history")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }

  try {
    if (*mon) {
      auto settings = settings_from(config_path, mon_flags);
      if (ks_reps) settings.ks_replications = *ks_reps;
      const auto reference = prs::load_reference(reference_path);
      auto snapshot = prs::load_snapshot(snapshot_path);
      if (!label.empty()) snapshot.label = label;
      const auto report = prs::monitor(snapshot, reference, settings, threads);
      if (format == "json") {
        std::cout << prs::render_json(report);
      } else if (format == "csv") {
        std::cout << prs::render_csv(report);
      } else {
        std::cout << prs::render_text(report);
      }
      if (!history_path.empty()) {
        const auto ack = prs::append_history(report, history_path);
        if (ack.appended) {
          std::fprintf(stderr, "history: appended '%s' (%zu records, hash %s)\n",
                       report.label.c_str(), ack.records, ack.hash.c_str());
        } else {
          std::fprintf(stderr, "history: duplicate '%s' ignored (%zu records, hash %s)\n",
                       report.label.c_str(), ack.records, ack.hash.c_str());
        }
      }
    } else if (*bnd) {
      const auto settings = settings_from(bnd_config, bnd_flags);
      if (bnd_reference.empty() && !bnd_categories) {
        throw prs::ValidationError("boundaries needs --reference or --categories");
      }
      const auto reference = bnd_reference.empty()
                                 ? prs::ReferenceDistribution::uniform(*bnd_categories)
                                 : prs::load_reference(bnd_reference);
      print_boundaries(prs::decision_boundaries(reference, bnd_n, settings.config),
                       settings.config);
    } else if (*st) {
      req.id = prs::parse_study_id(study_name);
      prs::MonitorSettings s;
      s.seed = req.seed;
      st_flags.apply(s);
      s.config.validate();
      req.config = s.config;
      req.seed = s.seed;
      if (out_path.empty()) {
        prs::run_study(req, std::cout);
      } else {
        prs::run_study(req, std::filesystem::path(out_path));
      }
    } else if (*tl) {
      if (!std::filesystem::exists(tl_history)) {
        throw prs::ValidationError("history '" + tl_history + "' does not exist");
      }
      std::string sequence;
      for (const auto& entry : prs::timeline(tl_history)) {
        std::printf("%-16s %s\n", entry.label.c_str(),
                    std::string(prs::rag_name(entry.prs_region)).c_str());
        if (!sequence.empty()) sequence += ',';
        sequence += prs::rag_letter(entry.prs_region);
      }
      std::printf("sequence         %s\n", sequence.c_str());
    }
  } catch (const prs::ConfigurationError& e) {
    return report_error("configuration error", e, kConfiguration);
  } catch (const prs::ConvergenceError& e) {
    return report_error("numerical error", e, kNumerical);
  } catch (const prs::ValidationError& e) {
    return report_error("validation error", e, kValidation);
  } catch (const prs::DomainError& e) {
    return report_error("validation error", e, kValidation);
  } catch (const std::exception& e) {
    return report_error("error", e, kValidation);
  }
  return kOk;
}
