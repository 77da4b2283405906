#include <sstream>

#include <json.hpp>

#include "amsd/eval.hpp"
#include "amsd/io_util.hpp"

namespace amsd {

namespace {

using nlohmann::json;

inline constexpr const char* kReportFormat = "amsd-eval-report/1";
inline constexpr const char* kAblationFormat = "amsd-ablation-report/1";

json environment_json(const Environment& env) {
  return {{"hardware", env.hardware}, {"timestamp", env.timestamp}, {"seed", env.seed}, {"folds", env.folds}};
}

std::string num(double v) { return format_number(v); }

}  // namespace

std::string report_to_json(const EvalReport& report) {
  json records = json::array();
  json summaries = json::array();
  for (const auto& m : report.results) {
    for (std::size_t i = 0; i < m.folds.size(); ++i) {
      const auto& f = m.folds[i];
      records.push_back({{"dataset", m.dataset},
                         {"model", m.model},
                         {"fold", i},
                         {"accuracy", f.accuracy},
                         {"leaf_metric", f.leaf_metric},
                         {"test_rows", f.test_rows},
                         {"train_seconds", f.train_seconds}});
    }
    summaries.push_back({{"dataset", m.dataset},
                         {"model", m.model},
                         {"accuracy_mean", m.accuracy_mean},
                         {"accuracy_stddev", m.accuracy_stddev},
                         {"leaf_mean", m.leaf_mean},
                         {"train_seconds_total", m.train_seconds_total}});
  }
  json doc = {{"format", kReportFormat},
              {"environment", environment_json(report.environment)},
              {"config", report.config},
              {"folds", std::move(records)},
              {"summary", std::move(summaries)}};
  return doc.dump(1) + "\n";
}

std::string accuracy_table(const EvalReport& report) {
  std::ostringstream out;
  out << "dataset\tmodel\taccuracy_mean\taccuracy_stddev\n";
  for (const auto& m : report.results)
    out << m.dataset << '\t' << m.model << '\t' << num(m.accuracy_mean) << '\t' << num(m.accuracy_stddev) << '\n';
  return out.str();
}

std::string time_table(const EvalReport& report) {
  std::ostringstream out;
  out << "dataset\tmodel\ttrain_seconds_total\n";
  for (const auto& m : report.results)
    out << m.dataset << '\t' << m.model << '\t' << num(m.train_seconds_total) << '\n';
  return out.str();
}

std::string leaf_table(const EvalReport& report) {
  std::ostringstream out;
  out << "dataset\tmodel\tleaf_mean\n";
  for (const auto& m : report.results) out << m.dataset << '\t' << m.model << '\t' << num(m.leaf_mean) << '\n';
  return out.str();
}

std::string summary_table(const EvalReport& report) {
  std::ostringstream out;
  out << "dataset\tmodel\taccuracy_mean\taccuracy_stddev\tleaf_mean\ttrain_seconds_total\n";
  for (const auto& m : report.results)
    out << m.dataset << '\t' << m.model << '\t' << num(m.accuracy_mean) << '\t' << num(m.accuracy_stddev) << '\t'
        << num(m.leaf_mean) << '\t' << num(m.train_seconds_total) << '\n';
  return out.str();
}

std::string scaling_table(std::span<const ScalingPoint> points) {
  std::ostringstream out;
  out << "strategy\tn\tmedian_seconds\tgrowth_ratio\n";
  for (const auto& p : points)
    out << to_string(p.strategy.kind) << '\t' << p.n << '\t' << num(p.median_seconds) << '\t'
        << (p.growth_ratio ? num(*p.growth_ratio) : std::string("NA")) << '\n';
  return out.str();
}

std::string ablation_table(const AblationResult& result) {
  std::ostringstream out;
  out << "model\tgamma_max\taccuracy_mean\taccuracy_stddev\tproposals\tempty_outer_bins\tempty_outer_fraction\n";
  out << "C4.5-MSD\tNA\t" << num(result.msd_reference.accuracy_mean) << '\t'
      << num(result.msd_reference.accuracy_stddev) << "\tNA\tNA\tNA\n";
  for (const auto& p : result.points)
    out << "C4.5-AMSD\t" << num(p.gamma_max) << '\t' << num(p.accuracy_mean) << '\t' << num(p.accuracy_stddev) << '\t'
        << p.proposals << '\t' << p.empty_outer_bins << '\t' << num(p.empty_outer_fraction()) << '\n';
  return out.str();
}

std::string ablation_to_json(const AblationResult& result, const std::map<std::string, std::string>& config) {
  json points = json::array();
  for (const auto& p : result.points)
    points.push_back({{"gamma_max", p.gamma_max},
                      {"accuracy_mean", p.accuracy_mean},
                      {"accuracy_stddev", p.accuracy_stddev},
                      {"proposals", p.proposals},
                      {"empty_outer_bins", p.empty_outer_bins},
                      {"empty_outer_fraction", p.empty_outer_fraction()}});
  json doc = {{"format", kAblationFormat},
              {"config", config},
              {"msd_reference",
               {{"accuracy_mean", result.msd_reference.accuracy_mean},
                {"accuracy_stddev", result.msd_reference.accuracy_stddev}}},
              {"points", std::move(points)}};
  return doc.dump(1) + "\n";
}

}  // namespace amsd
