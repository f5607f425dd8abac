#include "edgeseg/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <vector>

#include "edgeseg/fileio.hpp"

namespace edgeseg {

std::string_view statistic_name(Statistic s) { return s == Statistic::Mean ? "mean" : "median"; }

Statistic parse_statistic(std::string_view name) {
  if (name == "mean") return Statistic::Mean;
  if (name == "median") return Statistic::Median;
  throw UsageError("statistic must be mean or median, got '" + std::string(name) + "'");
}

double mean_of(std::span<const double> values) {
  if (values.empty()) throw UsageError("mean of an empty list");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double median_of(std::span<const double> values) {
  if (values.empty()) throw UsageError("median of an empty list");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  if (n % 2 == 1) return sorted[n / 2];
  return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

SummaryTable aggregate(std::span<const MetricsRecord> records, Statistic stat) {
  if (records.empty()) throw UsageError("no metrics records to aggregate");

  // subject -> per-region record; the ordered map keeps the reduction order subject-sorted.
  std::map<std::string, std::array<const MetricsRecord*, 3>> by_subject;
  for (const auto& r : records) {
    auto& slot = by_subject[r.subject][static_cast<std::size_t>(r.region)];
    if (slot != nullptr)
      throw UsageError("subject '" + r.subject + "' has more than one " + std::string(region_name(r.region)) + " record");
    slot = &r;
  }
  for (const auto& [subject, slots] : by_subject)
    for (Region region : kRegions)
      if (slots[static_cast<std::size_t>(region)] == nullptr)
        throw UsageError("subject '" + subject + "' is missing region " + std::string(region_name(region)));

  SummaryTable table;
  table.stat = stat;
  table.n = by_subject.size();
  for (Region region : kRegions) {
    std::vector<double> dices, hds;
    for (const auto& [subject, slots] : by_subject) {
      dices.push_back(slots[static_cast<std::size_t>(region)]->dice);
      hds.push_back(slots[static_cast<std::size_t>(region)]->hd95);
    }
    auto& row = table.rows[static_cast<std::size_t>(region)];
    row.region = region;
    row.dice = stat == Statistic::Mean ? mean_of(dices) : median_of(dices);
    row.hd95 = stat == Statistic::Mean ? mean_of(hds) : median_of(hds);
  }
  return table;
}

std::string format_summary_csv(const SummaryTable& table) {
  std::string out = "stat,region,dice,hd95,n\n";
  char buf[160];
  for (const auto& row : table.rows) {
    std::snprintf(buf, sizeof buf, "%s,%s,%.6g,%.6g,%zu\n", std::string(statistic_name(table.stat)).c_str(),
                  std::string(region_name(row.region)).c_str(), row.dice, row.hd95, table.n);
    out += buf;
  }
  return out;
}

void write_summary_csv(const SummaryTable& table, const std::filesystem::path& path) {
  if (table.n == 0) throw UsageError("refusing to write an empty summary");
  write_file_atomic(path, format_summary_csv(table));
}

}  // namespace edgeseg
