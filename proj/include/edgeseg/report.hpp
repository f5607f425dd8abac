#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "edgeseg/metrics.hpp"

namespace edgeseg {

enum class Statistic { Mean, Median };

std::string_view statistic_name(Statistic s);
Statistic parse_statistic(std::string_view name);

struct SummaryRow {
  Region region = Region::WT;
  double dice = 0.0;
  double hd95 = 0.0;
};

struct SummaryTable {
  Statistic stat = Statistic::Mean;
  std::array<SummaryRow, 3> rows;  // WT, TC, ET
  std::size_t n = 0;

  const SummaryRow& operator[](Region r) const { return rows[static_cast<std::size_t>(r)]; }
};

double mean_of(std::span<const double> values);
/// Even counts average the two central values.
double median_of(std::span<const double> values);

/// Every subject must contribute exactly one record per region; otherwise
/// UsageError naming the subject.
SummaryTable aggregate(std::span<const MetricsRecord> records, Statistic stat);

/// Header `stat,region,dice,hd95,n`, rows WT, TC, ET, values at 6 significant digits.
std::string format_summary_csv(const SummaryTable& table);
void write_summary_csv(const SummaryTable& table, const std::filesystem::path& path);

}  // namespace edgeseg
