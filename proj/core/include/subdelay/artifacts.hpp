#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "subdelay/delay.hpp"
#include "subdelay/metrics.hpp"

// CSV artifacts. All files are UTF-8 with a header row, '.' decimals and '\n'
// line endings:
//   summary.csv  env,delay,agent,T,mean_regret,stddev,n_runs
//   slopes.csv   env,delay,agent,slope,intercept,residual
//   trace.csv    run_id,t,action,instantaneous,cumulative
//   pmf family   member,delay,mass   (input to the tailbound command)

namespace subdelay {

/// Shortest text that round-trips the double; "nan" / "inf" / "-inf" otherwise.
std::string format_double(double v);

struct SummaryRow {
  std::string env;
  std::string delay;
  std::string agent;
  std::uint64_t horizon = 0;
  double mean_regret = 0.0;
  double stddev = 0.0;
  std::size_t n_runs = 0;
};

struct SlopeRow {
  std::string env;
  std::string delay;
  std::string agent;
  std::optional<SlopeFit> fit;  // empty when the fit was impossible
};

inline constexpr const char* kSummaryHeader = "env,delay,agent,T,mean_regret,stddev,n_runs";
inline constexpr const char* kSlopeHeader = "env,delay,agent,slope,intercept,residual";
inline constexpr const char* kTraceHeader = "run_id,t,action,instantaneous,cumulative";
inline constexpr const char* kFeedbackTraceHeader =
    "run_id,t,action,realized_reward,observation,escaped_mass";

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> read_summary_csv(std::istream& in);

/// Groups rows by (env, delay, agent) in first-seen order and fits each group
/// with at least three horizons. Failed fits come back empty and add a warning.
std::vector<SlopeRow> fit_slopes(const std::vector<SummaryRow>& rows, std::vector<std::string>* warnings);
void write_slopes_csv(std::ostream& out, const std::vector<SlopeRow>& rows);

/// Reads a long-format pmf family; members are returned in first-seen order,
/// missing delays count as zero mass.
std::vector<DelayPmf> read_pmf_family_csv(std::istream& in);
void write_tail_bound_csv(std::ostream& out, const TailBound& bound);

std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace subdelay
