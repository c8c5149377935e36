#include "subdelay/artifacts.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>

#include "subdelay/errors.hpp"

namespace subdelay {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

namespace {

template <typename T>
T parse_field(const std::string& text, const char* what, std::size_t line) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw ConfigError(std::string("bad ") + what + " '" + text + "'", static_cast<int>(line));
  return value;
}

double parse_real(const std::string& text, const char* what, std::size_t line) {
  if (text == "nan") return std::nan("");
  return parse_field<double>(text, what, line);
}

void expect_header(std::istream& in, const std::string& header) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty CSV, expected header '" + header + "'", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw ConfigError("expected header '" + header + "', got '" + line + "'", 1);
}

}  // namespace

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << kSummaryHeader << '\n';
  for (const auto& r : rows)
    out << r.env << ',' << r.delay << ',' << r.agent << ',' << r.horizon << ','
        << format_double(r.mean_regret) << ',' << format_double(r.stddev) << ',' << r.n_runs << '\n';
}

std::vector<SummaryRow> read_summary_csv(std::istream& in) {
  expect_header(in, kSummaryHeader);
  std::vector<SummaryRow> rows;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() != 7) throw ConfigError("summary row needs 7 fields", static_cast<int>(lineno));
    SummaryRow r;
    r.env = f[0];
    r.delay = f[1];
    r.agent = f[2];
    r.horizon = parse_field<std::uint64_t>(f[3], "horizon", lineno);
    r.mean_regret = parse_real(f[4], "mean_regret", lineno);
    r.stddev = parse_real(f[5], "stddev", lineno);
    r.n_runs = parse_field<std::size_t>(f[6], "n_runs", lineno);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<SlopeRow> fit_slopes(const std::vector<SummaryRow>& rows, std::vector<std::string>* warnings) {
  struct Group {
    const SummaryRow* first;
    std::vector<std::pair<double, double>> points;
  };
  std::vector<Group> groups;
  std::map<std::string, std::size_t> index;
  for (const auto& r : rows) {
    const auto key = r.env + '\x1f' + r.delay + '\x1f' + r.agent;
    auto [it, inserted] = index.emplace(key, groups.size());
    if (inserted) groups.push_back({&r, {}});
    groups[it->second].points.emplace_back(static_cast<double>(r.horizon), r.mean_regret);
  }

  std::vector<SlopeRow> out;
  for (const auto& g : groups) {
    if (g.points.size() < 3) continue;
    SlopeRow row{g.first->env, g.first->delay, g.first->agent, std::nullopt};
    try {
      row.fit = fit_loglog_slope(g.points);
      if (warnings && !row.fit->excluded_horizons.empty())
        warnings->push_back(row.env + "/" + row.delay + "/" + row.agent + ": excluded " +
                            std::to_string(row.fit->excluded_horizons.size()) +
                            " horizon(s) with non-positive regret from the slope fit");
    } catch (const Error& e) {
      if (warnings) warnings->push_back(row.env + "/" + row.delay + "/" + row.agent + ": " + e.what());
    }
    out.push_back(std::move(row));
  }
  return out;
}

void write_slopes_csv(std::ostream& out, const std::vector<SlopeRow>& rows) {
  out << kSlopeHeader << '\n';
  for (const auto& r : rows) {
    out << r.env << ',' << r.delay << ',' << r.agent << ',';
    if (r.fit)
      out << format_double(r.fit->slope) << ',' << format_double(r.fit->intercept) << ','
          << format_double(r.fit->residual);
    else
      out << "nan,nan,nan";
    out << '\n';
  }
}

std::vector<DelayPmf> read_pmf_family_csv(std::istream& in) {
  expect_header(in, "member,delay,mass");
  std::vector<std::string> order;
  std::map<std::string, std::vector<double>> members;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() != 3) throw ConfigError("pmf row needs member,delay,mass", static_cast<int>(lineno));
    const auto delay = parse_field<std::size_t>(f[1], "delay", lineno);
    const auto mass = parse_field<double>(f[2], "mass", lineno);
    auto [it, inserted] = members.try_emplace(f[0]);
    if (inserted) order.push_back(f[0]);
    auto& v = it->second;
    if (v.size() <= delay) v.resize(delay + 1, 0.0);
    v[delay] += mass;
  }
  std::vector<DelayPmf> family;
  for (const auto& name : order) {
    try {
      family.emplace_back(members[name]);
    } catch (const InvalidPmf& e) {
      throw InvalidPmf("member '" + name + "': " + e.what());
    }
  }
  return family;
}

void write_tail_bound_csv(std::ostream& out, const TailBound& bound) {
  out << "delay,mass,tail\n";
  for (std::size_t j = 0; j < bound.pmf.support(); ++j)
    out << j << ',' << format_double(bound.pmf[j]) << ',' << format_double(bound.pmf.tail(j)) << '\n';
}

}  // namespace subdelay
