// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mset/report.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace mset {
namespace {

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::int64_t ParseInt(std::string_view text) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw CsvError("not an integer: '" + std::string(text) + "'");
  }
  return value;
}

// Policy labels are written verbatim; commas and line breaks would corrupt
// the file.
void CheckLabel(const std::string& label) {
  if (label.find_first_of(",\r\n\"") != std::string::npos) {
    throw CsvError("policy label '" + label + "' contains a CSV delimiter");
  }
}

// Reads lines after checking the header; strips a trailing '\r'.
std::vector<std::vector<std::string>> ReadRows(const std::filesystem::path& path,
                                               std::string_view header,
                                               size_t columns) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw CsvError(path.string() + " is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) {
    throw CsvError(path.string() + ": expected header '" + std::string(header) + "'");
  }
  std::vector<std::vector<std::string>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = SplitFields(line);
    if (fields.size() != columns) {
      throw CsvError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                     std::to_string(columns) + " fields");
    }
    rows.emplace_back(fields.begin(), fields.end());
  }
  return rows;
}

std::ofstream OpenForWrite(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

// -- SVG ----------------------------------------------------------------------

constexpr double kPanelWidth = 480.0;
constexpr double kPanelHeight = 360.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 36.0;
constexpr double kMarginBottom = 50.0;
constexpr double kLegendHeight = 24.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                "#bcbd22", "#17becf"};

std::string Escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string Num(double x) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x,
                                       std::chars_format::fixed, 2);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

std::string TickLabel(double x) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << x;
  return s.str();
}

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  bool log = false;

  double Map(double v) const {
    const double a = log ? std::log10(v) : v;
    const double b0 = log ? std::log10(lo) : lo;
    const double b1 = log ? std::log10(hi) : hi;
    return b1 > b0 ? (a - b0) / (b1 - b0) : 0.5;
  }
};

// Round step (1, 2 or 5 times a power of ten) giving about `target` ticks.
double NiceStep(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double f : {1.0, 2.0, 5.0, 10.0}) {
    if (f * mag >= raw) return f * mag;
  }
  return 10.0 * mag;
}

std::vector<double> Ticks(const Axis& axis) {
  std::vector<double> ticks;
  if (axis.log) {
    for (double p = std::floor(std::log10(axis.lo)); p <= std::ceil(std::log10(axis.hi));
         p += 1.0) {
      const double v = std::pow(10.0, p);
      if (v >= axis.lo * (1 - 1e-9) && v <= axis.hi * (1 + 1e-9)) ticks.push_back(v);
    }
    return ticks;
  }
  const double step = NiceStep(axis.hi - axis.lo, 5);
  for (double v = std::ceil(axis.lo / step) * step; v <= axis.hi + 1e-9 * step;
       v += step) {
    ticks.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  }
  return ticks;
}

struct Point {
  double t;
  double mean;
  double lo;
  double hi;
};

std::vector<Point> PanelPoints(const PolicySummary& s, bool log) {
  std::vector<Point> pts;
  for (size_t k = 0; k < s.t.size(); ++k) {
    const double t = static_cast<double>(s.t[k]);
    const double mean = s.mean[k];
    double lo = mean - s.sd[k];
    const double hi = mean + s.sd[k];
    if (log) {
      if (!(mean > 0.0) || !(t > 0.0)) continue;
      // Band edges below zero are pinned to the mean on a log axis.
      if (!(lo > 0.0)) lo = mean;
    }
    pts.push_back({t, mean, lo, hi});
  }
  return pts;
}

void RenderPanel(std::ostream& svg, const std::vector<PolicySummary>& summaries,
                 PlotPanel panel, double x0) {
  const bool log = panel == PlotPanel::kLogLog;
  std::vector<std::vector<Point>> series;
  Axis ax{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), log};
  Axis ay = ax;
  for (const PolicySummary& s : summaries) {
    series.push_back(PanelPoints(s, log));
    for (const Point& p : series.back()) {
      ax.lo = std::min(ax.lo, p.t);
      ax.hi = std::max(ax.hi, p.t);
      ay.lo = std::min(ay.lo, p.lo);
      ay.hi = std::max(ay.hi, p.hi);
    }
  }
  if (!std::isfinite(ax.lo)) {
    ax.lo = 1.0;
    ax.hi = 10.0;
    ay.lo = 1.0;
    ay.hi = 10.0;
  }
  if (!log) ay.lo = std::min(ay.lo, 0.0);
  if (ax.hi <= ax.lo) ax.hi = log ? ax.lo * 10.0 : ax.lo + 1.0;
  if (ay.hi <= ay.lo) ay.hi = log ? ay.lo * 10.0 : ay.lo + 1.0;

  const double pw = kPanelWidth - kMarginLeft - kMarginRight;
  const double ph = kPanelHeight - kMarginTop - kMarginBottom;
  const double left = x0 + kMarginLeft;
  const double top = kMarginTop;
  auto X = [&](double t) { return left + pw * ax.Map(t); };
  auto Y = [&](double v) { return top + ph * (1.0 - ay.Map(v)); };

  svg << "<g class=\"panel\" data-axis=\"" << (log ? "loglog" : "linear") << "\">\n";
  svg << "<text x=\"" << Num(left + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" "
      << "font-size=\"14\">" << (log ? "log-log scale" : "linear scale") << "</text>\n";
  svg << "<rect x=\"" << Num(left) << "\" y=\"" << Num(top) << "\" width=\"" << Num(pw)
      << "\" height=\"" << Num(ph) << "\" fill=\"none\" stroke=\"#000\"/>\n";
  for (double v : Ticks(ax)) {
    svg << "<line x1=\"" << Num(X(v)) << "\" y1=\"" << Num(top + ph) << "\" x2=\""
        << Num(X(v)) << "\" y2=\"" << Num(top + ph + 5) << "\" stroke=\"#000\"/>"
        << "<text x=\"" << Num(X(v)) << "\" y=\"" << Num(top + ph + 18)
        << "\" text-anchor=\"middle\" font-size=\"11\">" << TickLabel(v) << "</text>\n";
  }
  for (double v : Ticks(ay)) {
    svg << "<line x1=\"" << Num(left - 5) << "\" y1=\"" << Num(Y(v)) << "\" x2=\""
        << Num(left) << "\" y2=\"" << Num(Y(v)) << "\" stroke=\"#000\"/>"
        << "<text x=\"" << Num(left - 8) << "\" y=\"" << Num(Y(v) + 4)
        << "\" text-anchor=\"end\" font-size=\"11\">" << TickLabel(v) << "</text>\n";
  }
  svg << "<text x=\"" << Num(left + pw / 2) << "\" y=\"" << Num(top + ph + 38)
      << "\" text-anchor=\"middle\" font-size=\"12\">round t</text>\n";
  svg << "<text transform=\"translate(" << Num(x0 + 16) << "," << Num(top + ph / 2)
      << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"12\">"
      << "cumulative pseudo-regret</text>\n";

  for (size_t k = 0; k < series.size(); ++k) {
    const std::vector<Point>& pts = series[k];
    if (pts.empty()) continue;
    const char* color = kPalette[k % std::size(kPalette)];
    svg << "<polygon class=\"band\" fill=\"" << color << "\" fill-opacity=\"0.18\" "
        << "stroke=\"none\" points=\"";
    for (const Point& p : pts) svg << Num(X(p.t)) << "," << Num(Y(p.hi)) << " ";
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
      svg << Num(X(it->t)) << "," << Num(Y(it->lo)) << " ";
    }
    svg << "\"/>\n";
    svg << "<polyline class=\"series\" data-policy=\"" << Escape(summaries[k].policy)
        << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const Point& p : pts) svg << Num(X(p.t)) << "," << Num(Y(p.mean)) << " ";
    svg << "\"/>\n";
  }
  svg << "</g>\n";
}

}  // namespace

std::string FormatDouble(double x) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

double ParseDouble(std::string_view text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw CsvError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

void WriteTracesCsv(std::ostream& out, const std::vector<RegretTrace>& traces) {
  out << "policy,rep,t,cum_pseudo_regret\n";
  for (const RegretTrace& tr : traces) {
    if (!tr.error.empty()) continue;
    CheckLabel(tr.policy);
    for (size_t k = 0; k < tr.t.size(); ++k) {
      out << tr.policy << ',' << tr.repetition << ',' << tr.t[k] << ','
          << FormatDouble(tr.regret[k]) << '\n';
    }
  }
}

void WriteTracesCsv(const std::filesystem::path& path,
                    const std::vector<RegretTrace>& traces) {
  std::ofstream out = OpenForWrite(path);
  WriteTracesCsv(out, traces);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<RegretTrace> ReadTracesCsv(const std::filesystem::path& path) {
  const auto rows = ReadRows(path, "policy,rep,t,cum_pseudo_regret", 4);
  std::vector<RegretTrace> traces;
  std::map<std::pair<std::string, int>, size_t> index;
  std::map<std::string, int> policy_index;
  for (const auto& row : rows) {
    const int rep = static_cast<int>(ParseInt(row[1]));
    auto [it, inserted] = index.try_emplace({row[0], rep}, traces.size());
    if (inserted) {
      RegretTrace tr;
      tr.policy = row[0];
      tr.repetition = rep;
      auto [pit, unused] = policy_index.try_emplace(
          row[0], static_cast<int>(policy_index.size()));
      tr.policy_index = pit->second;
      traces.push_back(std::move(tr));
    }
    RegretTrace& tr = traces[it->second];
    const std::int64_t t = ParseInt(row[2]);
    if (!tr.t.empty() && t <= tr.t.back()) {
      throw CsvError(path.string() + ": t not increasing for " + row[0]);
    }
    tr.t.push_back(t);
    tr.regret.push_back(ParseDouble(row[3]));
  }
  return traces;
}

void WriteSummaryCsv(std::ostream& out,
                     const std::vector<PolicySummary>& summaries) {
  out << "policy,t,mean,sd,se\n";
  for (const PolicySummary& s : summaries) {
    CheckLabel(s.policy);
    for (size_t k = 0; k < s.t.size(); ++k) {
      out << s.policy << ',' << s.t[k] << ',' << FormatDouble(s.mean[k]) << ','
          << FormatDouble(s.sd[k]) << ',' << FormatDouble(s.se[k]) << '\n';
    }
  }
}

void WriteSummaryCsv(const std::filesystem::path& path,
                     const std::vector<PolicySummary>& summaries) {
  std::ofstream out = OpenForWrite(path);
  WriteSummaryCsv(out, summaries);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<PolicySummary> ReadSummaryCsv(const std::filesystem::path& path) {
  const auto rows = ReadRows(path, "policy,t,mean,sd,se", 5);
  std::vector<PolicySummary> out;
  std::map<std::string, size_t> index;
  for (const auto& row : rows) {
    auto [it, inserted] = index.try_emplace(row[0], out.size());
    if (inserted) {
      out.emplace_back();
      out.back().policy = row[0];
    }
    PolicySummary& s = out[it->second];
    const std::int64_t t = ParseInt(row[1]);
    if (!s.t.empty() && t <= s.t.back()) {
      throw CsvError(path.string() + ": t not increasing for " + row[0]);
    }
    const double sd = ParseDouble(row[3]);
    const double se = ParseDouble(row[4]);
    if (sd < 0.0 || se < 0.0) throw CsvError(path.string() + ": negative sd or se");
    s.t.push_back(t);
    s.mean.push_back(ParseDouble(row[2]));
    s.sd.push_back(sd);
    s.se.push_back(se);
  }
  if (out.empty()) throw CsvError(path.string() + " has no data rows");
  return out;
}

std::vector<PlotPanel> ParsePanels(std::string_view text) {
  std::vector<PlotPanel> panels;
  for (std::string_view name : SplitFields(text)) {
    PlotPanel p;
    if (name == "linear") {
      p = PlotPanel::kLinear;
    } else if (name == "loglog") {
      p = PlotPanel::kLogLog;
    } else {
      throw std::invalid_argument("unknown panel '" + std::string(name) +
                                  "' (expected linear or loglog)");
    }
    if (std::find(panels.begin(), panels.end(), p) != panels.end()) {
      throw std::invalid_argument("panel '" + std::string(name) + "' given twice");
    }
    panels.push_back(p);
  }
  return panels;
}

std::string RenderRegretSvg(const std::vector<PolicySummary>& summaries,
                            const std::vector<PlotPanel>& panels) {
  if (panels.empty()) throw std::invalid_argument("RenderRegretSvg: no panels");
  const double width = kPanelWidth * static_cast<double>(panels.size());
  const int legend_rows = static_cast<int>((summaries.size() + 3) / 4);
  const double height = kPanelHeight + kLegendHeight * legend_rows;
  std::ostringstream svg;
  svg.imbue(std::locale::classic());
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << Num(width)
      << "\" height=\"" << Num(height) << "\" viewBox=\"0 0 " << Num(width) << " "
      << Num(height) << "\" font-family=\"sans-serif\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
  for (size_t k = 0; k < panels.size(); ++k) {
    RenderPanel(svg, summaries, panels[k], kPanelWidth * static_cast<double>(k));
  }
  svg << "<g class=\"legend\">\n";
  for (size_t k = 0; k < summaries.size(); ++k) {
    const double x = kMarginLeft + 150.0 * static_cast<double>(k % 4);
    const double y = kPanelHeight + kLegendHeight * static_cast<double>(k / 4) + 8;
    const char* color = kPalette[k % std::size(kPalette)];
    svg << "<line x1=\"" << Num(x) << "\" y1=\"" << Num(y) << "\" x2=\"" << Num(x + 24)
        << "\" y2=\"" << Num(y) << "\" stroke=\"" << color << "\" stroke-width=\"3\"/>"
        << "<text x=\"" << Num(x + 30) << "\" y=\"" << Num(y + 4)
        << "\" font-size=\"12\">" << Escape(summaries[k].policy) << "</text>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

}  // namespace mset
