// Copyright 2026 The aecmos Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "aecmos/analysis.h"

#include <algorithm>
#include <array>
#include <cstdio>
#include <set>
#include <sstream>

#include "aecmos/csv.h"
#include "aecmos/status.h"

namespace aecmos {

namespace {

struct Column {
  Scenario scenario;
  Scale scale;
  const char* name;
};

constexpr std::array<Column, 4> kColumns = {{
    {Scenario::kNearEndSingleTalk, Scale::kOverall, "st_ne_mos"},
    {Scenario::kFarEndSingleTalk, Scale::kEcho, "st_fe_echo_dmos"},
    {Scenario::kDoubleTalk, Scale::kEcho, "dt_echo_dmos"},
    {Scenario::kDoubleTalk, Scale::kOther, "dt_other_dmos"},
}};

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

RankingTable ChallengeTable(std::span<const ConditionScore> scores) {
  std::vector<std::string> order;
  std::map<std::string, std::array<std::optional<double>, 4>> values;
  for (const ConditionScore& s : scores) {
    if (!values.contains(s.condition_id)) order.push_back(s.condition_id);
    auto& slot = values[s.condition_id];
    for (size_t c = 0; c < kColumns.size(); ++c) {
      if (kColumns[c].scenario == s.scenario && kColumns[c].scale == s.scale) {
        slot[c] = s.mean;
      }
    }
  }

  RankingTable table;
  for (const std::string& model : order) {
    const auto& v = values[model];
    IncompleteModel missing{model, {}};
    for (size_t c = 0; c < kColumns.size(); ++c) {
      if (!v[c].has_value()) missing.missing.push_back(kColumns[c].name);
    }
    if (!missing.missing.empty()) {
      table.incomplete.push_back(std::move(missing));
      continue;
    }
    RankingRow row;
    row.model_id = model;
    row.st_ne_mos = *v[0];
    row.st_fe_echo_dmos = *v[1];
    row.dt_echo_dmos = *v[2];
    row.dt_other_dmos = *v[3];
    row.overall = (row.st_ne_mos + row.st_fe_echo_dmos + row.dt_echo_dmos +
                   row.dt_other_dmos) /
                  4.0;
    table.rows.push_back(std::move(row));
  }
  std::ranges::stable_sort(table.rows, std::ranges::greater{},
                           &RankingRow::overall);
  return table;
}

std::string RankingCsv(const RankingTable& table) {
  std::ostringstream out;
  WriteCsvRow(out, {"rank", "model_id", "st_ne_mos", "st_fe_echo_dmos",
                    "dt_echo_dmos", "dt_other_dmos", "overall"});
  for (size_t i = 0; i < table.rows.size(); ++i) {
    const RankingRow& r = table.rows[i];
    WriteCsvRow(out, {std::to_string(i + 1), r.model_id,
                      FormatDouble(r.st_ne_mos), FormatDouble(r.st_fe_echo_dmos),
                      FormatDouble(r.dt_echo_dmos),
                      FormatDouble(r.dt_other_dmos), FormatDouble(r.overall)});
  }
  return out.str();
}

std::string RankingText(const RankingTable& table) {
  size_t id_width = 5;
  for (const RankingRow& r : table.rows) {
    id_width = std::max(id_width, r.model_id.size());
  }
  std::ostringstream out;
  char line[512];
  std::snprintf(line, sizeof(line), "%-4s  %-*s  %9s  %15s  %12s  %13s  %7s\n",
                "Rank", static_cast<int>(id_width), "Model", "ST NE MOS",
                "ST FE Echo DMOS", "DT Echo DMOS", "DT Other DMOS", "Overall");
  out << line;
  for (size_t i = 0; i < table.rows.size(); ++i) {
    const RankingRow& r = table.rows[i];
    std::snprintf(line, sizeof(line),
                  "%-4zu  %-*s  %9s  %15s  %12s  %13s  %7s\n", i + 1,
                  static_cast<int>(id_width), r.model_id.c_str(),
                  Fixed(r.st_ne_mos, 3).c_str(),
                  Fixed(r.st_fe_echo_dmos, 3).c_str(),
                  Fixed(r.dt_echo_dmos, 3).c_str(),
                  Fixed(r.dt_other_dmos, 3).c_str(),
                  Fixed(r.overall, 3).c_str());
    out << line;
  }
  for (const IncompleteModel& m : table.incomplete) {
    out << "incomplete: " << m.model_id << " (missing";
    for (const std::string& col : m.missing) out << ' ' << col;
    out << ")\n";
  }
  return out.str();
}

absl::StatusOr<CorrelationReport> CorrelateKeyed(
    std::string name, const std::map<std::string, double>& x,
    const std::map<std::string, double>& y) {
  std::vector<double> xs, ys;
  for (const auto& [key, xv] : x) {
    auto it = y.find(key);
    if (it == y.end()) continue;
    xs.push_back(xv);
    ys.push_back(it->second);
  }
  if (xs.size() < 3) {
    return MakeError(ErrorKind::kTooFewPairs,
                     name + ": " + std::to_string(xs.size()) +
                         " matched pairs, need 3");
  }
  CorrelationReport report;
  report.name = std::move(name);
  report.n = xs.size();
  report.excluded_x = x.size() - xs.size();
  report.excluded_y = y.size() - ys.size();
  AECMOS_ASSIGN_OR_RETURN(report.pcc,
                          Correlate(xs, ys, CorrelationMethod::kPearson));
  AECMOS_ASSIGN_OR_RETURN(report.srcc,
                          Correlate(xs, ys, CorrelationMethod::kSpearman));
  return report;
}

namespace {

std::map<std::string, double> ObjectiveByClip(
    std::span<const ObjectiveScore> objective, const std::string& metric) {
  std::map<std::string, double> out;
  for (const ObjectiveScore& o : objective) {
    if (o.metric_name == metric) out[o.clip_id] = o.value;
  }
  return out;
}

}  // namespace

absl::StatusOr<CorrelationReport> SubjectiveObjectiveCorrelation(
    std::span<const ClipScore> subjective, Scale scale,
    std::span<const ObjectiveScore> objective, const std::string& metric) {
  std::map<std::string, double> subj;
  for (const ClipScore& c : subjective) {
    if (c.scale == scale) subj[c.clip_id] = c.mean;
  }
  return CorrelateKeyed(std::string(ScaleToken(scale)) + "~" + metric, subj,
                        ObjectiveByClip(objective, metric));
}

absl::StatusOr<CorrelationReport> ConditionObjectiveCorrelation(
    std::span<const ClipScore> subjective,
    std::span<const ConditionScore> conditions, Scale scale,
    std::span<const ObjectiveScore> objective, const std::string& metric) {
  const std::map<std::string, double> by_clip =
      ObjectiveByClip(objective, metric);
  std::map<std::string, std::pair<double, size_t>> sums;
  std::set<std::string> seen;
  for (const ClipScore& c : subjective) {
    if (c.scale != scale || !seen.insert(c.clip_id).second) continue;
    auto it = by_clip.find(c.clip_id);
    if (it == by_clip.end()) continue;
    auto& [sum, n] = sums[c.condition_id];
    sum += it->second;
    ++n;
  }
  std::map<std::string, double> objective_means;
  for (const auto& [cond, sn] : sums) {
    objective_means[cond] = sn.first / static_cast<double>(sn.second);
  }
  std::map<std::string, double> subj;
  for (const ConditionScore& c : conditions) {
    if (c.scale == scale) subj[c.condition_id] = c.mean;
  }
  return CorrelateKeyed(
      "condition:" + std::string(ScaleToken(scale)) + "~" + metric, subj,
      objective_means);
}

absl::StatusOr<std::vector<CorrelationReport>> SubsetCorrelations(
    const std::map<std::string, double>& x,
    const std::map<std::string, double>& y,
    const std::map<std::string, std::string>& subset_of) {
  std::map<std::string, std::pair<std::map<std::string, double>,
                                  std::map<std::string, double>>>
      groups;
  for (const auto& [key, label] : subset_of) {
    if (auto it = x.find(key); it != x.end()) groups[label].first[key] = it->second;
    if (auto it = y.find(key); it != y.end()) groups[label].second[key] = it->second;
  }
  std::vector<CorrelationReport> reports;
  for (const auto& [label, xy] : groups) {
    auto r = CorrelateKeyed(label, xy.first, xy.second);
    if (r.ok()) {
      reports.push_back(*std::move(r));
    } else if (!IsKind(r.status(), ErrorKind::kTooFewPairs)) {
      return r.status();
    }
  }
  AECMOS_ASSIGN_OR_RETURN(CorrelationReport all, CorrelateKeyed("all", x, y));
  reports.push_back(std::move(all));
  return reports;
}

const CorrelationReport& ReproducibilityReport::Pair(size_t i, size_t j) const {
  const size_t a = std::min(i, j);
  const size_t b = std::max(i, j);
  for (const RunPair& p : pairs) {
    if (p.a == a && p.b == b) return p.report;
  }
  return pairs.front().report;
}

absl::StatusOr<ReproducibilityReport> CrossRunReproducibility(
    std::span<const std::vector<ConditionScore>> runs,
    std::optional<Scale> scale) {
  if (runs.size() < 2) {
    return MakeError(ErrorKind::kTooFewPairs,
                     "reproducibility needs at least two runs");
  }
  std::vector<std::map<std::string, double>> vectors;
  for (const auto& run : runs) {
    std::map<std::string, double> v;
    for (const ConditionScore& c : run) {
      if (scale && c.scale != *scale) continue;
      v[c.condition_id + "|" + std::string(ScenarioToken(c.scenario)) + "|" +
        std::string(ScaleToken(c.scale))] = c.mean;
    }
    vectors.push_back(std::move(v));
  }
  for (size_t r = 1; r < vectors.size(); ++r) {
    const bool same = std::ranges::equal(vectors[r], vectors[0], {},
                                         &std::pair<const std::string, double>::first,
                                         &std::pair<const std::string, double>::first);
    if (!same) {
      return MakeError(ErrorKind::kConditionMismatch,
                       "run " + std::to_string(r) +
                           " covers different conditions than run 0");
    }
  }
  ReproducibilityReport report;
  report.runs = runs.size();
  report.conditions = vectors[0].size();
  for (size_t a = 0; a < vectors.size(); ++a) {
    for (size_t b = a + 1; b < vectors.size(); ++b) {
      AECMOS_ASSIGN_OR_RETURN(
          CorrelationReport r,
          CorrelateKeyed("run" + std::to_string(a) + "~run" + std::to_string(b),
                         vectors[a], vectors[b]));
      report.pairs.push_back({a, b, std::move(r)});
    }
  }
  return report;
}

std::string CorrelationCsv(std::span<const CorrelationReport> reports) {
  std::ostringstream out;
  WriteCsvRow(out, {"name", "n", "pcc", "srcc", "excluded_x", "excluded_y"});
  for (const CorrelationReport& r : reports) {
    WriteCsvRow(out, {r.name, std::to_string(r.n), FormatDouble(r.pcc),
                      FormatDouble(r.srcc), std::to_string(r.excluded_x),
                      std::to_string(r.excluded_y)});
  }
  return out.str();
}

}  // namespace aecmos
