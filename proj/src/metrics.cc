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

#include "aecmos/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "aecmos/status.h"

namespace aecmos {

namespace {

absl::Status CheckErleInput(const ErleInput& input) {
  if (!input.y.is_mono() || !input.e.is_mono()) {
    return MakeError(ErrorKind::kNotMono, "ERLE expects mono signals");
  }
  if (input.y.sample_rate() != input.e.sample_rate()) {
    return MakeError(ErrorKind::kSampleRateMismatch,
                     "y and e sample rates differ");
  }
  if (input.y.num_frames() != input.e.num_frames()) {
    return MakeError(ErrorKind::kLengthMismatch,
                     std::to_string(input.y.num_frames()) + " vs " +
                         std::to_string(input.e.num_frames()) + " samples");
  }
  if (input.y.num_frames() == 0) {
    return MakeError(ErrorKind::kEmptySignal, "ERLE of an empty signal");
  }
  return absl::OkStatus();
}

double MeanSquare(std::span<const float> x) {
  double acc = 0.0;
  for (float v : x) acc += double{v} * v;
  return acc / static_cast<double>(x.size());
}

double ErleFromEnergies(double y_energy, double e_energy, double floor) {
  if (e_energy <= floor) {
    // Residual at or below the floor counts as full cancellation unless the
    // microphone signal is silent as well.
    return y_energy <= floor ? 0.0 : kErleCapDb;
  }
  const double db = 10.0 * std::log10(y_energy / e_energy);
  return std::clamp(db, -kErleCapDb, kErleCapDb);
}

}  // namespace

absl::StatusOr<double> Erle(const ErleInput& input, double floor) {
  AECMOS_RETURN_IF_ERROR(CheckErleInput(input));
  return ErleFromEnergies(MeanSquare(input.y.channel(0)),
                          MeanSquare(input.e.channel(0)), floor);
}

absl::StatusOr<FramewiseErle> ErleFramewise(const ErleInput& input,
                                            double frame_ms,
                                            double activity_threshold_db,
                                            double floor) {
  AECMOS_RETURN_IF_ERROR(CheckErleInput(input));
  const auto frame_len = static_cast<size_t>(
      std::llround(frame_ms * input.y.sample_rate() / 1000.0));
  if (frame_len < 1) {
    return MakeError(ErrorKind::kEmptySignal,
                     "frame shorter than one sample");
  }
  std::span<const float> y = input.y.channel(0);
  std::span<const float> e = input.e.channel(0);
  const double global_y = MeanSquare(y);
  const bool gating_off =
      activity_threshold_db == -std::numeric_limits<double>::infinity();

  FramewiseErle out;
  double active_sum = 0.0;
  for (size_t start = 0; start < y.size(); start += frame_len) {
    const size_t len = std::min(frame_len, y.size() - start);
    const double fy = MeanSquare(y.subspan(start, len));
    const double fe = MeanSquare(e.subspan(start, len));
    out.frame_db.push_back(ErleFromEnergies(fy, fe, floor));
    const double rel_db = 10.0 * std::log10(fy / global_y);
    const bool active = gating_off || rel_db >= activity_threshold_db;
    out.active.push_back(active);
    if (active) {
      ++out.active_frames;
      active_sum += out.frame_db.back();
    }
  }
  if (out.active_frames == 0) {
    return MakeError(ErrorKind::kEmptySignal, "no active frames");
  }
  out.mean_db = active_sum / static_cast<double>(out.active_frames);
  return out;
}

std::vector<double> AverageRanks(std::span<const double> values) {
  std::vector<size_t> order(values.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::ranges::stable_sort(
      order, [&](size_t a, size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    // Positions i..j-1 are tied; 1-based ranks i+1..j average to (i+j+1)/2.
    const double rank = 0.5 * static_cast<double>(i + j + 1);
    for (size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

namespace {

absl::StatusOr<double> Pearson(std::span<const double> x,
                               std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    return MakeError(ErrorKind::kDegenerateInput, "constant input vector");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace

absl::StatusOr<double> Correlate(std::span<const double> x,
                                 std::span<const double> y,
                                 CorrelationMethod method) {
  if (x.size() != y.size()) {
    return MakeError(ErrorKind::kLengthMismatch,
                     std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()));
  }
  if (x.size() < 3) {
    return MakeError(ErrorKind::kDegenerateInput,
                     "correlation needs at least 3 pairs");
  }
  for (size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      return MakeError(ErrorKind::kDegenerateInput, "non-finite value");
    }
  }
  if (method == CorrelationMethod::kPearson) return Pearson(x, y);
  const std::vector<double> rx = AverageRanks(x);
  const std::vector<double> ry = AverageRanks(y);
  return Pearson(rx, ry);
}

double VoteMoments::StdDev() const {
  if (n < 2) return 0.0;
  // n * sum_sq - sum^2 is an exact integer, so this is free of cancellation.
  const double num = static_cast<double>(n * sum_sq - sum * sum);
  return std::sqrt(num / (static_cast<double>(n) * static_cast<double>(n - 1)));
}

double VoteMoments::Ci95() const {
  if (n < 2) return 0.0;
  return 1.96 * StdDev() / std::sqrt(static_cast<double>(n));
}

void VoteAggregator::Add(const VoteRecord& vote) {
  conditions_[{vote.condition_id, vote.scenario, vote.scale}].Add(vote.score);
  clips_[{vote.clip_id, vote.condition_id, vote.scenario, vote.scale}].Add(
      vote.score);
}

void VoteAggregator::Merge(const VoteAggregator& other) {
  for (const auto& [key, m] : other.conditions_) conditions_[key].Merge(m);
  for (const auto& [key, m] : other.clips_) clips_[key].Merge(m);
}

std::vector<ConditionScore> VoteAggregator::ConditionScores() const {
  std::vector<ConditionScore> out;
  out.reserve(conditions_.size());
  for (const auto& [key, m] : conditions_) {
    const auto& [condition, scenario, scale] = key;
    out.push_back({condition, scenario, scale, m.Mean(), m.n, m.StdDev(),
                   m.Ci95()});
  }
  return out;
}

std::vector<ClipScore> VoteAggregator::ClipScores() const {
  std::vector<ClipScore> out;
  out.reserve(clips_.size());
  for (const auto& [key, m] : clips_) {
    const auto& [clip, condition, scenario, scale] = key;
    out.push_back({clip, condition, scenario, scale, m.Mean(), m.n});
  }
  return out;
}

absl::StatusOr<Aggregation> AggregateConditions(
    std::span<const VoteRecord> votes) {
  if (votes.empty()) {
    return MakeError(ErrorKind::kEmptyGroup, "no votes to aggregate");
  }
  VoteAggregator agg;
  for (const VoteRecord& v : votes) {
    if (!IsValidScore(v.score)) {
      return MakeError(ErrorKind::kSchemaInvalid,
                       "vote score " + std::to_string(v.score) +
                           " outside 1..5");
    }
    agg.Add(v);
  }
  return Aggregation{agg.ConditionScores(), agg.ClipScores()};
}

}  // namespace aecmos
