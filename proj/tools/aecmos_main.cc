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

// aecmos: command line front end of the evaluation pipeline.

#include <algorithm>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aecmos/analysis.h"
#include "aecmos/campaign.h"
#include "aecmos/corpus.h"
#include "aecmos/csv.h"
#include "aecmos/io.h"
#include "aecmos/metrics.h"
#include "aecmos/rater_sim.h"
#include "aecmos/screening.h"
#include "aecmos/server.h"
#include "aecmos/status.h"
#include "aecmos/stimulus.h"
#include "aecmos/test_builder.h"
#include "aecmos/wav.h"

namespace fs = std::filesystem;

namespace aecmos {
namespace {

absl::StatusOr<Scenario> ScenarioArg(const std::string& token) {
  auto s = ParseScenario(token);
  if (!s) return MakeError(ErrorKind::kSchemaInvalid, "unknown scenario " + token);
  return *s;
}

absl::StatusOr<Scale> ScaleArg(const std::string& token) {
  auto s = ParseScale(token);
  if (!s) return MakeError(ErrorKind::kSchemaInvalid, "unknown scale " + token);
  return *s;
}

// A score given as a number or as its label on `scale`.
absl::StatusOr<int> ScoreArg(Scale scale, const std::string& text) {
  if (text.size() == 1 && text[0] >= '1' && text[0] <= '5') return text[0] - '0';
  if (auto s = ScoreFromLabel(scale, text)) return *s;
  return MakeError(ErrorKind::kSchemaInvalid,
                   "'" + text + "' is not a score on the " +
                       std::string(ScaleToken(scale)) + " scale");
}

std::vector<fs::path> WavFiles(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".wav") out.push_back(e.path());
  }
  std::ranges::sort(out);
  return out;
}

Corpus LoadOrEmpty(const fs::path& csv) {
  if (!fs::exists(csv)) return Corpus();
  auto c = Corpus::Load(csv);
  return c.ok() ? *std::move(c) : Corpus();
}

// ---------------------------------------------------------------------------
// prepare

struct PrepareArgs {
  std::string scenario;
  fs::path r_in, s_out, out;
  double delay_ms = kDefaultEchoDelayS * 1000.0;
  std::string ear = "left";
  std::string condition;
  std::string format = "pcm16";
};

// s_out holds <clip>.wav directly (condition from --condition or the
// directory name) or one subdirectory per condition. r_in holds <clip>.wav.
absl::Status Prepare(const PrepareArgs& a) {
  AECMOS_ASSIGN_OR_RETURN(Scenario scenario, ScenarioArg(a.scenario));
  const Ear ear = a.ear == "right" ? Ear::kRight : Ear::kLeft;
  const SampleFormat format =
      a.format == "float32" ? SampleFormat::kFloat32 : SampleFormat::kPcm16;
  if (!fs::is_directory(a.s_out)) {
    return MakeError(ErrorKind::kIo, "not a directory: " + a.s_out.string());
  }
  std::vector<std::pair<std::string, fs::path>> sources;  // condition, dir
  for (const auto& e : fs::directory_iterator(a.s_out)) {
    if (e.is_directory()) sources.emplace_back(e.path().filename().string(), e.path());
  }
  std::ranges::sort(sources);
  if (sources.empty() || !WavFiles(a.s_out).empty()) {
    sources = {{a.condition.empty() ? fs::absolute(a.s_out).filename().string()
                                    : a.condition,
                a.s_out}};
  }
  fs::create_directories(a.out);
  Corpus manifest;
  for (const auto& [condition, dir] : sources) {
    for (const fs::path& s_path : WavFiles(dir)) {
      const std::string clip = s_path.stem().string();
      ScenarioInputs in;
      in.clip_id = condition + "__" + clip;
      in.condition_id = condition;
      in.scenario = scenario;
      AECMOS_ASSIGN_OR_RETURN(in.s_out, ReadWav(s_path));
      if (scenario != Scenario::kNearEndSingleTalk) {
        AECMOS_ASSIGN_OR_RETURN(in.r_in, ReadWav(a.r_in / (clip + ".wav")));
      }
      AECMOS_ASSIGN_OR_RETURN(Stimulus st,
                              PrepareStimulus(in, a.delay_ms / 1000.0, ear));
      const fs::path wav = fs::absolute(a.out / (in.clip_id + ".wav"));
      AECMOS_RETURN_IF_ERROR(WriteWav(wav, st.audio, format));
      CorpusClip row;
      row.clip_id = st.id;
      row.condition_id = st.condition_id;
      row.scenario = st.scenario;
      row.path = wav;
      row.gain = st.applied_gain;
      row.delay_ms = st.delay_ms;
      manifest.Add(row);
    }
  }
  if (manifest.clips().empty()) {
    return MakeError(ErrorKind::kEmptyCorpus, "no WAV files under " + a.s_out.string());
  }
  AECMOS_RETURN_IF_ERROR(manifest.Save(a.out / "manifest.csv"));
  std::printf("prepared %zu stimuli into %s\n", manifest.clips().size(),
              a.out.string().c_str());
  return absl::OkStatus();
}

// ---------------------------------------------------------------------------
// trap / gold

struct TrapArgs {
  fs::path base, prompt, out, corpus;
  std::string id, scenario, scale, expected;
  double offset_s = 1.0;
};

absl::Status Trap(const TrapArgs& a) {
  AECMOS_ASSIGN_OR_RETURN(Scenario scenario, ScenarioArg(a.scenario));
  AECMOS_ASSIGN_OR_RETURN(Scale scale, ScaleArg(a.scale));
  AECMOS_ASSIGN_OR_RETURN(int score, ScoreArg(scale, a.expected));
  Stimulus base;
  base.id = a.id;
  base.scenario = scenario;
  AECMOS_ASSIGN_OR_RETURN(base.audio, ReadWav(a.base));
  AECMOS_ASSIGN_OR_RETURN(AudioBuffer prompt, ReadWav(a.prompt));
  AECMOS_ASSIGN_OR_RETURN(
      TrappingStimulus trap,
      MakeTrappingStimulus(base, prompt, {scale, score}, a.offset_s));
  fs::create_directories(a.out);
  const fs::path wav = fs::absolute(a.out / (a.id + ".wav"));
  AECMOS_RETURN_IF_ERROR(WriteWav(wav, trap.stimulus.audio, SampleFormat::kPcm16));
  Corpus corpus = LoadOrEmpty(a.corpus);
  CorpusClip row;
  row.clip_id = a.id;
  row.condition_id = "trapping";
  row.scenario = scenario;
  row.path = wav;
  row.kind = ClipKind::kTrapping;
  row.expected = trap.expected_answer;
  corpus.Add(row);
  AECMOS_RETURN_IF_ERROR(corpus.Save(a.corpus));
  std::printf("%s: expects %d (%s) on %s\n", a.id.c_str(), score,
              trap.expected_label.c_str(), a.scale.c_str());
  return absl::OkStatus();
}

struct GoldArgs {
  fs::path clip, corpus;
  std::string id, scenario, scale, expected;
  int tolerance = 1;
};

absl::Status Gold(const GoldArgs& a) {
  AECMOS_ASSIGN_OR_RETURN(Scenario scenario, ScenarioArg(a.scenario));
  AECMOS_ASSIGN_OR_RETURN(Scale scale, ScaleArg(a.scale));
  AECMOS_ASSIGN_OR_RETURN(int score, ScoreArg(scale, a.expected));
  AECMOS_RETURN_IF_ERROR(ReadWav(a.clip).status());
  Corpus corpus = LoadOrEmpty(a.corpus);
  CorpusClip row;
  row.clip_id = a.id;
  row.condition_id = "gold";
  row.scenario = scenario;
  row.path = fs::absolute(a.clip);
  row.kind = ClipKind::kGold;
  row.expected = ScaleAnswer{scale, score};
  row.tolerance = a.tolerance;
  corpus.Add(row);
  return corpus.Save(a.corpus);
}

// ---------------------------------------------------------------------------
// build

struct BuildArgs {
  fs::path corpus, out, config;
  std::string scenario;
  size_t votes = 10;
  size_t task_size = 0;
  size_t gold_per_task = 1;
  uint64_t seed = 1;
  bool single_question = false;
  std::optional<double> pay_usd;
};

absl::Status Build(const BuildArgs& a) {
  AECMOS_ASSIGN_OR_RETURN(Corpus corpus, Corpus::Load(a.corpus));
  std::set<Scenario> scenarios;
  for (const CorpusClip& c : corpus.clips()) {
    if (c.kind == ClipKind::kRating) scenarios.insert(c.scenario);
  }
  Scenario scenario;
  if (!a.scenario.empty()) {
    AECMOS_ASSIGN_OR_RETURN(scenario, ScenarioArg(a.scenario));
  } else if (scenarios.size() == 1) {
    scenario = *scenarios.begin();
  } else {
    return MakeError(ErrorKind::kSchemaInvalid,
                     "corpus mixes scenarios; pass --scenario");
  }

  Corpus used;
  std::vector<std::string> rating;
  std::vector<TrappingDef> traps;
  std::vector<GoldDef> golds;
  for (CorpusClip c : corpus.clips()) {
    if (c.scenario != scenario) continue;
    c.path = fs::absolute(c.path);
    used.Add(c);
  }
  for (const std::string& id : used.RatingClipIds()) rating.push_back(id);
  traps = used.TrappingPool();
  golds = used.GoldPool();

  BuildConfig cfg;
  cfg.scenario = scenario;
  cfg.votes_target = a.votes;
  cfg.task_size = a.task_size;
  cfg.gold_per_task = golds.empty() ? 0 : a.gold_per_task;
  cfg.layout = a.single_question ? QuestionLayout::kSingleQuestion
                                 : QuestionLayout::kTwoQuestion;
  cfg.pay_usd = a.pay_usd;
  AECMOS_ASSIGN_OR_RETURN(std::vector<TaskManifest> tasks,
                          BuildTasks(rating, traps, golds, cfg, a.seed));

  CampaignConfig config;
  if (!a.config.empty()) {
    AECMOS_ASSIGN_OR_RETURN(Json j, ReadJsonFile(a.config));
    AECMOS_ASSIGN_OR_RETURN(config, CampaignConfigFromJson(j));
  }
  config.scenario = scenario;
  fs::create_directories(a.out);
  AECMOS_RETURN_IF_ERROR(WriteManifests(a.out / "tasks.jsonl", tasks));
  AECMOS_RETURN_IF_ERROR(used.Save(a.out / "corpus.csv"));
  AECMOS_RETURN_IF_ERROR(WriteTextFile(a.out / "campaign.json",
                                       CampaignConfigToJson(config).dump(2) + "\n"));
  std::printf("%zu tasks over %zu clips (%s), written to %s\n", tasks.size(),
              rating.size(), std::string(ScenarioToken(scenario)).c_str(),
              a.out.string().c_str());
  return absl::OkStatus();
}

// ---------------------------------------------------------------------------
// serve

TaskServer* g_server = nullptr;

extern "C" void StopServer(int) {
  if (g_server != nullptr) g_server->Stop();
}

absl::Status Serve(const fs::path& dir, const std::string& host, int port) {
  AECMOS_ASSIGN_OR_RETURN(std::unique_ptr<Campaign> campaign, Campaign::Open(dir));
  TaskServer server(*campaign);
  const int bound = server.Bind(host, PortFromEnv(port));
  if (bound < 0) {
    return MakeError(ErrorKind::kIo, "cannot bind " + host + ":" +
                                         std::to_string(PortFromEnv(port)));
  }
  g_server = &server;
  std::signal(SIGINT, StopServer);
  std::signal(SIGTERM, StopServer);
  std::printf("serving %zu tasks on http://%s:%d\n", campaign->manifests().size(),
              host.c_str(), bound);
  std::fflush(stdout);
  server.Listen();
  g_server = nullptr;
  return campaign->WriteSnapshot();
}

// ---------------------------------------------------------------------------
// screen

absl::Status Screen(const fs::path& dir, const fs::path& submissions_path,
                    const fs::path& out) {
  AECMOS_ASSIGN_OR_RETURN(std::unique_ptr<Campaign> campaign, Campaign::Open(dir));
  std::vector<Submission> submissions;
  if (submissions_path.empty()) {
    submissions = campaign->State().submissions;
  } else {
    AECMOS_ASSIGN_OR_RETURN(submissions, ReadSubmissions(submissions_path));
  }
  AECMOS_ASSIGN_OR_RETURN(
      ScreeningReport report,
      ScreenCampaign(submissions, campaign->manifests(), campaign->corpus(),
                     campaign->config().screening));
  fs::create_directories(out);
  AECMOS_RETURN_IF_ERROR(WriteVotesCsv(out / "votes.csv", report.votes));
  AECMOS_RETURN_IF_ERROR(WriteTextFile(out / "screening.json",
                                       ScreeningReportToJson(report).dump(2) + "\n"));
  if (!report.votes.empty()) {
    AECMOS_ASSIGN_OR_RETURN(Aggregation agg, AggregateConditions(report.votes));
    AECMOS_RETURN_IF_ERROR(
        WriteTextFile(out / "conditions.csv", ConditionScoresCsv(agg.conditions)));
  }
  std::printf("%d accepted, %d rejected, %zu votes, %zu banned workers\n",
              report.accepted, report.rejected, report.votes.size(),
              report.banned_workers.size());
  for (const auto& [reason, n] : report.reason_totals) {
    std::printf("  %-20s %d\n", std::string(RejectReasonName(reason)).c_str(), n);
  }
  return absl::OkStatus();
}

// ---------------------------------------------------------------------------
// report

absl::StatusOr<Aggregation> AggregateFile(const fs::path& votes) {
  AECMOS_ASSIGN_OR_RETURN(std::vector<VoteRecord> v, ReadVotesCsv(votes));
  return AggregateConditions(v);
}

absl::Status Emit(const fs::path& out, const std::string& text) {
  if (out.empty()) {
    std::fputs(text.c_str(), stdout);
    return absl::OkStatus();
  }
  return WriteTextFile(out, text);
}

absl::Status ReportRank(const fs::path& votes, const fs::path& csv) {
  AECMOS_ASSIGN_OR_RETURN(Aggregation agg, AggregateFile(votes));
  const RankingTable table = ChallengeTable(agg.conditions);
  if (!csv.empty()) AECMOS_RETURN_IF_ERROR(WriteTextFile(csv, RankingCsv(table)));
  std::fputs(RankingText(table).c_str(), stdout);
  return absl::OkStatus();
}

struct CorrelateArgs {
  fs::path votes, objective, subsets, out;
  std::string metric, scale = "echo", level = "clip";
};

absl::Status ReportCorrelate(const CorrelateArgs& a) {
  AECMOS_ASSIGN_OR_RETURN(Scale scale, ScaleArg(a.scale));
  AECMOS_ASSIGN_OR_RETURN(Aggregation agg, AggregateFile(a.votes));
  AECMOS_ASSIGN_OR_RETURN(std::vector<ObjectiveScore> obj, ReadObjectiveCsv(a.objective));
  std::vector<CorrelationReport> reports;
  if (!a.subsets.empty()) {
    AECMOS_ASSIGN_OR_RETURN(CsvTable t, CsvTable::Read(a.subsets));
    AECMOS_ASSIGN_OR_RETURN(size_t c_clip, t.RequireColumn("clip_id"));
    AECMOS_ASSIGN_OR_RETURN(size_t c_subset, t.RequireColumn("subset"));
    std::map<std::string, std::string> label;
    for (const auto& row : t.rows()) label[row[c_clip]] = row[c_subset];
    std::map<std::string, double> x, y;
    for (const ClipScore& c : agg.clips) {
      if (c.scale == scale) x[c.clip_id] = c.mean;
    }
    for (const ObjectiveScore& o : obj) {
      if (o.metric_name == a.metric) y[o.clip_id] = o.value;
    }
    AECMOS_ASSIGN_OR_RETURN(reports, SubsetCorrelations(x, y, label));
  } else if (a.level == "condition") {
    AECMOS_ASSIGN_OR_RETURN(CorrelationReport r,
                            ConditionObjectiveCorrelation(agg.clips, agg.conditions,
                                                          scale, obj, a.metric));
    reports.push_back(r);
  } else {
    AECMOS_ASSIGN_OR_RETURN(
        CorrelationReport r,
        SubjectiveObjectiveCorrelation(agg.clips, scale, obj, a.metric));
    reports.push_back(r);
  }
  return Emit(a.out, CorrelationCsv(reports));
}

absl::Status ReportRepro(const std::vector<fs::path>& votes,
                         const std::string& scale_token, const fs::path& out) {
  std::vector<std::vector<ConditionScore>> runs;
  for (const fs::path& v : votes) {
    AECMOS_ASSIGN_OR_RETURN(Aggregation agg, AggregateFile(v));
    runs.push_back(agg.conditions);
  }
  std::optional<Scale> scale;
  if (!scale_token.empty()) {
    AECMOS_ASSIGN_OR_RETURN(scale, ScaleArg(scale_token));
  }
  AECMOS_ASSIGN_OR_RETURN(ReproducibilityReport rep, CrossRunReproducibility(runs, scale));
  std::vector<CorrelationReport> reports;
  for (const RunPair& p : rep.pairs) {
    CorrelationReport r = p.report;
    r.name = "run" + std::to_string(p.a) + "~run" + std::to_string(p.b);
    reports.push_back(r);
  }
  return Emit(out, CorrelationCsv(reports));
}

// ---------------------------------------------------------------------------
// simulate

// Population file: {"groups": [{"kind": "reliable"|"spammer"|"biased",
//   "count": N, "noise_sd": s, "bias": b, "attention_p": p, "prefix": "r"}]}
absl::StatusOr<std::vector<PopulationGroup>> ReadPopulation(const fs::path& path) {
  AECMOS_ASSIGN_OR_RETURN(Json j, ReadJsonFile(path));
  std::vector<PopulationGroup> groups;
  try {
    for (const Json& g : j.at("groups")) {
      PopulationGroup pg;
      const std::string kind = g.value("kind", "reliable");
      if (kind == "reliable") {
        pg.profile.kind = RaterKind::kReliable;
      } else if (kind == "spammer") {
        pg.profile.kind = RaterKind::kSpammer;
      } else if (kind == "biased") {
        pg.profile.kind = RaterKind::kBiased;
      } else {
        return MakeError(ErrorKind::kSchemaInvalid, "unknown rater kind " + kind);
      }
      pg.count = g.at("count").get<int>();
      pg.profile.noise_sd = g.value("noise_sd", 0.0);
      pg.profile.bias = g.value("bias", 0.0);
      pg.profile.attention_p = g.value("attention_p", 1.0);
      pg.id_prefix = g.value("prefix", kind + "_");
      if (pg.profile.noise_sd < 0 || pg.profile.attention_p < 0 ||
          pg.profile.attention_p > 1 || pg.count < 0) {
        return MakeError(ErrorKind::kSchemaInvalid, "bad rater group " + g.dump());
      }
      groups.push_back(pg);
    }
  } catch (const Json::exception& e) {
    return MakeError(ErrorKind::kSchemaInvalid, std::string("population: ") + e.what());
  }
  return groups;
}

// Truth file: clip_id,scale,score.
absl::StatusOr<GroundTruth> ReadTruth(const fs::path& path) {
  AECMOS_ASSIGN_OR_RETURN(CsvTable t, CsvTable::Read(path));
  AECMOS_ASSIGN_OR_RETURN(size_t c_clip, t.RequireColumn("clip_id"));
  AECMOS_ASSIGN_OR_RETURN(size_t c_scale, t.RequireColumn("scale"));
  AECMOS_ASSIGN_OR_RETURN(size_t c_score, t.RequireColumn("score"));
  GroundTruth truth;
  for (const auto& row : t.rows()) {
    AECMOS_ASSIGN_OR_RETURN(Scale scale, ScaleArg(row[c_scale]));
    char* end = nullptr;
    const double v = std::strtod(row[c_score].c_str(), &end);
    if (end == row[c_score].c_str() || *end != '\0' || v < kMinScore || v > kMaxScore) {
      return MakeError(ErrorKind::kSchemaInvalid, "bad truth score " + row[c_score]);
    }
    truth.Set(row[c_clip], scale, v);
  }
  return truth;
}

absl::Status Simulate(const fs::path& dir, const fs::path& population_path,
                      const fs::path& truth_path, uint64_t seed, const fs::path& out) {
  AECMOS_ASSIGN_OR_RETURN(std::unique_ptr<Campaign> campaign, Campaign::Open(dir));
  AECMOS_ASSIGN_OR_RETURN(std::vector<PopulationGroup> groups,
                          ReadPopulation(population_path));
  AECMOS_ASSIGN_OR_RETURN(GroundTruth truth, ReadTruth(truth_path));
  const auto population = ExpandPopulation(groups);
  AECMOS_ASSIGN_OR_RETURN(
      std::vector<Submission> subs,
      SimulateRun(campaign->manifests(), population, truth, seed));
  AECMOS_RETURN_IF_ERROR(WriteSubmissions(out, subs));
  std::printf("%zu simulated submissions from %zu raters\n", subs.size(),
              population.size());
  return absl::OkStatus();
}

// ---------------------------------------------------------------------------
// erle

struct ErleArgs {
  fs::path y, e, pairs, out;
  double frame_ms = 20.0;
  std::optional<double> threshold_db;
};

absl::StatusOr<std::pair<double, FramewiseErle>> ErleOf(const fs::path& y,
                                                         const fs::path& e,
                                                         const ErleArgs& a) {
  ErleInput in;
  AECMOS_ASSIGN_OR_RETURN(in.y, ReadWav(y));
  AECMOS_ASSIGN_OR_RETURN(in.e, ReadWav(e));
  AECMOS_ASSIGN_OR_RETURN(double global, Erle(in));
  AECMOS_ASSIGN_OR_RETURN(
      FramewiseErle fw,
      ErleFramewise(in, a.frame_ms,
                    a.threshold_db.value_or(-std::numeric_limits<double>::infinity())));
  return std::pair{global, fw};
}

absl::Status ErleCommand(const ErleArgs& a) {
  if (a.pairs.empty()) {
    AECMOS_ASSIGN_OR_RETURN(auto r, ErleOf(a.y, a.e, a));
    std::printf("erle_db %s\nframewise_mean_db %s (%zu of %zu frames active)\n",
                FormatDouble(r.first).c_str(), FormatDouble(r.second.mean_db).c_str(),
                r.second.active_frames, r.second.frame_db.size());
    return absl::OkStatus();
  }
  AECMOS_ASSIGN_OR_RETURN(CsvTable t, CsvTable::Read(a.pairs));
  AECMOS_ASSIGN_OR_RETURN(size_t c_clip, t.RequireColumn("clip_id"));
  AECMOS_ASSIGN_OR_RETURN(size_t c_y, t.RequireColumn("y"));
  AECMOS_ASSIGN_OR_RETURN(size_t c_e, t.RequireColumn("e"));
  const fs::path base = a.pairs.parent_path();
  const auto resolve = [&](const std::string& p) {
    const fs::path path(p);
    return path.is_relative() ? base / path : path;
  };
  std::ostringstream csv;
  WriteCsvRow(csv, {"clip_id", "metric_name", "value"});
  for (const auto& row : t.rows()) {
    AECMOS_ASSIGN_OR_RETURN(auto r, ErleOf(resolve(row[c_y]), resolve(row[c_e]), a));
    WriteCsvRow(csv, {row[c_clip], "erle", FormatDouble(r.first)});
    WriteCsvRow(csv, {row[c_clip], "erle_framewise", FormatDouble(r.second.mean_db)});
  }
  return Emit(a.out, csv.str());
}

int Report(const absl::Status& status) {
  if (status.ok()) return 0;
  std::fprintf(stderr, "error: %s\n", std::string(status.message()).c_str());
  const auto kind = KindOf(status);
  if (kind) std::fprintf(stderr, "kind: %s\n", std::string(ErrorKindName(*kind)).c_str());
  return 1;
}

}  // namespace
}  // namespace aecmos

int main(int argc, char** argv) {
  using namespace aecmos;
  CLI::App app{"Echo-impairment listening test pipeline"};
  app.require_subcommand(1);
  absl::Status status;

  PrepareArgs prep;
  auto* p = app.add_subcommand("prepare", "Build stimuli from canceller recordings");
  p->add_option("--scenario", prep.scenario, "ne_st | fe_st | dt")->required();
  p->add_option("--r-in", prep.r_in, "Far-end (loopback) WAV directory");
  p->add_option("--s-out", prep.s_out, "Send-output WAV directory")->required();
  p->add_option("--out", prep.out, "Output directory")->required();
  p->add_option("--delay-ms", prep.delay_ms, "Echo delay")->capture_default_str();
  p->add_option("--loopback-ear", prep.ear, "left | right")
      ->check(CLI::IsMember({"left", "right"}))
      ->capture_default_str();
  p->add_option("--condition", prep.condition, "Condition id for a flat --s-out");
  p->add_option("--format", prep.format, "pcm16 | float32")
      ->check(CLI::IsMember({"pcm16", "float32"}))
      ->capture_default_str();
  p->callback([&] {
    if (prep.scenario != "ne_st" && prep.r_in.empty()) {
      throw CLI::ValidationError("--r-in", "required for fe_st and dt");
    }
    status = Prepare(prep);
  });

  TrapArgs trap;
  auto* t = app.add_subcommand("trap", "Splice a spoken prompt into a stimulus");
  t->add_option("--base", trap.base, "Base stimulus WAV")->required();
  t->add_option("--prompt", trap.prompt, "Prompt WAV")->required();
  t->add_option("--id", trap.id, "Clip id")->required();
  t->add_option("--scenario", trap.scenario)->required();
  t->add_option("--scale", trap.scale, "overall | echo | other")->required();
  t->add_option("--expected", trap.expected, "Score or label the prompt asks for")
      ->required();
  t->add_option("--offset-s", trap.offset_s)->capture_default_str();
  t->add_option("--out", trap.out, "Directory for the WAV")->required();
  t->add_option("--corpus", trap.corpus, "Manifest CSV to append to")->required();
  t->callback([&] { status = Trap(trap); });

  GoldArgs gold;
  auto* g = app.add_subcommand("gold", "Register a gold clip with a known answer");
  g->add_option("--clip", gold.clip, "WAV file")->required();
  g->add_option("--id", gold.id)->required();
  g->add_option("--scenario", gold.scenario)->required();
  g->add_option("--scale", gold.scale)->required();
  g->add_option("--expected", gold.expected)->required();
  g->add_option("--tolerance", gold.tolerance)->capture_default_str();
  g->add_option("--corpus", gold.corpus)->required();
  g->callback([&] { status = Gold(gold); });

  BuildArgs build;
  auto* b = app.add_subcommand("build", "Generate task manifests and a campaign");
  b->add_option("--corpus", build.corpus, "Manifest CSV")->required();
  b->add_option("--votes", build.votes)->capture_default_str();
  b->add_option("--task-size", build.task_size, "Rating clips per task (0: default)")
      ->capture_default_str();
  b->add_option("--gold-per-task", build.gold_per_task)->capture_default_str();
  b->add_option("--seed", build.seed)->capture_default_str();
  b->add_option("--scenario", build.scenario);
  b->add_flag("--single-question", build.single_question,
              "One echo question for FE-ST/DT instead of two");
  b->add_option("--pay-usd", build.pay_usd);
  b->add_option("--config", build.config, "campaign.json template");
  b->add_option("--out", build.out)->required();
  b->callback([&] { status = Build(build); });

  fs::path serve_dir;
  std::string host = "127.0.0.1";
  int port = 8080;
  auto* s = app.add_subcommand("serve", "Run the task server (AECMOS_PORT overrides)");
  s->add_option("--campaign", serve_dir)->required();
  s->add_option("--host", host)->capture_default_str();
  s->add_option("--port", port)->capture_default_str();
  s->callback([&] { status = Serve(serve_dir, host, port); });

  fs::path screen_dir, screen_subs, screen_out;
  auto* sc = app.add_subcommand("screen", "Screen submissions, write accepted votes");
  sc->add_option("--campaign", screen_dir)->required();
  sc->add_option("--submissions", screen_subs, "JSONL file (default: the store)");
  sc->add_option("--out", screen_out)->required();
  sc->callback([&] { status = Screen(screen_dir, screen_subs, screen_out); });

  auto* r = app.add_subcommand("report", "Ranking, correlation and reproducibility");
  r->require_subcommand(1);
  fs::path rank_votes, rank_csv;
  auto* rr = r->add_subcommand("rank", "Challenge ranking table");
  rr->add_option("--votes", rank_votes)->required();
  rr->add_option("--csv", rank_csv);
  rr->callback([&] { status = ReportRank(rank_votes, rank_csv); });
  CorrelateArgs corr;
  auto* rc = r->add_subcommand("correlate", "Subjective vs objective correlation");
  rc->add_option("--votes", corr.votes)->required();
  rc->add_option("--objective", corr.objective, "clip_id,metric_name,value CSV")
      ->required();
  rc->add_option("--metric", corr.metric)->required();
  rc->add_option("--scale", corr.scale)->capture_default_str();
  rc->add_option("--level", corr.level, "clip | condition")
      ->check(CLI::IsMember({"clip", "condition"}))
      ->capture_default_str();
  rc->add_option("--subsets", corr.subsets, "clip_id,subset CSV");
  rc->add_option("--out", corr.out);
  rc->callback([&] { status = ReportCorrelate(corr); });
  std::vector<fs::path> repro_votes;
  std::string repro_scale;
  fs::path repro_out;
  auto* rp = r->add_subcommand("repro", "Run-to-run reproducibility");
  rp->add_option("--votes", repro_votes, "One votes CSV per run")->required();
  rp->add_option("--scale", repro_scale);
  rp->add_option("--out", repro_out);
  rp->callback([&] { status = ReportRepro(repro_votes, repro_scale, repro_out); });

  fs::path sim_dir, sim_pop, sim_truth, sim_out;
  uint64_t sim_seed = 1;
  auto* sm = app.add_subcommand("simulate", "Answer every task with simulated raters");
  sm->add_option("--campaign", sim_dir)->required();
  sm->add_option("--population", sim_pop, "Population JSON")->required();
  sm->add_option("--truth", sim_truth, "clip_id,scale,score CSV")->required();
  sm->add_option("--seed", sim_seed)->capture_default_str();
  sm->add_option("--out", sim_out, "Submissions JSONL")->required();
  sm->callback([&] { status = Simulate(sim_dir, sim_pop, sim_truth, sim_seed, sim_out); });

  ErleArgs erle;
  auto* e = app.add_subcommand("erle", "Echo return loss enhancement");
  e->add_option("--y", erle.y, "Microphone WAV");
  e->add_option("--e", erle.e, "Residual WAV");
  e->add_option("--pairs", erle.pairs, "clip_id,y,e CSV for batch mode");
  e->add_option("--frame-ms", erle.frame_ms)->capture_default_str();
  e->add_option("--threshold-db", erle.threshold_db, "Frame activity gate");
  e->add_option("--out", erle.out, "Objective CSV (batch mode)");
  e->callback([&] {
    if (erle.pairs.empty() && (erle.y.empty() || erle.e.empty())) {
      throw CLI::ValidationError("erle", "give --y and --e, or --pairs");
    }
    status = ErleCommand(erle);
  });

  CLI11_PARSE(app, argc, argv);
  return Report(status);
}
