// Copyright 2026 The Lesion Retrieval Authors.
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

// Command-line front end: ingest, query, eval, bench, serve, plus synth (toy
// data) and loss (contrastive objectives over an embedding batch).

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <fmt/core.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "lesion/diagnosis.h"
#include "lesion/error.h"
#include "lesion/eval/classification.h"
#include "lesion/eval/reid.h"
#include "lesion/eval/report.h"
#include "lesion/eval/speed.h"
#include "lesion/eval/synthetic.h"
#include "lesion/io/binary.h"
#include "lesion/io/embedding_file.h"
#include "lesion/losses.h"
#include "lesion/service/http_server.h"
#include "lesion/service/pipeline.h"
#include "lesion/snapshot.h"

namespace {

using lesion::ErrorCode;
namespace eval = lesion::eval;
namespace io = lesion::io;
namespace service = lesion::service;

// Writes the JSON report to `path` ("-" = stdout).
void EmitJson(const std::string& path, const nlohmann::json& j) {
  const std::string text = j.dump(2) + "\n";
  if (path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
  } else {
    io::WriteFile(path, std::vector<char>(text.begin(), text.end()));
  }
}

std::vector<lesion::MultiViewScene> ScenesFromFile(const io::EmbeddingFile& file,
                                                   const std::map<uint64_t, int32_t>& labels) {
  std::vector<lesion::ViewEmbedding> views;
  std::map<uint64_t, int32_t> row_labels;
  for (const auto& row : file.rows) {
    views.push_back(row.view);
    if (row.label != lesion::kUnlabeled) row_labels[row.view.polyp_id] = row.label;
  }
  auto scenes = lesion::GroupByPolyp(views);
  for (auto& s : scenes) {
    if (auto it = labels.find(s.polyp_id); it != labels.end()) {
      s.label = it->second;
    } else if (auto jt = row_labels.find(s.polyp_id); jt != row_labels.end()) {
      s.label = jt->second;
    }
  }
  return scenes;
}

struct IngestArgs {
  std::string embeddings, labels, out;
  bool no_normalize = false;
  std::optional<uint32_t> hash_bits;
  uint32_t leaf_size = 32;
  uint64_t seed = 0;
};

struct QueryArgs {
  std::string db, input, metric = "hamming";
  size_t k = lesion::kDefaultK;
  bool exclude_self = false;
  bool no_normalize = false;
};

struct ReidArgs {
  std::string embeddings, split = "all", space = "both", json;
  bool macro = false;
  bool no_normalize = false;
};

struct ClsArgs {
  std::string db, json;
  size_t folds = 5;
  uint64_t seed = 0;
  size_t k = lesion::kDefaultK;
};

struct BenchArgs {
  std::string dist = "clustered", json;
  eval::SpeedBenchmarkConfig cfg;
};

struct ServeArgs {
  service::ServiceConfig cfg;
  std::string metric = "hamming";
  bool no_normalize = false;
};

struct SynthArgs {
  std::string out, labels_out;
  eval::SyntheticConfig cfg;
};

struct LossArgs {
  std::string embeddings, pairs, level = "image";
  double temperature = 0.05;
  bool raw_distances = false;
};

int Ingest(const IngestArgs& a) {
  service::IngestOptions opts;
  opts.fusion.normalize_inputs = !a.no_normalize;
  opts.hash_bits = a.hash_bits;
  opts.index_params = {a.leaf_size, a.seed};
  std::vector<std::string> warnings;
  const size_t n = service::RunIngest(a.embeddings, a.labels, a.out, opts, &warnings);
  for (const auto& w : warnings) fmt::print(stderr, "warning: {}\n", w);
  fmt::print("{} records written to {}\n", n, a.out);
  return 0;
}

int Query(const QueryArgs& a) {
  const lesion::CaseDatabase db(lesion::LoadSnapshot(a.db));
  service::QueryOptions opts;
  opts.k = a.k;
  opts.metric = service::ParseMetric(a.metric);
  opts.exclude_self = a.exclude_self;
  opts.fusion.normalize_inputs = !a.no_normalize;
  const std::string out = service::RunQuery(db, io::ReadEmbeddingFile(a.input), opts);
  std::fwrite(out.data(), 1, out.size(), stdout);
  return 0;
}

int EvalReid(const ReidArgs& a) {
  const auto scenes = ScenesFromFile(io::ReadEmbeddingFile(a.embeddings), {});
  std::vector<eval::ViewSplit> splits;
  for (auto& s : eval::ViewAblationSplits()) {
    if (a.split == "all" || a.split == s.name) splits.push_back(std::move(s));
  }
  if (splits.empty()) {
    throw lesion::Error(ErrorCode::kInvalidArgument, "unknown split '" + a.split + "'");
  }
  std::vector<eval::ScoreSpace> spaces;
  if (a.space == "cosine" || a.space == "both") spaces.push_back(eval::ScoreSpace::kCosine);
  if (a.space == "hamming" || a.space == "both") spaces.push_back(eval::ScoreSpace::kHamming);

  lesion::FusionConfig fusion;
  fusion.normalize_inputs = !a.no_normalize;
  std::vector<eval::MetricsReport> reports;
  for (auto space : spaces) {
    for (auto& r : eval::ReidBenchmark(scenes, splits, space, fusion, a.macro)) {
      reports.push_back(std::move(r));
    }
  }
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : reports) j.push_back(eval::ToJson(r));
  if (a.json != "-") fmt::print("{}", eval::FormatReidTable(reports));
  if (!a.json.empty()) EmitJson(a.json, {{"ap_average", a.macro ? "macro" : "micro"}, {"reports", j}});
  return 0;
}

int EvalCls(const ClsArgs& a) {
  const lesion::CaseDatabase db(lesion::LoadSnapshot(a.db));
  const auto report = eval::EvaluateKnnClassification(db, {a.folds, a.seed, a.k});
  if (a.json != "-") fmt::print("{}", eval::FormatClassificationTable(report));
  if (!a.json.empty()) EmitJson(a.json, eval::ToJson(report));
  return 0;
}

int Bench(BenchArgs a) {
  if (a.dist == "clustered") {
    a.cfg.distribution = eval::DataDistribution::kClustered;
  } else if (a.dist == "uniform") {
    a.cfg.distribution = eval::DataDistribution::kUniform;
  } else {
    throw lesion::Error(ErrorCode::kInvalidArgument, "unknown distribution '" + a.dist + "'");
  }
  const auto report = eval::RunSpeedBenchmark(a.cfg);
  size_t mismatches = 0;
  for (size_t q = 0; q < report.tree_results.size(); ++q) {
    mismatches += report.tree_results[q] != report.hamming_results[q];
  }
  if (a.json != "-") {
    fmt::print("{}", eval::FormatSpeedTable(report));
    fmt::print("ball tree vs linear scan: {} of {} queries differ\n", mismatches,
               report.tree_results.size());
  }
  if (!a.json.empty()) EmitJson(a.json, eval::ToJson(report));
  return mismatches == 0 ? 0 : 1;
}

int Serve(ServeArgs a) {
  a.cfg.metric = service::ParseMetric(a.metric);
  a.cfg.fusion.normalize_inputs = !a.no_normalize;
  return service::RunServe(a.cfg);
}

int Synth(const SynthArgs& a) {
  const auto scenes = eval::GenerateScenes(a.cfg);
  io::EmbeddingFile file;
  file.dimension = a.cfg.dim;
  uint64_t row_id = 0;
  std::string sidecar;
  for (const auto& s : scenes) {
    for (const auto& v : s.views) file.rows.push_back({row_id++, s.label, v});
    sidecar += nlohmann::json{{"polyp_id", s.polyp_id}, {"label", s.label}}.dump() + "\n";
  }
  io::WriteEmbeddingFile(a.out, file);
  if (!a.labels_out.empty()) {
    io::WriteFile(a.labels_out, std::vector<char>(sidecar.begin(), sidecar.end()));
  }
  fmt::print("{} polyps x {} views written to {}\n", scenes.size(), a.cfg.views_per_polyp,
             a.out);
  return 0;
}

int Loss(const LossArgs& a) {
  const auto file = io::ReadEmbeddingFile(a.embeddings);
  lesion::EmbeddingBatch batch;
  for (const auto& row : file.rows) batch.push_back(row.view.values);
  const lesion::PositivePairSet pairs(batch.size(), io::ReadPairSidecar(a.pairs));
  const auto space = a.raw_distances ? lesion::DistanceSpace::kRaw
                                     : lesion::DistanceSpace::kNormalized;
  const auto level = a.level == "scene" ? lesion::EntropyLevel::kScene
                                        : lesion::EntropyLevel::kImage;
  nlohmann::json j;
  j["batch_size"] = batch.size();
  j["temperature"] = a.temperature;
  j["infonce_exclusive"] = lesion::InfoNceExclusive(batch, pairs, a.temperature);
  j["infonce_inclusive"] = lesion::InfoNceInclusive(batch, pairs, a.temperature);
  try {
    j["entropy"] = lesion::EntropyRegularizer(batch, pairs, level, space);
  } catch (const lesion::Error& e) {
    if (e.code() != ErrorCode::kNoNegatives) throw;
    j["entropy"] = nullptr;
  }
  fmt::print("{}\n", j.dump());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact kNN retrieval and diagnosis over binary lesion codes"};
  app.require_subcommand(1);
  int exit_code = 0;

  IngestArgs ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Fuse, quantize and snapshot an embedding file");
  c_ingest->add_option("--embeddings", ingest.embeddings, "Embedding file")->required();
  c_ingest->add_option("--labels", ingest.labels, "JSONL label sidecar");
  c_ingest->add_option("--out", ingest.out, "Snapshot to write")->required();
  c_ingest->add_flag("--no-normalize", ingest.no_normalize, "Average views without normalizing");
  c_ingest->add_option("--hash-bits", ingest.hash_bits, "Code length K (<= D)");
  c_ingest->add_option("--leaf-size", ingest.leaf_size, "Ball tree leaf size")->check(CLI::PositiveNumber);
  c_ingest->add_option("--seed", ingest.seed, "Ball tree build seed");
  c_ingest->callback([&] { exit_code = Ingest(ingest); });

  QueryArgs query;
  auto* c_query = app.add_subcommand("query", "Retrieve neighbors and diagnose query polyps");
  c_query->add_option("--db", query.db, "Snapshot")->required();
  c_query->add_option("--input", query.input, "Embedding file of queries")->required();
  c_query->add_option("--k", query.k, "Neighbors")->check(CLI::PositiveNumber);
  c_query->add_option("--metric", query.metric, "hamming or cosine")
      ->check(CLI::IsMember({"hamming", "cosine"}));
  c_query->add_flag("--exclude-self", query.exclude_self, "Skip the query's own polyp");
  c_query->add_flag("--no-normalize", query.no_normalize, "Average views without normalizing");
  c_query->callback([&] { exit_code = Query(query); });

  auto* c_eval = app.add_subcommand("eval", "Evaluation protocols");
  c_eval->require_subcommand(1);
  ReidArgs reid;
  auto* c_reid = c_eval->add_subcommand("reid", "Re-identification over the view ablation");
  c_reid->add_option("--embeddings", reid.embeddings, "Multi-view embedding file")->required();
  c_reid->add_option("--split", reid.split, "Split name such as Q1|R1, or all");
  c_reid->add_option("--space", reid.space, "cosine, hamming or both")
      ->check(CLI::IsMember({"cosine", "hamming", "both"}));
  c_reid->add_flag("--macro", reid.macro, "Per-query AP instead of pooled AP");
  c_reid->add_flag("--no-normalize", reid.no_normalize, "Average views without normalizing");
  c_reid->add_option("--json", reid.json, "Write the JSON report here (- for stdout)");
  c_reid->callback([&] { exit_code = EvalReid(reid); });

  ClsArgs cls;
  auto* c_cls = c_eval->add_subcommand("cls", "Leave-fold-out kNN classification");
  c_cls->add_option("--db", cls.db, "Snapshot")->required();
  c_cls->add_option("--folds", cls.folds, "Folds");
  c_cls->add_option("--seed", cls.seed, "Fold assignment seed");
  c_cls->add_option("--k", cls.k, "Neighbors")->check(CLI::PositiveNumber);
  c_cls->add_option("--json", cls.json, "Write the JSON report here (- for stdout)");
  c_cls->callback([&] { exit_code = EvalCls(cls); });

  BenchArgs bench;
  auto* c_bench = app.add_subcommand("bench", "Cosine vs Hamming query throughput");
  c_bench->add_option("--n", bench.cfg.n, "Database size")->check(CLI::PositiveNumber);
  c_bench->add_option("--dim", bench.cfg.dim, "D = K")->check(CLI::PositiveNumber);
  c_bench->add_option("--dist", bench.dist, "clustered or uniform")
      ->check(CLI::IsMember({"clustered", "uniform"}));
  c_bench->add_option("--repeats", bench.cfg.repeats, "Timed repeats (>= 3)");
  c_bench->add_option("--queries", bench.cfg.num_queries, "Queries per repeat");
  c_bench->add_option("--k", bench.cfg.k, "Neighbors")->check(CLI::PositiveNumber);
  c_bench->add_option("--leaf-size", bench.cfg.leaf_size, "Ball tree leaf size")
      ->check(CLI::PositiveNumber);
  c_bench->add_option("--seed", bench.cfg.seed, "Data seed");
  c_bench->add_option("--json", bench.json, "Write the JSON report here (- for stdout)");
  c_bench->callback([&] { exit_code = Bench(bench); });

  ServeArgs serve;
  auto* c_serve = app.add_subcommand("serve", "HTTP query service over a snapshot");
  c_serve->add_option("--db", serve.cfg.snapshot_path, "Snapshot")->required();
  c_serve->add_option("--port", serve.cfg.port, "Port (0 = any)")->check(CLI::Range(0, 65535));
  c_serve->add_option("--host", serve.cfg.host, "Bind address");
  c_serve->add_option("--k", serve.cfg.default_k, "Default neighbors")->check(CLI::PositiveNumber);
  c_serve->add_option("--metric", serve.metric, "Default metric")
      ->check(CLI::IsMember({"hamming", "cosine"}));
  c_serve->add_option("--max-body-bytes", serve.cfg.max_body_bytes, "Request size limit");
  c_serve->add_flag("--no-normalize", serve.no_normalize, "Average views without normalizing");
  c_serve->callback([&] { exit_code = Serve(serve); });

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "Write a synthetic multi-view embedding file");
  c_synth->add_option("--out", synth.out, "Embedding file")->required();
  c_synth->add_option("--labels-out", synth.labels_out, "JSONL label sidecar");
  c_synth->add_option("--polyps", synth.cfg.num_polyps, "Polyps")->check(CLI::PositiveNumber);
  c_synth->add_option("--views", synth.cfg.views_per_polyp, "Views per polyp")
      ->check(CLI::PositiveNumber);
  c_synth->add_option("--dim", synth.cfg.dim, "Dimension")->check(CLI::PositiveNumber);
  c_synth->add_option("--classes", synth.cfg.num_classes, "Classes")->check(CLI::PositiveNumber);
  c_synth->add_option("--separation", synth.cfg.class_separation, "Pull toward class direction");
  c_synth->add_option("--noise", synth.cfg.view_noise, "Per-view noise");
  c_synth->add_option("--first-id", synth.cfg.first_polyp_id, "First polyp id");
  c_synth->add_option("--seed", synth.cfg.seed, "Seed");
  c_synth->callback([&] { exit_code = Synth(synth); });

  LossArgs loss;
  auto* c_loss = app.add_subcommand("loss", "Contrastive losses of an embedding batch");
  c_loss->add_option("--embeddings", loss.embeddings, "Embedding file (rows in batch order)")
      ->required();
  c_loss->add_option("--pairs", loss.pairs, "JSON pair sidecar")->required();
  c_loss->add_option("--temperature", loss.temperature, "Temperature");
  c_loss->add_option("--level", loss.level, "image or scene")
      ->check(CLI::IsMember({"image", "scene"}));
  c_loss->add_flag("--raw-distances", loss.raw_distances, "Entropy on unnormalized vectors");
  c_loss->callback([&] { exit_code = Loss(loss); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const lesion::Error& e) {
    fmt::print(stderr, "error [{}]: {}\n", lesion::ErrorCodeName(e.code()), e.what());
    return 1;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return exit_code;
}
