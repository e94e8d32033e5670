// Copyright 2026 The LRD Authors. All rights reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line entry point: prepare -> embed -> train -> evaluate/analyze,
// plus hyperparameter sweeps. Exit codes: 0 success, 1 runtime failure,
// 2 usage error. Failures print one line: "error[<kind>]: <message>".

#include "lrd/analysis.hpp"
#include "lrd/config.hpp"
#include "lrd/corpus.hpp"
#include "lrd/evaluation.hpp"
#include "lrd/manifest.hpp"
#include "lrd/model.hpp"
#include "lrd/textembed.hpp"
#include "lrd/trainer.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;

namespace lrd {
namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.push_back(sep);
    out += parts[i];
  }
  return out;
}

// Adds sha256 of `path` to `m.inputs` under `name` when the path is set.
void hash_input(RunManifest& m, const std::string& name, const std::string& path) {
  if (path.empty()) return;
  if (!fs::exists(path)) throw Error(ErrorKind::Io, "input not found: " + path);
  m.inputs[name] = fs::is_directory(path) ? hash_directory(path) : sha256_file(path);
}

void record_outputs(RunManifest& m, const std::string& dir, const std::vector<std::string>& names) {
  for (const auto& n : names) m.outputs[n] = sha256_file((fs::path(dir) / n).string());
}

// ---------------------------------------------------------------- prepare

struct PrepareArgs {
  PrepareOptions opt;
  std::string columns = "user,item,timestamp";
  std::string delimiter = "tab";
  std::vector<std::string> attributes;
  std::size_t max_per_item = 0;
  std::string out;
};

void add_prepare(CLI::App& app, PrepareArgs& a) {
  auto* c = app.add_subcommand("prepare", "ingest interactions, split, build triplets, freeze eval negatives");
  c->add_option("--interactions", a.opt.interactions, "interaction file")->required();
  c->add_option("--columns", a.columns, "column layout, e.g. header:user,item,rating,timestamp");
  c->add_option("--delimiter", a.delimiter, "tab | comma | space | <char>");
  c->add_option("--item-text", a.opt.item_text, "item<TAB>text file");
  c->add_option("--metadata", a.opt.metadata, "item<TAB>attribute<TAB>value file");
  c->add_option("--cooccurrence", a.opt.cooccurrence, "head<TAB>tail<TAB>relation file");
  c->add_option("--attributes", a.attributes, "metadata attributes to turn into relations (default: all)")
      ->delimiter(',');
  c->add_option("--kcore", a.opt.kcore, "k-core threshold")->check(CLI::PositiveNumber);
  c->add_option("--max-triplets-per-item", a.max_per_item, "cap attribute triplets per head; 0 = no cap");
  c->add_option("--eval-negatives", a.opt.eval_negatives, "sampled negatives per evaluation user")
      ->check(CLI::PositiveNumber);
  c->add_option("--negative-seed", a.opt.negative_seed, "seed for the frozen evaluation negatives");
  c->add_option("--out", a.out, "output dataset directory")->required();
}

char parse_delimiter(const std::string& s) {
  if (s == "tab") return '\t';
  if (s == "comma") return ',';
  if (s == "space") return ' ';
  if (s.size() == 1) return s[0];
  throw Error(ErrorKind::Usage, "--delimiter: expected tab, comma, space or one character");
}

int run_prepare(PrepareArgs& a) {
  a.opt.columns = ColumnSpec::parse(a.columns, parse_delimiter(a.delimiter));
  a.opt.attribute_relations = a.attributes;
  if (a.max_per_item > 0) a.opt.max_triplets_per_item = a.max_per_item;

  RunManifest m;
  m.command = "prepare";
  std::ostringstream cfg;
  cfg << "columns = " << a.columns << "\ndelimiter = " << a.delimiter << "\nattributes = " << join(a.attributes, ',')
      << "\nkcore = " << a.opt.kcore << "\nmax_triplets_per_item = " << a.max_per_item
      << "\neval_negatives = " << a.opt.eval_negatives << '\n';
  m.config = cfg.str();
  m.seed = a.opt.negative_seed;
  hash_input(m, "interactions", a.opt.interactions);
  hash_input(m, "item_text", a.opt.item_text);
  hash_input(m, "metadata", a.opt.metadata);
  hash_input(m, "cooccurrence", a.opt.cooccurrence);

  if (outputs_up_to_date(a.out, m)) {
    std::cout << "prepare: inputs unchanged (identity " << m.identity().substr(0, 12) << "), nothing to do\n";
    return 0;
  }
  const Dataset data = prepare_dataset(a.opt);
  save_dataset(data, a.out);
  std::vector<std::string> outputs;
  for (const auto& e : fs::directory_iterator(a.out)) {
    if (e.is_regular_file() && e.path().filename() != "manifest.json") outputs.push_back(e.path().filename());
  }
  record_outputs(m, a.out, outputs);
  m.created_at = utc_timestamp();
  write_manifest((fs::path(a.out) / "manifest.json").string(), m);
  std::cout << dataset_stats_json(data) << '\n';
  return 0;
}

// ---------------------------------------------------------------- embed

struct EmbedArgs {
  std::string data;
  std::string mode = "fallback";
  int dim = 256;
  std::uint64_t seed = 0;
  std::string file;
  EmbeddingServiceConfig service;
  std::string out;
};

void add_embed(CLI::App& app, EmbedArgs& a) {
  auto* c = app.add_subcommand("embed", "produce item text vectors (fallback encoder, file import or service)");
  c->add_option("--data", a.data, "prepared dataset directory")->required();
  c->add_option("--mode", a.mode, "fallback | file | remote")
      ->check(CLI::IsMember({"fallback", "file", "remote"}));
  c->add_option("--dim", a.dim, "fallback vector dimension")->check(CLI::PositiveNumber);
  c->add_option("--seed", a.seed, "fallback token hash seed");
  c->add_option("--file", a.file, "embedding file to import (file mode)");
  c->add_option("--endpoint", a.service.endpoint, "embedding service base URL (remote mode)");
  c->add_option("--model", a.service.model, "embedding model name (remote mode)");
  c->add_option("--api-key-env", a.service.api_key_env, "environment variable holding the API key");
  c->add_option("--cache", a.service.cache_dir, "response cache directory");
  c->add_option("--batch", a.service.batch, "texts per request")->check(CLI::PositiveNumber);
  c->add_option("--max-inflight", a.service.max_inflight, "concurrent requests")->check(CLI::PositiveNumber);
  c->add_option("--max-retries", a.service.max_retries, "retries on transient failures");
  c->add_option("--out", a.out, "output binary embedding file (default <data>/embeddings.lrde)");
}

int run_embed(EmbedArgs& a) {
  const Dataset data = load_dataset(a.data);
  EmbeddingTable table;
  if (a.mode == "fallback") {
    table = HashTextEncoder(a.dim, a.seed).encode_all(data.item_text);
  } else if (a.mode == "file") {
    if (a.file.empty()) throw Error(ErrorKind::Usage, "--mode file needs --file");
    table = load_embedding_file(a.file, &data.items);
  } else {
    EmbeddingClient client(a.service);
    table = client.fetch(data.item_text);
    std::cerr << "embed: " << client.requests_sent() << " request(s) sent\n";
  }
  if (table.size() != data.num_items()) {
    throw Error(ErrorKind::Data, "embedding table has " + std::to_string(table.size()) + " rows for " +
                                     std::to_string(data.num_items()) + " items");
  }
  const std::string out = a.out.empty() ? (fs::path(a.data) / "embeddings.lrde").string() : a.out;
  save_embedding_binary(table, out);
  std::cout << "embed: wrote " << table.size() << " x " << table.dim() << " to " << out << '\n';
  return 0;
}

// ---------------------------------------------------------------- train

struct TrainArgs {
  std::string data;
  std::string embeddings;
  std::string config;
  std::vector<std::string> set;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> variant;
  std::optional<std::string> lr;
  std::optional<std::string> max_epochs;
  std::string name;
  std::string runs = "runs";
};

void add_train(CLI::App& app, TrainArgs& a) {
  auto* c = app.add_subcommand("train", "train one model and write runs/<name>/");
  c->add_option("--data", a.data, "prepared dataset directory")->required();
  c->add_option("--embeddings", a.embeddings, "item text vectors (default <data>/embeddings.lrde)");
  c->add_option("--config", a.config, "key = value config file");
  c->add_option("--set", a.set, "override one config key (key=value); repeatable");
  c->add_option("--seed", a.seed, "training seed (overrides config)");
  c->add_option("--variant", a.variant, "full | no_llm | no_kge | no_lrd (overrides config)");
  c->add_option("--lr", a.lr, "learning rate (overrides config)");
  c->add_option("--max-epochs", a.max_epochs, "epoch cap (overrides config)");
  c->add_option("--name", a.name, "run name (default <variant>_seed<seed>)");
  c->add_option("--runs", a.runs, "parent directory for run outputs");
}

ConfigValues parse_overrides(const std::vector<std::string>& set) {
  ConfigValues out;
  for (const auto& kv : set) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw Error(ErrorKind::Usage, "--set expects key=value, got '" + kv + "'");
    out[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return out;
}

TrainConfig resolve_config(const TrainArgs& a) {
  ConfigValues overrides = parse_overrides(a.set);
  if (a.seed) overrides["seed"] = std::to_string(*a.seed);
  if (a.variant) overrides["variant"] = *a.variant;
  if (a.lr) overrides["lr"] = *a.lr;
  if (a.max_epochs) overrides["max_epochs"] = *a.max_epochs;
  const ConfigValues file = a.config.empty() ? ConfigValues{} : read_config_file(a.config);
  return build_config(file, overrides);
}

std::string default_embeddings(const std::string& data, const std::string& given) {
  return given.empty() ? (fs::path(data) / "embeddings.lrde").string() : given;
}

std::optional<EmbeddingTable> load_text_if_present(const std::string& path, const Dataset& data, bool required) {
  if (!fs::exists(path)) {
    if (required) throw Error(ErrorKind::Io, "embedding file not found: " + path + " (run `lrd embed` first)");
    return std::nullopt;
  }
  return load_embedding_file(path, &data.items);
}

int run_train(const TrainArgs& a) {
  const TrainConfig config = resolve_config(a);
  const Dataset data = load_dataset(a.data);
  const auto effective = apply_ablation(config, config.variant);
  const bool needs_text = effective.weights.lambda > 0 && !effective.model.posterior_from_ids;
  const auto emb_path = default_embeddings(a.data, a.embeddings);
  const auto text = load_text_if_present(emb_path, data, needs_text);

  const std::string name =
      a.name.empty() ? std::string(to_string(config.variant)) + "_seed" + std::to_string(config.seed) : a.name;
  const auto dir = fs::path(a.runs) / name;
  fs::create_directories(dir);

  RunManifest m;
  m.command = "train";
  m.config = config_to_text(config);
  m.seed = config.seed;
  hash_input(m, "dataset", a.data);
  if (text) hash_input(m, "embeddings", emb_path);

  std::string log_lines;
  const auto result = train(data, text ? &*text : nullptr, config, [&](const EpochLog& log) {
    const auto line = to_json_line(log);
    std::cerr << line << '\n';
    log_lines += line + '\n';
  });
  if (result.diverged) std::cerr << "warning: training diverged; keeping the best finite checkpoint\n";

  const auto dataset_name = fs::path(a.data).filename().string();
  const SeedRun valid{config.seed, evaluate(data, result.best, config.model.agg, EvalSplit::Valid, config.model.max_len)};
  const SeedRun test{config.seed, evaluate(data, result.best, config.model.agg, EvalSplit::Test, config.model.max_len)};
  save_checkpoint(result.best, (dir / "checkpoint.lrdc").string());
  write_file_atomic((dir / "train_log.jsonl").string(), log_lines);
  write_file_atomic((dir / "config.txt").string(), m.config);
  write_file_atomic((dir / "metrics.json").string(),
                    metrics_json(dataset_name, std::string(to_string(config.variant)), EvalSplit::Test,
                                 std::span(&test, 1)));
  write_file_atomic((dir / "valid_metrics.json").string(),
                    metrics_json(dataset_name, std::string(to_string(config.variant)), EvalSplit::Valid,
                                 std::span(&valid, 1)));
  record_outputs(m, dir.string(), {"checkpoint.lrdc", "config.txt", "metrics.json", "valid_metrics.json"});
  m.created_at = utc_timestamp();
  write_manifest((dir / "manifest.json").string(), m);
  std::cout << "train: best epoch " << result.best_epoch << ", valid nDCG@5 " << valid.metrics.ndcg5
            << ", test nDCG@5 " << test.metrics.ndcg5 << " -> " << dir.string() << '\n';
  return 0;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string data;
  std::vector<std::string> runs;
  std::string split = "test";
  std::string out;
  bool csv = false;
};

void add_evaluate(CLI::App& app, EvaluateArgs& a) {
  auto* c = app.add_subcommand("evaluate", "score run checkpoints and aggregate over seeds");
  c->add_option("--data", a.data, "prepared dataset directory")->required();
  c->add_option("--run", a.runs, "run directory (repeat once per seed)")->required();
  c->add_option("--split", a.split, "valid | test")->check(CLI::IsMember({"valid", "test"}));
  c->add_option("--out", a.out, "write metrics JSON here (default: stdout)");
  c->add_flag("--csv", a.csv, "emit a CSV row instead of JSON");
}

int run_evaluate(const EvaluateArgs& a) {
  const Dataset data = load_dataset(a.data);
  const EvalSplit split = parse_split(a.split);
  std::vector<SeedRun> runs;
  std::string variant;
  for (const auto& dir : a.runs) {
    const auto manifest = read_manifest((fs::path(dir) / "manifest.json").string());
    if (!manifest) throw Error(ErrorKind::Io, "no manifest.json in " + dir);
    const TrainConfig cfg = build_config(parse_config_text(manifest->config, dir + "/manifest.json"));
    const std::string v(to_string(cfg.variant));
    if (!variant.empty() && v != variant) {
      throw Error(ErrorKind::Validation, "runs mix variants (" + variant + " and " + v + ")");
    }
    variant = v;
    const ParamStore params = load_checkpoint((fs::path(dir) / "checkpoint.lrdc").string());
    runs.push_back({cfg.seed, evaluate(data, params, cfg.model.agg, split, cfg.model.max_len)});
  }
  const auto dataset_name = fs::path(a.data).filename().string();
  const std::string body = a.csv ? metrics_csv_header() + "\n" + metrics_csv_row(dataset_name, variant, runs) + "\n"
                                 : metrics_json(dataset_name, variant, split, runs);
  if (a.out.empty()) {
    std::cout << body;
  } else {
    write_file_atomic(a.out, body);
  }
  return 0;
}

// ---------------------------------------------------------------- analyze

struct AnalyzeArgs {
  std::string data;
  std::string run;
  std::string checkpoint;
  std::string what;
  int relation = -1;
  std::size_t top = 10;
  std::string user;
  bool all_pairs = false;
  std::string out;
};

void add_analyze(CLI::App& app, AnalyzeArgs& a) {
  auto* c = app.add_subcommand("analyze", "relation similarity, top pairs per relation, case traces");
  c->add_option("--data", a.data, "prepared dataset directory")->required();
  c->add_option("--run", a.run, "run directory (checkpoint + config)");
  c->add_option("--checkpoint", a.checkpoint, "checkpoint file (default <run>/checkpoint.lrdc)");
  c->add_option("--what", a.what, "sim | pairs | case | sweep")
      ->required()
      ->check(CLI::IsMember({"sim", "pairs", "case", "sweep"}));
  c->add_option("--relation", a.relation, "relation index for pairs (default: every relation)");
  c->add_option("--top", a.top, "pairs per relation")->check(CLI::PositiveNumber);
  c->add_option("--user", a.user, "raw user id for case traces");
  c->add_flag("--all-pairs", a.all_pairs, "score every item pair instead of training-window pairs");
  c->add_option("--out", a.out, "output file (default: stdout)");
}

std::string csv_field(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  return out + "\"";
}

int run_analyze(const AnalyzeArgs& a) {
  if (a.what == "sweep") throw Error(ErrorKind::Usage, "use the `sweep` subcommand for hyperparameter sweeps");
  if (a.run.empty() && a.checkpoint.empty()) throw Error(ErrorKind::Usage, "analyze needs --run or --checkpoint");
  const Dataset data = load_dataset(a.data);
  TrainConfig cfg;
  if (!a.run.empty()) {
    const auto manifest = read_manifest((fs::path(a.run) / "manifest.json").string());
    if (!manifest) throw Error(ErrorKind::Io, "no manifest.json in " + a.run);
    cfg = build_config(parse_config_text(manifest->config, a.run + "/manifest.json"));
  }
  const auto ckpt = a.checkpoint.empty() ? (fs::path(a.run) / "checkpoint.lrdc").string() : a.checkpoint;
  const ParamStore params = load_checkpoint(ckpt);
  if (params.item.rows() != data.num_items()) {
    throw Error(ErrorKind::Data, "checkpoint has " + std::to_string(params.item.rows()) + " items, dataset has " +
                                     std::to_string(data.num_items()));
  }
  RelationVocab vocab = data.relations;
  vocab.num_latent = params.num_relations() - vocab.num_predefined();

  std::ostringstream out;
  if (a.what == "sim") {
    out << similarity_csv(relation_similarity(params), vocab);
  } else if (a.what == "pairs") {
    const auto pool = a.all_pairs ? all_item_pairs(data.num_items()) : training_window_pairs(data, cfg.model.max_len);
    out << "relation,rank,head,tail,score,head_text,tail_text\n";
    for (int r = 0; r < params.num_relations(); ++r) {
      if (a.relation >= 0 && r != a.relation) continue;
      const auto ex = top_pairs(r, pool, a.top, params);
      for (std::size_t k = 0; k < ex.pairs.size(); ++k) {
        const auto& p = ex.pairs[k];
        out << vocab.name(r) << ',' << k + 1 << ',' << csv_field(data.items.name(p.head)) << ','
            << csv_field(data.items.name(p.tail)) << ',' << p.score << ','
            << csv_field(data.item_text[static_cast<std::size_t>(p.head)]) << ','
            << csv_field(data.item_text[static_cast<std::size_t>(p.tail)]) << '\n';
      }
    }
  } else {
    if (a.user.empty()) throw Error(ErrorKind::Usage, "--what case needs --user");
    const auto uid = data.users.find(a.user);
    if (!uid) throw Error(ErrorKind::Data, "unknown user '" + a.user + "'");
    std::size_t idx = data.split.users.size();
    for (std::size_t i = 0; i < data.split.users.size(); ++i) {
      if (data.split.users[i].user == *uid) idx = i;
    }
    if (idx == data.split.users.size()) throw Error(ErrorKind::Data, "user '" + a.user + "' has no evaluation split");
    const auto& us = data.split.users[idx];
    std::vector<ItemId> full = us.train;
    full.push_back(us.valid_target);
    const auto history = history_window(full, full.size(), cfg.model.max_len);
    const auto trace = case_trace(us.user, history, us.test_target, params, cfg.model.agg, data.test_negatives[idx]);
    nlohmann::ordered_json j;
    j["user"] = a.user;
    j["target"] = data.items.name(trace.target);
    j["target_text"] = data.item_text[static_cast<std::size_t>(trace.target)];
    j["target_rank"] = trace.target_rank;
    j["relations"] = nlohmann::json::array();
    for (int r = 0; r < params.num_relations(); ++r) j["relations"].push_back(vocab.name(r));
    for (const auto& row : trace.history) {
      nlohmann::ordered_json h;
      h["item"] = data.items.name(row.item);
      h["text"] = data.item_text[static_cast<std::size_t>(row.item)];
      h["predicted_relation"] = vocab.name(row.argmax);
      h["scores"] = std::vector<Real>(row.scores.data(), row.scores.data() + row.scores.size());
      j["history"].push_back(h);
    }
    out << j.dump(2) << '\n';
  }
  if (a.out.empty()) {
    std::cout << out.str();
  } else {
    write_file_atomic(a.out, out.str());
  }
  return 0;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  TrainArgs train;
  std::vector<int> latent;
  std::vector<Real> lambda;
  std::vector<std::uint64_t> seeds{1};
  std::string split = "test";
  std::string out;
};

void add_sweep(CLI::App& app, SweepArgs& a) {
  auto* c = app.add_subcommand("sweep", "grid over num_latent x lambda, seed-averaged nDCG@5 as CSV");
  c->add_option("--data", a.train.data, "prepared dataset directory")->required();
  c->add_option("--embeddings", a.train.embeddings, "item text vectors (default <data>/embeddings.lrde)");
  c->add_option("--config", a.train.config, "base config file");
  c->add_option("--set", a.train.set, "override one config key (key=value); repeatable");
  c->add_option("--latent", a.latent, "num_latent values (default 5..10)")->delimiter(',');
  c->add_option("--lambda", a.lambda, "lambda values (default 0.1,1,5,10)")->delimiter(',');
  c->add_option("--seeds", a.seeds, "training seeds")->delimiter(',');
  c->add_option("--split", a.split, "valid | test")->check(CLI::IsMember({"valid", "test"}));
  c->add_option("--out", a.out, "CSV output (default: stdout)");
}

int run_sweep(const SweepArgs& a) {
  const TrainConfig base = resolve_config(a.train);
  const Dataset data = load_dataset(a.train.data);
  const auto text = load_text_if_present(default_embeddings(a.train.data, a.train.embeddings), data, true);
  SweepGrid grid = default_sweep_grid();
  if (!a.latent.empty()) grid.num_latent = a.latent;
  if (!a.lambda.empty()) grid.lambda = a.lambda;
  const auto runner = make_training_runner(data, &*text, parse_split(a.split));
  const auto result = sweep(grid, base, a.seeds, [&](const TrainConfig& cfg) {
    std::cerr << "sweep: num_latent=" << cfg.model.num_latent << " lambda=" << cfg.weights.lambda
              << " seed=" << cfg.seed << '\n';
    return runner(cfg);
  });
  const auto csv = sweep_csv(result);
  if (a.out.empty()) {
    std::cout << csv;
  } else {
    write_file_atomic(a.out, csv);
  }
  for (const auto& c : result.cells) {
    if (c.error) std::cerr << "warning: cell num_latent=" << c.num_latent << " lambda=" << c.lambda
                           << " failed: " << *c.error << '\n';
  }
  return 0;
}

std::string config_reference() {
  std::string out = "\nConfig keys (key = value; flags override the file):\n";
  for (const auto& [k, d] : config_keys()) out += "  " + std::string(k) + std::string(16 - std::min<std::size_t>(k.size(), 15), ' ') + std::string(d) + '\n';
  return out;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"lrd: sequential recommendation with latent relation discovery"};
  app.require_subcommand(1);
  app.footer(config_reference());
  PrepareArgs prepare;
  EmbedArgs embed;
  TrainArgs train_args;
  EvaluateArgs eval;
  AnalyzeArgs analyze;
  SweepArgs sweep_args;
  add_prepare(app, prepare);
  add_embed(app, embed);
  add_train(app, train_args);
  add_evaluate(app, eval);
  add_analyze(app, analyze);
  add_sweep(app, sweep_args);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  const auto* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  if (name == "prepare") return run_prepare(prepare);
  if (name == "embed") return run_embed(embed);
  if (name == "train") return run_train(train_args);
  if (name == "evaluate") return run_evaluate(eval);
  if (name == "analyze") return run_analyze(analyze);
  return run_sweep(sweep_args);
}

}  // namespace
}  // namespace lrd

int main(int argc, char** argv) {
  try {
    return lrd::dispatch(argc, argv);
  } catch (const lrd::Error& e) {
    std::cerr << "error[" << lrd::to_string(e.kind()) << "]: " << e.what() << '\n';
    return e.kind() == lrd::ErrorKind::Usage ? lrd::kExitUsage : lrd::kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << '\n';
    return lrd::kExitRuntime;
  }
}
