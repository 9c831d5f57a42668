#include "wrec/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "wrec/autoencoder.hpp"
#include "wrec/embedding.hpp"
#include "wrec/errors.hpp"
#include "wrec/evalmetrics.hpp"
#include "wrec/model_io.hpp"
#include "wrec/parallel.hpp"
#include "wrec/recommend.hpp"
#include "wrec/whitening.hpp"

namespace wrec::cli {
namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used == value.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected a number, got '" + value + "'");
}

std::size_t to_count(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(value, &used);
    if (used == value.size() && value.find('-') == std::string::npos) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected a non-negative integer, got '" + value + "'");
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError(key + ": expected true/false, got '" + value + "'");
}

void apply_key(PipelineConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "input") {
    cfg.input = value;
  } else if (key == "format") {
    if (value == "csv") {
      cfg.format = InputFormat::csv;
    } else if (value == "tsv") {
      cfg.format = InputFormat::tsv;
    } else {
      throw ConfigError("format: expected csv or tsv, got '" + value + "'");
    }
  } else if (key == "output") {
    cfg.output = value;
  } else if (key == "data") {
    cfg.data = value;
  } else if (key == "model") {
    cfg.model = value;
  } else if (key == "users") {
    cfg.users = value;
  } else if (key == "kind") {
    cfg.kind = parse_kind(value);
  } else if (key == "lambda") {
    cfg.lambda = to_double(key, value);
  } else if (key == "embedding_dim") {
    if (value == "none" || value.empty()) {
      cfg.embedding_dim.reset();
    } else {
      cfg.embedding_dim = to_count(key, value);
    }
  } else if (key == "center_embeddings") {
    cfg.center_embeddings = to_bool(key, value);
  } else if (key == "cutoffs") {
    cfg.cutoffs = parse_cutoffs(value);
  } else if (key == "split") {
    if (value != "validation" && value != "test") {
      throw ConfigError("split: expected validation or test, got '" + value + "'");
    }
    cfg.eval_split = value;
  } else if (key == "per_user") {
    cfg.per_user = to_bool(key, value);
  } else if (key == "n") {
    cfg.n = to_count(key, value);
  } else if (key == "threads") {
    cfg.threads = to_count(key, value);
  } else if (key == "seed" || key == "rng_seed") {
    cfg.split.rng_seed = to_count(key, value);
  } else if (key == "heldout_user_fraction") {
    cfg.split.heldout_user_fraction = to_double(key, value);
  } else if (key == "foldin_fraction") {
    cfg.split.foldin_fraction = to_double(key, value);
  } else if (key == "min_user_interactions") {
    cfg.split.min_user_interactions = to_count(key, value);
  } else if (key == "min_item_interactions") {
    cfg.split.min_item_interactions = to_count(key, value);
  } else if (key == "rating_threshold") {
    if (value == "none" || value.empty()) {
      cfg.split.rating_threshold.reset();
    } else {
      cfg.split.rating_threshold = to_double(key, value);
    }
  } else if (key == "max_dense_dim") {
    cfg.max_dense_dim = to_count(key, value);
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

const HeldOutSet& pick_heldout(const Split& split, const std::string& name) {
  return name == "validation" ? split.validation : split.test;
}

void require_file(const std::filesystem::path& path, const char* what) {
  if (!std::filesystem::exists(path)) {
    throw IoError(std::string(what) + " not found: " + path.string());
  }
}

nlohmann::ordered_json heldout_summary(const HeldOutSet& h) {
  std::size_t target_nnz = 0;
  for (const auto& t : h.targets) target_nnz += t.size();
  return {{"n_users", h.n_users()},
          {"n_items", h.foldin.n_items()},
          {"foldin_nnz", h.foldin.nnz()},
          {"target_nnz", target_nnz}};
}

SimilarityMatrix train_model(const PipelineConfig& cfg, const InteractionMatrix& x,
                             std::ostream& out, std::ostream& err) {
  switch (cfg.kind) {
    case SimilarityKind::ridge:
      return ridge(x, RidgeConfig{cfg.lambda, RidgeForm::automatic, cfg.max_dense_dim});
    case SimilarityKind::ease:
      return std::move(ease(x, cfg.lambda, cfg.max_dense_dim).b);
    case SimilarityKind::zca:
      return zca_similarity(x, cfg.lambda, cfg.max_dense_dim);
    case SimilarityKind::embed_dot:
    case SimilarityKind::embed_ridge:
    case SimilarityKind::embed_ease:
      break;
  }

  const std::size_t limit = std::min({x.n_items() - 1, x.n_users()});
  if (limit < 1) throw ConfigError("embedding models need at least two items");
  std::size_t dim = *cfg.embedding_dim;
  if (dim > limit) {
    err << "warning: embedding_dim " << dim << " reduced to " << limit << "\n";
    dim = limit;
  }
  EmbeddingMatrix e = svd_embed(x, dim, cfg.max_dense_dim);
  if (e.rank_deficient_dims > 0) {
    err << "warning: " << e.rank_deficient_dims
        << " embedding dimensions exceed the numerical rank of the training matrix\n";
  }
  if (cfg.center_embeddings) e = center_embedding(e);
  const auto emb_path = cfg.output / "embedding.wrec";
  save_embedding(emb_path, EmbeddingFile{e, x.item_ids()});
  out << "embedding: " << emb_path.string() << " (D=" << e.dim() << ")\n";

  switch (cfg.kind) {
    case SimilarityKind::embed_dot:
      return embed_dot(e);
    case SimilarityKind::embed_ridge:
      return embed_ridge(e, cfg.lambda);
    default:
      return embed_ease(e, cfg.lambda, cfg.max_dense_dim);
  }
}

}  // namespace

std::filesystem::path PipelineConfig::model_path() const {
  return model.value_or(output / "model.wrec");
}

std::filesystem::path PipelineConfig::data_dir() const { return data.value_or(output); }

void PipelineConfig::validate_model() const {
  const bool embed = kind == SimilarityKind::embed_dot || kind == SimilarityKind::embed_ridge ||
                     kind == SimilarityKind::embed_ease;
  if (embed && !embedding_dim) {
    throw ConfigError("kind " + std::string(to_string(kind)) + " requires embedding_dim");
  }
  if (!embed && embedding_dim) {
    throw ConfigError("embedding_dim is only valid for embed_* kinds");
  }
  if (embed && *embedding_dim < 1) throw ConfigError("embedding_dim must be >= 1");
  if (kind != SimilarityKind::embed_dot && !(lambda > 0.0)) {
    throw ConfigError("lambda must be > 0 for kind " + std::string(to_string(kind)));
  }
}

std::vector<std::size_t> parse_cutoffs(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const std::size_t r = to_count("cutoffs", trim(part));
    if (r < 1) throw ConfigError("cutoffs must be >= 1");
    out.push_back(r);
  }
  if (out.empty()) throw ConfigError("cutoffs must list at least one value");
  return out;
}

PipelineConfig apply_config_text(const std::string& text, PipelineConfig base) {
  std::stringstream ss(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    apply_key(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

PipelineConfig load_config_file(const std::filesystem::path& path, PipelineConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("config file not found: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return apply_config_text(buffer.str(), std::move(base));
}

int cmd_preprocess(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
  require_file(cfg.input, "input file");
  const auto raw = load_interactions(cfg.input, cfg.format);
  const InteractionMatrix x = preprocess(raw, cfg.split);
  const Split split = split_strong_generalization(x, cfg.split);
  write_split(cfg.output, split);

  nlohmann::ordered_json summary;
  summary["n_users"] = x.n_users();
  summary["n_items"] = x.n_items();
  summary["nnz"] = x.nnz();
  summary["train"] = {{"n_users", split.train.n_users()},
                      {"n_items", split.train.n_items()},
                      {"nnz", split.train.nnz()}};
  summary["validation"] = heldout_summary(split.validation);
  summary["test"] = heldout_summary(split.test);
  summary["excluded_users"] = split.excluded_users;
  summary["dropped_items"] = split.dropped_items;
  summary["warnings"] = split.warnings;
  std::ofstream(cfg.output / "summary.json") << summary.dump(2) << "\n";

  for (const auto& w : split.warnings) err << "warning: " << w << "\n";
  out << "preprocessed " << raw.size() << " records -> " << x.n_users() << " users, "
      << x.n_items() << " items, " << x.nnz() << " interactions\n"
      << "train " << split.train.n_users() << " users, validation "
      << split.validation.n_users() << ", test " << split.test.n_users() << " -> "
      << cfg.output.string() << "\n";
  return kOk;
}

int cmd_train(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
  cfg.validate_model();
  set_num_threads(cfg.threads);
  require_file(cfg.data_dir() / "train.txt", "training split");
  const Split split = read_split(cfg.data_dir());

  const auto start = std::chrono::steady_clock::now();
  SimilarityMatrix b = train_model(cfg, split.train, out, err);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::filesystem::create_directories(cfg.model_path().parent_path().empty()
                                          ? std::filesystem::path(".")
                                          : cfg.model_path().parent_path());
  save_model(cfg.model_path(), ModelFile{b, split.train.item_ids()});
  out << "trained " << to_string(b.kind) << " model: " << b.dim() << "x" << b.dim() << " in "
      << std::fixed << std::setprecision(3) << seconds << " s -> " << cfg.model_path().string()
      << "\n";
  out.unsetf(std::ios::fixed);
  return kOk;
}

int cmd_evaluate(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
  set_num_threads(cfg.threads);
  require_file(cfg.model_path(), "model file");
  const ModelFile model = load_model(cfg.model_path());
  const Split split = read_split(cfg.data_dir());
  if (model.item_ids != split.train.item_ids()) {
    throw CompatibilityError("model vocabulary (" + std::to_string(model.item_ids.size()) +
                             " items) does not match split vocabulary (" +
                             std::to_string(split.train.n_items()) + " items)");
  }
  const HeldOutSet& heldout = pick_heldout(split, cfg.eval_split);
  const EvalReport report = evaluate(heldout, model.similarity, cfg.cutoffs);

  std::filesystem::create_directories(cfg.output);
  const auto json_path = cfg.output / ("eval_" + cfg.eval_split + ".json");
  {
    std::ofstream json(json_path, std::ios::binary);
    if (!json) throw IoError("cannot write " + json_path.string());
    json << report_to_json(report);
  }
  if (cfg.per_user) {
    std::ofstream csv(cfg.output / ("eval_" + cfg.eval_split + "_users.csv"), std::ios::binary);
    write_per_user_csv(csv, report, heldout.foldin.user_ids());
  }
  if (report.excluded_users > 0) {
    err << "warning: " << report.excluded_users << " users excluded from evaluation\n";
  }

  out << "model " << to_string(model.similarity.kind) << ", " << cfg.eval_split << " split, "
      << report.n_users_evaluated << " users\n";
  out << std::left << std::setw(8) << "R" << std::setw(12) << "Recall@R" << "NDCG@R\n";
  for (std::size_t r : report.cutoffs) {
    out << std::setw(8) << r << std::fixed << std::setprecision(5) << std::setw(12)
        << report.recall.at(r).mean << report.ndcg.at(r).mean << "\n";
  }
  out.unsetf(std::ios::fixed | std::ios::left);
  out << "report: " << json_path.string() << "\n";
  return kOk;
}

int cmd_recommend(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.n < 1) throw ConfigError("n must be >= 1");
  if (!cfg.users) throw ConfigError("recommend needs --users PATH");
  set_num_threads(cfg.threads);
  require_file(cfg.model_path(), "model file");
  require_file(*cfg.users, "users file");
  const ModelFile model = load_model(cfg.model_path());

  std::unordered_map<std::string, std::size_t> item_of;
  for (std::size_t i = 0; i < model.item_ids.size(); ++i) item_of.emplace(model.item_ids[i], i);

  // user_id,item_id lines; an empty item field declares a user with no history.
  std::ifstream in(*cfg.users);
  std::vector<std::string> user_ids;
  std::unordered_map<std::string, std::size_t> user_of;
  std::vector<std::vector<ItemIndex>> rows;
  std::size_t unknown = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto comma = line.find(',');
    const std::string user = trim(line.substr(0, comma));
    const std::string item = comma == std::string::npos ? "" : trim(line.substr(comma + 1));
    if (line_no == 1 && (user == "user" || user == "user_id" || user == "userId")) continue;
    if (user.empty()) throw ParseError(line_no, "empty user id");
    auto [it, added] = user_of.emplace(user, user_ids.size());
    if (added) {
      user_ids.push_back(user);
      rows.emplace_back();
    }
    if (item.empty()) continue;
    auto found = item_of.find(item);
    if (found == item_of.end()) {
      ++unknown;
      continue;
    }
    rows[it->second].push_back(static_cast<ItemIndex>(found->second));
  }
  std::size_t empty_users = 0;
  for (auto& r : rows) {
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    empty_users += r.empty();
  }

  const InteractionMatrix foldin(rows, model.item_ids.size(), user_ids, model.item_ids);
  auto lists = batch_recommend(foldin, model.similarity, cfg.n);
  std::erase_if(lists, [&](const RankedList& l) { return foldin.row(l.user).empty(); });

  std::filesystem::create_directories(cfg.output);
  const auto path = cfg.output / "recommendations.csv";
  std::ofstream csv(path, std::ios::binary);
  if (!csv) throw IoError("cannot write " + path.string());
  write_ranked_csv(csv, lists, user_ids, model.item_ids);

  if (unknown > 0) err << "warning: skipped " << unknown << " unknown item ids\n";
  if (empty_users > 0) {
    err << "warning: " << empty_users << " users have an empty fold-in; no recommendations\n";
  }
  out << "recommendations for " << lists.size() << " users -> " << path.string() << "\n";
  return kOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Closed-form linear autoencoder recommenders with ZCA whitening"};
  app.name("wrec");
  app.require_subcommand(1);

  std::string config_path;
  std::map<std::string, std::string> overrides;
  auto flag = [&](CLI::App* sub, const std::string& name, const std::string& key,
                  const std::string& help) {
    sub->add_option_function<std::string>(
        name, [&overrides, key](const std::string& v) { overrides[key] = v; }, help);
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value configuration file");
    flag(sub, "--output", "output", "Output directory");
    flag(sub, "--data", "data", "Split directory (defaults to --output)");
    flag(sub, "--seed", "seed", "Random seed");
    flag(sub, "--threads", "threads", "Worker thread cap (0 = all cores)");
    flag(sub, "--max-dense-dim", "max_dense_dim", "Largest dense square dimension");
  };

  auto* pre = app.add_subcommand("preprocess", "Filter raw interactions and write splits");
  add_common(pre);
  flag(pre, "--input", "input", "Raw interaction file");
  flag(pre, "--format", "format", "csv or tsv");

  auto* train = app.add_subcommand("train", "Fit a similarity model on the training split");
  add_common(train);
  flag(train, "--kind", "kind", "ridge, ease, zca, embed_dot, embed_ridge, embed_ease");
  flag(train, "--lambda", "lambda", "Regularization (also the whitening eps)");
  flag(train, "--embedding-dim", "embedding_dim", "Embedding size for embed_* kinds");
  flag(train, "--model", "model", "Model file path");

  auto* eval = app.add_subcommand("evaluate", "Score a model on a held-out split");
  add_common(eval);
  flag(eval, "--model", "model", "Model file path");
  flag(eval, "--cutoffs", "cutoffs", "Comma-separated cutoffs, e.g. 20,50,100");
  flag(eval, "--split", "split", "validation or test");
  eval->add_flag_callback("--per-user", [&overrides] { overrides["per_user"] = "true"; },
                          "Also write per-user metrics CSV");

  auto* rec = app.add_subcommand("recommend", "Write top-N lists for users in a fold-in file");
  add_common(rec);
  flag(rec, "--model", "model", "Model file path");
  flag(rec, "--users", "users", "CSV of user_id,item_id fold-in interactions");
  flag(rec, "--n", "n", "List length");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kGeneric;
  }

  try {
    PipelineConfig cfg;
    if (!config_path.empty()) cfg = load_config_file(config_path);
    for (const auto& [key, value] : overrides) apply_key(cfg, key, value);

    if (pre->parsed()) return cmd_preprocess(cfg, out, err);
    if (train->parsed()) return cmd_train(cfg, out, err);
    if (eval->parsed()) return cmd_evaluate(cfg, out, err);
    return cmd_recommend(cfg, out, err);
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << "\n";
    return kCapacity;
  } catch (const CompatibilityError& e) {
    err << "error: " << e.what() << "\n";
    return kCompatibility;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kGeneric;
  }
}

}  // namespace wrec::cli
