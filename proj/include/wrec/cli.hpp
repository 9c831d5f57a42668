#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wrec/ingest.hpp"
#include "wrec/linalg.hpp"
#include "wrec/similarity.hpp"

namespace wrec::cli {

enum ExitCode : int {
  kOk = 0,
  kGeneric = 1,
  kIo = 2,
  kCapacity = 3,
  kCompatibility = 4,
};

struct PipelineConfig {
  std::filesystem::path input;         // raw interaction file
  InputFormat format = InputFormat::csv;
  std::filesystem::path output = ".";  // split files, model and reports
  std::optional<std::filesystem::path> data;   // split directory, defaults to output
  std::optional<std::filesystem::path> model;  // defaults to <output>/model.wrec
  std::optional<std::filesystem::path> users;  // fold-in file for `recommend`
  SplitSpec split;
  SimilarityKind kind = SimilarityKind::ridge;
  double lambda = 200.0;
  std::optional<std::size_t> embedding_dim;
  bool center_embeddings = false;
  std::vector<std::size_t> cutoffs{20, 50, 100};
  std::string eval_split = "test";
  bool per_user = false;
  std::size_t n = 100;
  std::size_t threads = 0;
  std::size_t max_dense_dim = kDefaultMaxDenseDim;

  std::filesystem::path model_path() const;
  std::filesystem::path data_dir() const;
  /// Throws ConfigError on an inconsistent kind / lambda / embedding_dim combination.
  void validate_model() const;
};

/// Applies "key = value" lines (blank lines and '#' comments ignored) on top of `base`.
PipelineConfig apply_config_text(const std::string& text, PipelineConfig base = {});
PipelineConfig load_config_file(const std::filesystem::path& path, PipelineConfig base = {});

/// "20,50,100" -> {20, 50, 100}.
std::vector<std::size_t> parse_cutoffs(const std::string& text);

int cmd_preprocess(const PipelineConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_train(const PipelineConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_evaluate(const PipelineConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_recommend(const PipelineConfig& cfg, std::ostream& out, std::ostream& err);

/// Entry point shared by the `wrec` binary and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wrec::cli
