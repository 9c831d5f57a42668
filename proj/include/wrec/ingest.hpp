#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wrec/interaction_matrix.hpp"

namespace wrec {

struct RawInteraction {
  std::string user_id;
  std::string item_id;
  std::optional<double> rating;
  std::optional<std::int64_t> timestamp;

  friend bool operator==(const RawInteraction&, const RawInteraction&) = default;
};

enum class InputFormat { csv, tsv };

/// Preprocessing and strong-generalization split parameters.
struct SplitSpec {
  double heldout_user_fraction = 0.1;
  double foldin_fraction = 0.8;
  std::uint64_t rng_seed = 98765;
  std::size_t min_user_interactions = 5;
  std::size_t min_item_interactions = 1;
  std::optional<double> rating_threshold = 4.0;

  /// Throws ConfigError when a fraction is outside (0, 1) or 2 * heldout >= 1.
  void validate() const;
};

/// Held-out users: fold-in rows are model inputs, targets are the items to recover.
struct HeldOutSet {
  InteractionMatrix foldin;
  std::vector<std::vector<ItemIndex>> targets;  // sorted, one per foldin row

  std::size_t n_users() const { return foldin.n_users(); }
};

struct Split {
  InteractionMatrix train;
  HeldOutSet validation;
  HeldOutSet test;
  std::size_t excluded_users = 0;
  std::size_t dropped_items = 0;
  std::vector<std::string> warnings;
};

/// Columns: user, item[, rating[, timestamp]]. A leading header line is
/// recognised by its column names (user..., item.../movie...).
std::vector<RawInteraction> load_interactions(const std::filesystem::path& path,
                                              InputFormat format);

std::vector<RawInteraction> parse_interactions(const std::string& text, InputFormat format);

/// Threshold, binarize, dedupe, then iterate min-count filters to a fixed point.
InteractionMatrix preprocess(const std::vector<RawInteraction>& raw, const SplitSpec& spec);

Split split_strong_generalization(const InteractionMatrix& x, const SplitSpec& spec);

/// Sparse-triplet text block: "n_users n_items nnz" then one "user item" per line.
void write_triplets(std::ostream& out, const InteractionMatrix& x);
void write_triplets(std::ostream& out, std::size_t n_items,
                    const std::vector<std::vector<ItemIndex>>& rows);
/// Reads one block; user and item ids come from the vocabularies when given.
InteractionMatrix read_triplets(std::istream& in, std::vector<std::string> user_ids = {},
                                std::vector<std::string> item_ids = {});

/// train.txt, validation.txt, test.txt (held-out files carry a fold-in block
/// followed by a target block), items.txt, <split>_users.txt.
void write_split(const std::filesystem::path& dir, const Split& split);
Split read_split(const std::filesystem::path& dir);

}  // namespace wrec
