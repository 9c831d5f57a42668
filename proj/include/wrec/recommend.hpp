#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "wrec/ingest.hpp"
#include "wrec/similarity.hpp"

namespace wrec {

struct RankedEntry {
  ItemIndex item;
  double score;

  friend bool operator==(const RankedEntry&, const RankedEntry&) = default;
};

/// Top-N list for one user: scores non-increasing, ties by ascending item.
struct RankedList {
  std::size_t user = 0;
  std::vector<RankedEntry> entries;

  friend bool operator==(const RankedList&, const RankedList&) = default;
};

/// Binary item vector given by its sorted support.
struct ItemVector {
  std::span<const ItemIndex> items;
  std::size_t length = 0;
};

/// s_i = sum_{j in y} B(j, i).
std::vector<double> score_user(ItemVector y, const SimilarityMatrix& b);

/// Excludes `seen`, orders by (score desc, item asc), keeps at most n.
RankedList top_n(std::span<const double> scores, std::span<const ItemIndex> seen,
                 std::size_t n, std::size_t user = 0);

std::vector<RankedList> batch_recommend(const HeldOutSet& heldout, const SimilarityMatrix& b,
                                        std::size_t n);
std::vector<RankedList> batch_recommend(const InteractionMatrix& foldin,
                                        const SimilarityMatrix& b, std::size_t n);

/// CSV: user_id,rank,item_id,score with 1-based ranks.
void write_ranked_csv(std::ostream& out, const std::vector<RankedList>& lists,
                      const std::vector<std::string>& user_ids,
                      const std::vector<std::string>& item_ids);

}  // namespace wrec
