#include "wrec/recommend.hpp"

#include <algorithm>
#include <iomanip>
#include <limits>
#include <numeric>
#include <string>

#include "wrec/errors.hpp"
#include "wrec/parallel.hpp"

namespace wrec {

std::vector<double> score_user(ItemVector y, const SimilarityMatrix& b) {
  if (y.length != b.dim()) {
    throw DimensionError("score_user: item vector has length " + std::to_string(y.length) +
                         " but B is " + std::to_string(b.dim()) + "x" +
                         std::to_string(b.dim()));
  }
  std::vector<double> s(b.dim(), 0.0);
  for (ItemIndex j : y.items) {
    if (j >= b.dim()) throw DimensionError("score_user: item index out of range");
    auto row = b.values.row(j);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += row[i];
  }
  return s;
}

RankedList top_n(std::span<const double> scores, std::span<const ItemIndex> seen, std::size_t n,
                 std::size_t user) {
  if (n < 1) throw ConfigError("top_n: N must be >= 1");
  std::vector<char> excluded(scores.size(), 0);
  for (ItemIndex j : seen) {
    if (j < excluded.size()) excluded[j] = 1;
  }
  std::vector<ItemIndex> candidates;
  candidates.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!excluded[i]) candidates.push_back(static_cast<ItemIndex>(i));
  }

  auto better = [&](ItemIndex a, ItemIndex b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  };
  const std::size_t keep = std::min(n, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                    candidates.end(), better);

  RankedList out;
  out.user = user;
  out.entries.reserve(keep);
  for (std::size_t r = 0; r < keep; ++r) out.entries.push_back({candidates[r], scores[candidates[r]]});
  return out;
}

std::vector<RankedList> batch_recommend(const InteractionMatrix& foldin,
                                        const SimilarityMatrix& b, std::size_t n) {
  if (foldin.n_items() != b.dim()) {
    throw DimensionError("batch_recommend: fold-in has " + std::to_string(foldin.n_items()) +
                         " items but B has dimension " + std::to_string(b.dim()));
  }
  if (n < 1) throw ConfigError("batch_recommend: N must be >= 1");
  std::vector<RankedList> out(foldin.n_users());
  parallel_for(foldin.n_users(), [&](std::size_t u) {
    const auto seen = foldin.row(u);
    const auto s = score_user(ItemVector{seen, foldin.n_items()}, b);
    out[u] = top_n(s, seen, n, u);
  });
  return out;
}

std::vector<RankedList> batch_recommend(const HeldOutSet& heldout, const SimilarityMatrix& b,
                                        std::size_t n) {
  return batch_recommend(heldout.foldin, b, n);
}

void write_ranked_csv(std::ostream& out, const std::vector<RankedList>& lists,
                      const std::vector<std::string>& user_ids,
                      const std::vector<std::string>& item_ids) {
  out << "user_id,rank,item_id,score\n";
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  for (const auto& list : lists) {
    for (std::size_t r = 0; r < list.entries.size(); ++r) {
      const auto& e = list.entries[r];
      out << user_ids.at(list.user) << ',' << (r + 1) << ',' << item_ids.at(e.item) << ','
          << e.score << '\n';
    }
  }
  out.precision(old_precision);
}

}  // namespace wrec
