#include "wrec/interaction_matrix.hpp"

#include <algorithm>

#include "wrec/errors.hpp"

namespace wrec {

InteractionMatrix::InteractionMatrix(const std::vector<std::vector<ItemIndex>>& rows,
                                     std::size_t n_items, std::vector<std::string> user_ids,
                                     std::vector<std::string> item_ids)
    : n_items_(n_items), user_ids_(std::move(user_ids)), item_ids_(std::move(item_ids)) {
  offsets_.reserve(rows.size() + 1);
  for (std::size_t u = 0; u < rows.size(); ++u) {
    const auto& row = rows[u];
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (row[k] >= n_items) {
        throw DimensionError("item index " + std::to_string(row[k]) + " out of range " +
                             std::to_string(n_items) + " in row " + std::to_string(u));
      }
      if (k > 0 && row[k] <= row[k - 1]) {
        throw DimensionError("row " + std::to_string(u) +
                             " is not strictly increasing");
      }
    }
    indices_.insert(indices_.end(), row.begin(), row.end());
    offsets_.push_back(indices_.size());
  }

  if (user_ids_.empty()) {
    for (std::size_t u = 0; u < rows.size(); ++u) user_ids_.push_back(std::to_string(u));
  }
  if (item_ids_.empty()) {
    for (std::size_t i = 0; i < n_items; ++i) item_ids_.push_back(std::to_string(i));
  }
  if (user_ids_.size() != rows.size()) throw DimensionError("user vocabulary size mismatch");
  if (item_ids_.size() != n_items) throw DimensionError("item vocabulary size mismatch");

  for (std::size_t u = 0; u < user_ids_.size(); ++u) {
    if (!user_lookup_.emplace(user_ids_[u], u).second) {
      throw DimensionError("duplicate user id '" + user_ids_[u] + "'");
    }
  }
  for (std::size_t i = 0; i < item_ids_.size(); ++i) {
    if (!item_lookup_.emplace(item_ids_[i], i).second) {
      throw DimensionError("duplicate item id '" + item_ids_[i] + "'");
    }
  }
}

bool InteractionMatrix::contains(std::size_t user, ItemIndex item) const {
  auto r = row(user);
  return std::binary_search(r.begin(), r.end(), item);
}

std::optional<std::size_t> InteractionMatrix::find_user(const std::string& id) const {
  auto it = user_lookup_.find(id);
  if (it == user_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> InteractionMatrix::find_item(const std::string& id) const {
  auto it = item_lookup_.find(id);
  if (it == item_lookup_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> InteractionMatrix::column_counts() const {
  std::vector<std::size_t> counts(n_items_, 0);
  for (ItemIndex i : indices_) ++counts[i];
  return counts;
}

bool InteractionMatrix::all_rows_and_columns_nonempty() const {
  for (std::size_t u = 0; u < n_users(); ++u) {
    if (row(u).empty()) return false;
  }
  auto counts = column_counts();
  return std::none_of(counts.begin(), counts.end(), [](std::size_t c) { return c == 0; });
}

}  // namespace wrec
