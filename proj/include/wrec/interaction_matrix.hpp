#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace wrec {

using ItemIndex = std::uint32_t;

/// Sparse binary user-item matrix in CSR layout. Rows are users, every stored
/// entry is an implicit 1. Column indices within a row are strictly increasing.
class InteractionMatrix {
 public:
  InteractionMatrix() = default;

  /// Builds from per-user item lists. Lists are sorted and must be free of
  /// duplicates; every index must be < n_items. Id vectors may be empty, in
  /// which case ids default to the decimal index.
  InteractionMatrix(const std::vector<std::vector<ItemIndex>>& rows,
                    std::size_t n_items,
                    std::vector<std::string> user_ids = {},
                    std::vector<std::string> item_ids = {});

  std::size_t n_users() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t n_items() const { return n_items_; }
  std::size_t nnz() const { return indices_.size(); }
  bool empty() const { return nnz() == 0; }

  std::span<const ItemIndex> row(std::size_t user) const {
    return {indices_.data() + offsets_[user], offsets_[user + 1] - offsets_[user]};
  }
  bool contains(std::size_t user, ItemIndex item) const;

  const std::string& user_id(std::size_t user) const { return user_ids_[user]; }
  const std::string& item_id(std::size_t item) const { return item_ids_[item]; }
  const std::vector<std::string>& user_ids() const { return user_ids_; }
  const std::vector<std::string>& item_ids() const { return item_ids_; }
  std::optional<std::size_t> find_user(const std::string& id) const;
  std::optional<std::size_t> find_item(const std::string& id) const;

  /// Interactions per item.
  std::vector<std::size_t> column_counts() const;

  /// True when every row and every column holds at least one entry.
  bool all_rows_and_columns_nonempty() const;

  friend bool operator==(const InteractionMatrix& a, const InteractionMatrix& b) {
    return a.n_items_ == b.n_items_ && a.offsets_ == b.offsets_ &&
           a.indices_ == b.indices_ && a.user_ids_ == b.user_ids_ &&
           a.item_ids_ == b.item_ids_;
  }

 private:
  std::size_t n_items_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<ItemIndex> indices_;
  std::vector<std::string> user_ids_;
  std::vector<std::string> item_ids_;
  std::unordered_map<std::string, std::size_t> user_lookup_;
  std::unordered_map<std::string, std::size_t> item_lookup_;
};

}  // namespace wrec
