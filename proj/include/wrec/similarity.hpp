#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "wrec/linalg.hpp"

namespace wrec {

enum class SimilarityKind { ridge, ease, zca, embed_dot, embed_ridge, embed_ease };

enum class RidgeForm { primal, dual, automatic };

std::string_view to_string(SimilarityKind kind);
std::string_view to_string(RidgeForm form);
/// Throws ConfigError for unknown names.
SimilarityKind parse_kind(std::string_view name);
RidgeForm parse_form(std::string_view name);

/// Configuration that produced a similarity matrix.
struct ModelSnapshot {
  double lambda = 0.0;
  std::size_t embedding_dim = 0;  // 0 when no embedding was involved
  std::optional<RidgeForm> form;  // resolved form for ridge models

  friend bool operator==(const ModelSnapshot&, const ModelSnapshot&) = default;
};

/// Dense item-item similarity matrix B. Scores are s_i = sum_{j in y} B(j, i).
struct SimilarityMatrix {
  SimilarityKind kind = SimilarityKind::ridge;
  DenseMatrix values;
  ModelSnapshot config;

  std::size_t dim() const { return values.rows(); }
};

}  // namespace wrec
