#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "wrec/embedding.hpp"
#include "wrec/similarity.hpp"

namespace wrec {

inline constexpr std::uint32_t kModelFileVersion = 1;
inline constexpr std::uint32_t kEmbeddingFileVersion = 1;

struct ModelFile {
  SimilarityMatrix similarity;
  std::vector<std::string> item_ids;
};

struct EmbeddingFile {
  EmbeddingMatrix embedding;
  std::vector<std::string> item_ids;
};

/// Layout (little-endian): "WREC-SIM", u32 version, u32 kind, u32 dim,
/// f64 lambda, u32 embedding_dim, dim*dim f64 row-major, then dim
/// length-prefixed (u32) item ids.
std::string encode_model(const ModelFile& model);
ModelFile decode_model(const std::string& bytes);
void save_model(const std::filesystem::path& path, const ModelFile& model);
ModelFile load_model(const std::filesystem::path& path);

/// "WREC-EMB", u32 version, u32 D, u32 |I|, D*|I| f64 row-major, |I| ids.
std::string encode_embedding(const EmbeddingFile& file);
EmbeddingFile decode_embedding(const std::string& bytes);
void save_embedding(const std::filesystem::path& path, const EmbeddingFile& file);
EmbeddingFile load_embedding(const std::filesystem::path& path);

}  // namespace wrec
