#include "wrec/model_io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string_view>

#include "wrec/errors.hpp"

namespace wrec {
namespace {

constexpr std::string_view kModelMagic = "WREC-SIM";
constexpr std::string_view kEmbeddingMagic = "WREC-EMB";

class Writer {
 public:
  void bytes(std::string_view s) { out_.append(s); }
  void u32(std::uint32_t v) {
    for (int b = 0; b < 4; ++b) out_.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
  }
  void u64(std::uint64_t v) {
    for (int b = 0; b < 8; ++b) out_.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(const std::string& s) {
    u32(checked_u32(s.size(), "string length"));
    out_.append(s);
  }
  std::string take() { return std::move(out_); }

  static std::uint32_t checked_u32(std::size_t v, const char* what) {
    if (v > 0xFFFFFFFFull) throw DimensionError(std::string(what) + " does not fit in u32");
    return static_cast<std::uint32_t>(v);
  }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}
  std::string_view bytes(std::size_t n) {
    need(n);
    auto s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::uint32_t u32() {
    auto s = bytes(4);
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) v |= std::uint32_t(static_cast<unsigned char>(s[b])) << (8 * b);
    return v;
  }
  std::uint64_t u64() {
    auto s = bytes(8);
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) v |= std::uint64_t(static_cast<unsigned char>(s[b])) << (8 * b);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const std::uint32_t n = u32();
    return std::string(bytes(n));
  }
  bool done() const { return pos_ == in_.size(); }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw IoError("truncated file: needed " + std::to_string(n) + " more bytes at offset " + std::to_string(pos_));
  }
  std::string_view in_;
  std::size_t pos_ = 0;
};

std::uint32_t kind_tag(SimilarityKind kind) { return static_cast<std::uint32_t>(kind); }

SimilarityKind kind_from_tag(std::uint32_t tag) {
  if (tag > static_cast<std::uint32_t>(SimilarityKind::embed_ease)) {
    throw CompatibilityError("unknown model kind tag " + std::to_string(tag));
  }
  return static_cast<SimilarityKind>(tag);
}

void check_magic(Reader& r, std::string_view magic) {
  if (r.bytes(magic.size()) != magic) {
    throw CompatibilityError("bad magic, expected " + std::string(magic));
  }
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

std::string encode_model(const ModelFile& model) {
  const auto& s = model.similarity;
  if (s.values.rows() != s.values.cols()) throw DimensionError("similarity matrix must be square");
  if (model.item_ids.size() != s.dim()) {
    throw DimensionError("item vocabulary has " + std::to_string(model.item_ids.size()) +
                         " ids for dimension " + std::to_string(s.dim()));
  }
  Writer w;
  w.bytes(kModelMagic);
  w.u32(kModelFileVersion);
  w.u32(kind_tag(s.kind));
  w.u32(Writer::checked_u32(s.dim(), "dimension"));
  w.f64(s.config.lambda);
  w.u32(Writer::checked_u32(s.config.embedding_dim, "embedding dimension"));
  for (double v : s.values.values()) w.f64(v);
  for (const auto& id : model.item_ids) w.str(id);
  return w.take();
}

ModelFile decode_model(const std::string& bytes) {
  Reader r(bytes);
  check_magic(r, kModelMagic);
  const std::uint32_t version = r.u32();
  if (version != kModelFileVersion) {
    throw CompatibilityError("unsupported model file version " + std::to_string(version));
  }
  ModelFile m;
  m.similarity.kind = kind_from_tag(r.u32());
  const std::size_t dim = r.u32();
  m.similarity.config.lambda = r.f64();
  m.similarity.config.embedding_dim = r.u32();
  if (r.remaining() / 8 / std::max<std::size_t>(dim, 1) < dim) {
    throw IoError("truncated model file: payload shorter than " + std::to_string(dim) + "^2 values");
  }
  std::vector<double> values(dim * dim);
  for (double& v : values) v = r.f64();
  m.similarity.values = DenseMatrix(dim, dim, std::move(values));
  m.item_ids.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) m.item_ids.push_back(r.str());
  if (!r.done()) throw CompatibilityError("trailing bytes after model payload");
  return m;
}

void save_model(const std::filesystem::path& path, const ModelFile& model) {
  write_file(path, encode_model(model));
}

ModelFile load_model(const std::filesystem::path& path) { return decode_model(read_file(path)); }

std::string encode_embedding(const EmbeddingFile& file) {
  const auto& e = file.embedding;
  if (file.item_ids.size() != e.n_items()) {
    throw DimensionError("item vocabulary has " + std::to_string(file.item_ids.size()) +
                         " ids for " + std::to_string(e.n_items()) + " items");
  }
  Writer w;
  w.bytes(kEmbeddingMagic);
  w.u32(kEmbeddingFileVersion);
  w.u32(Writer::checked_u32(e.dim(), "embedding dimension"));
  w.u32(Writer::checked_u32(e.n_items(), "item count"));
  for (double v : e.values.values()) w.f64(v);
  for (const auto& id : file.item_ids) w.str(id);
  return w.take();
}

EmbeddingFile decode_embedding(const std::string& bytes) {
  Reader r(bytes);
  check_magic(r, kEmbeddingMagic);
  const std::uint32_t version = r.u32();
  if (version != kEmbeddingFileVersion) {
    throw CompatibilityError("unsupported embedding file version " + std::to_string(version));
  }
  const std::size_t d = r.u32();
  const std::size_t n = r.u32();
  if (d > 0 && r.remaining() / 8 / d < n) {
    throw IoError("truncated embedding file: payload shorter than D x |I| values");
  }
  std::vector<double> values(d * n);
  for (double& v : values) v = r.f64();
  EmbeddingFile f;
  f.embedding.values = DenseMatrix(d, n, std::move(values));
  // ||row_k||^2 = sigma_k for E = S^{1/2} V^T.
  f.embedding.singular_values.resize(d);
  for (std::size_t k = 0; k < d; ++k) {
    double s = 0.0;
    for (double v : f.embedding.values.row(k)) s += v * v;
    f.embedding.singular_values[k] = s;
  }
  f.item_ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) f.item_ids.push_back(r.str());
  if (!r.done()) throw CompatibilityError("trailing bytes after embedding payload");
  return f;
}

void save_embedding(const std::filesystem::path& path, const EmbeddingFile& file) {
  write_file(path, encode_embedding(file));
}

EmbeddingFile load_embedding(const std::filesystem::path& path) {
  return decode_embedding(read_file(path));
}

}  // namespace wrec
