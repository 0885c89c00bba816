#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "jurisrank/errors.hpp"

namespace jurisrank {

enum class Granularity { kSingle, kToken };

std::string_view to_string(Granularity g);

std::string query_key(std::string_view query_id);
std::string paragraph_key(std::string_view judgment_id, int para_num);

/// Query and paragraph embeddings. Single granularity holds one row per
/// key; token granularity holds a contiguous block of token rows per key.
template <typename Scalar>
class BasicEmbeddingStore {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using ConstRows = Eigen::Block<const Matrix>;

  BasicEmbeddingStore() = default;

  /// `token_counts` is ignored (all ones) for single granularity.
  BasicEmbeddingStore(Granularity granularity, bool normalized, std::vector<std::string> keys,
                      std::vector<Eigen::Index> token_counts, Matrix rows)
      : granularity_(granularity), normalized_(normalized), keys_(std::move(keys)),
        rows_(std::move(rows)) {
    if (granularity_ == Granularity::kSingle) token_counts.assign(keys_.size(), 1);
    if (token_counts.size() != keys_.size()) {
      throw DimensionError("token count list does not match key list");
    }
    Eigen::Index offset = 0;
    for (std::size_t i = 0; i < keys_.size(); ++i) {
      if (token_counts[i] < 1) throw DimensionError("key " + keys_[i] + " has no rows");
      if (!index_.emplace(keys_[i], Span{offset, token_counts[i]}).second) {
        throw DimensionError("duplicate embedding key " + keys_[i]);
      }
      offset += token_counts[i];
    }
    if (offset != rows_.rows()) {
      throw DimensionError("expected " + std::to_string(offset) + " rows, got " +
                           std::to_string(rows_.rows()));
    }
    if (rows_.cols() < 1) throw DimensionError("embedding dimension must be positive");
    if (normalized_) {
      for (Eigen::Index r = 0; r < rows_.rows(); ++r) {
        const double norm = static_cast<double>(rows_.row(r).norm());
        if (std::abs(norm - 1.0) > 1e-4) {
          throw DimensionError("row " + std::to_string(r) + " has norm " + std::to_string(norm) +
                               " in a normalized store");
        }
      }
    }
  }

  Granularity granularity() const noexcept { return granularity_; }
  bool normalized() const noexcept { return normalized_; }
  Eigen::Index dim() const noexcept { return rows_.cols(); }
  std::size_t size() const noexcept { return keys_.size(); }
  const std::vector<std::string>& keys() const noexcept { return keys_; }
  const Matrix& matrix() const noexcept { return rows_; }

  bool contains(std::string_view key) const { return index_.contains(std::string(key)); }

  Eigen::Index token_count(std::string_view key) const { return locate(key).count; }

  /// The rows stored for `key`; throws MissingEmbedding if absent.
  ConstRows rows(std::string_view key) const {
    const Span s = locate(key);
    return ConstRows(rows_, s.offset, 0, s.count, rows_.cols());
  }

 private:
  struct Span {
    Eigen::Index offset;
    Eigen::Index count;
  };

  Span locate(std::string_view key) const {
    auto it = index_.find(std::string(key));
    if (it == index_.end()) throw MissingEmbedding("no embedding for " + std::string(key));
    return it->second;
  }

  Granularity granularity_ = Granularity::kSingle;
  bool normalized_ = false;
  std::vector<std::string> keys_;
  Matrix rows_;
  std::unordered_map<std::string, Span> index_;
};

using EmbeddingStore = BasicEmbeddingStore<float>;

/// Reads manifest.json, ids.tsv and vectors.bin (row-major f32 little endian).
EmbeddingStore read_embedding_store(const std::filesystem::path& dir);
void write_embedding_store(const std::filesystem::path& dir, const EmbeddingStore& store);

}  // namespace jurisrank
