#include "jurisrank/embedding_store.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "jurisrank/jsonl.hpp"

namespace jurisrank {

static_assert(sizeof(float) == 4);

std::string_view to_string(Granularity g) {
  return g == Granularity::kSingle ? "single" : "token";
}

std::string query_key(std::string_view query_id) { return "q:" + std::string(query_id); }

std::string paragraph_key(std::string_view judgment_id, int para_num) {
  return "p:" + std::string(judgment_id) + ":" + std::to_string(para_num);
}

namespace {

float load_f32le(const char* p) {
  std::uint32_t bits = 0;
  for (int i = 3; i >= 0; --i) bits = (bits << 8) | static_cast<unsigned char>(p[i]);
  return std::bit_cast<float>(bits);
}

void store_f32le(float v, std::string& out) {
  const auto bits = std::bit_cast<std::uint32_t>(v);
  for (int i = 0; i < 4; ++i) out += static_cast<char>((bits >> (8 * i)) & 0xFF);
}

}  // namespace

EmbeddingStore read_embedding_store(const fs::path& dir) {
  json manifest;
  try {
    manifest = json::parse(read_file(dir / "manifest.json"));
  } catch (const json::exception& e) {
    throw ParseError((dir / "manifest.json").string() + ": " + e.what());
  }
  const auto granularity_name = manifest.at("granularity").get<std::string>();
  Granularity granularity;
  if (granularity_name == "single") {
    granularity = Granularity::kSingle;
  } else if (granularity_name == "token") {
    granularity = Granularity::kToken;
  } else {
    throw ParseError("unknown granularity '" + granularity_name + "'");
  }
  if (manifest.value("dtype", "f32le") != "f32le") {
    throw ParseError("unsupported dtype " + manifest.value("dtype", ""));
  }
  const auto dim = manifest.at("dim").get<Eigen::Index>();
  const auto count = manifest.at("count").get<std::size_t>();
  const bool normalized = manifest.value("normalized", false);
  if (dim < 1) throw ParseError("manifest dim must be positive");

  std::vector<std::string> keys;
  std::vector<Eigen::Index> token_counts;
  std::istringstream ids(read_file(dir / "ids.tsv"));
  std::string line;
  while (std::getline(ids, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (granularity == Granularity::kToken) {
      if (tab == std::string::npos) throw ParseError("ids.tsv: token count missing for " + line);
      keys.push_back(line.substr(0, tab));
      try {
        token_counts.push_back(std::stoll(line.substr(tab + 1)));
      } catch (const std::exception&) {
        throw ParseError("ids.tsv: bad token count in '" + line + "'");
      }
    } else {
      keys.push_back(tab == std::string::npos ? line : line.substr(0, tab));
      token_counts.push_back(1);
    }
  }
  if (keys.size() != count) {
    throw ParseError("manifest count " + std::to_string(count) + " but ids.tsv has " +
                     std::to_string(keys.size()) + " keys");
  }
  Eigen::Index total_rows = 0;
  for (auto c : token_counts) total_rows += c;

  const std::string bytes = read_file(dir / "vectors.bin");
  const auto expected = static_cast<std::size_t>(total_rows * dim) * 4;
  if (bytes.size() != expected) {
    throw ParseError("vectors.bin has " + std::to_string(bytes.size()) + " bytes, expected " +
                     std::to_string(expected));
  }
  EmbeddingStore::Matrix rows(total_rows, dim);
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(rows.data(), bytes.data(), bytes.size());
  } else {
    for (Eigen::Index i = 0; i < rows.size(); ++i) {
      rows.data()[i] = load_f32le(bytes.data() + 4 * i);
    }
  }
  try {
    return EmbeddingStore(granularity, normalized, std::move(keys), std::move(token_counts),
                          std::move(rows));
  } catch (const DimensionError& e) {
    throw ParseError(dir.string() + ": " + e.what());
  }
}

void write_embedding_store(const fs::path& dir, const EmbeddingStore& store) {
  fs::create_directories(dir);
  const json manifest = {{"granularity", to_string(store.granularity())},
                         {"dim", store.dim()},
                         {"count", store.size()},
                         {"dtype", "f32le"},
                         {"normalized", store.normalized()}};
  std::string ids;
  for (const auto& key : store.keys()) {
    ids += key;
    if (store.granularity() == Granularity::kToken) {
      ids += '\t';
      ids += std::to_string(store.token_count(key));
    }
    ids += '\n';
  }
  std::string bytes;
  const auto& m = store.matrix();
  bytes.reserve(static_cast<std::size_t>(m.size()) * 4);
  for (Eigen::Index i = 0; i < m.size(); ++i) store_f32le(m.data()[i], bytes);

  write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
  write_file_atomic(dir / "ids.tsv", ids);
  write_file_atomic(dir / "vectors.bin", bytes);
}

}  // namespace jurisrank
