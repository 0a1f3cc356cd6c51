#include "visemelab/feature_io.hpp"

#include <cstring>

#include "visemelab/error.hpp"
#include "visemelab/text_util.hpp"

namespace visemelab {

namespace {

template <typename T>
void put(std::string& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char buf[sizeof(T)];
  std::uint64_t bits = 0;
  std::memcpy(&bits, &value, sizeof(T));
  for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.append(reinterpret_cast<const char*>(buf), sizeof(T));
}

class Reader {
 public:
  Reader(const std::string& bytes, const std::string& source) : bytes_(bytes), source_(source) {}

  template <typename T>
  T get() {
    if (pos_ + sizeof(T) > bytes_.size()) throw ParseError(source_, 0, "truncated feature file");
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += sizeof(T);
    T value;
    std::memcpy(&value, &bits, sizeof(T));
    return value;
  }

  std::string take(std::size_t n) {
    if (pos_ + n > bytes_.size()) throw ParseError(source_, 0, "truncated feature file");
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  const std::string& bytes_;
  const std::string& source_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string encode_features(const FeatureDataset& ds) {
  std::string out = "PPFD";
  put<std::uint32_t>(out, kFeatureFormatVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(ds.dim));
  put<std::uint64_t>(out, ds.inventory_hash);
  put<std::uint64_t>(out, ds.seed);
  put<std::uint64_t>(out, ds.num_items());
  for (std::size_t i = 0; i < ds.num_items(); ++i) {
    std::size_t b = ds.item_offsets[i], e = ds.item_offsets[i + 1];
    put<std::uint32_t>(out, static_cast<std::uint32_t>(e - b));
    for (std::size_t f = b; f < e; ++f) put<std::uint32_t>(out, ds.labels[f]);
    for (std::size_t k = b * ds.dim; k < e * ds.dim; ++k) put<float>(out, ds.features[k]);
  }
  return out;
}

FeatureDataset decode_features(const std::string& bytes, const std::string& source) {
  Reader r(bytes, source);
  if (r.take(4) != "PPFD") throw ParseError(source, 0, "not a feature file (bad magic)");
  auto version = r.get<std::uint32_t>();
  if (version != kFeatureFormatVersion) {
    throw ParseError(source, 0, "unsupported feature file version " + std::to_string(version));
  }
  FeatureDataset ds;
  ds.dim = static_cast<int>(r.get<std::uint32_t>());
  ds.inventory_hash = r.get<std::uint64_t>();
  ds.seed = r.get<std::uint64_t>();
  auto items = r.get<std::uint64_t>();
  for (std::uint64_t i = 0; i < items; ++i) {
    auto frames = r.get<std::uint32_t>();
    for (std::uint32_t f = 0; f < frames; ++f) ds.labels.push_back(r.get<std::uint32_t>());
    for (std::uint64_t k = 0; k < static_cast<std::uint64_t>(frames) * ds.dim; ++k) {
      ds.features.push_back(r.get<float>());
    }
    ds.item_offsets.push_back(ds.labels.size());
  }
  if (!r.done()) throw ParseError(source, 0, "trailing bytes after last item");
  return ds;
}

void save_features(const std::string& path, const FeatureDataset& ds) {
  write_file_atomic(path, encode_features(ds));
}

FeatureDataset load_features(const std::string& path) {
  return decode_features(read_text_file(path), path);
}

}  // namespace visemelab
