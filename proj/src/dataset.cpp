#include "ew/dataset.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "ew/series.hpp"
#include "ew/util.hpp"

static_assert(std::endian::native == std::endian::little, "cache format assumes little-endian");

namespace ew {
namespace {

constexpr char kMagic[4] = {'E', 'W', 'F', 'C'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <class T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!in) throw StageError("cache", "truncated dataset cache");
  return v;
}

void put_string(std::ofstream& out, const std::string& s) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::ifstream& in) {
  auto len = get<std::uint32_t>(in);
  std::string s(len, '\0');
  in.read(s.data(), len);
  if (!in) throw StageError("cache", "truncated dataset cache");
  return s;
}

}  // namespace

void Dataset::validate() const {
  std::size_t n = rows();
  if (x.size() != n * n_cols) throw StageError("dataset", "feature matrix size mismatch");
  if (y.size() != n || group.size() != n || t.size() != n) {
    throw StageError("dataset", "row counts disagree across fields");
  }
  if (!y_s.empty() && (y_s.size() != n || y_f.size() != n)) {
    throw StageError("dataset", "layered label vectors must cover all rows");
  }
  for (std::int8_t v : y) {
    if (v != 0 && v != 1) throw StageError("dataset", "labels must be 0/1");
  }
  for (std::uint32_t g : group) {
    if (g >= group_names.size()) throw StageError("dataset", "group index out of range");
  }
}

void Dataset::append_row_from(const Dataset& src, std::size_t i) {
  x.insert(x.end(), src.x.begin() + static_cast<std::ptrdiff_t>(i * src.n_cols),
           src.x.begin() + static_cast<std::ptrdiff_t>((i + 1) * src.n_cols));
  y.push_back(src.y[i]);
  if (!src.y_s.empty()) {
    y_s.push_back(src.y_s[i]);
    y_f.push_back(src.y_f[i]);
  }
  group.push_back(src.group[i]);
  t.push_back(src.t[i]);
}

void write_dataset_cache(const std::string& path, const Dataset& ds,
                         const std::vector<std::string>& schema) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw StageError("cache", "cannot write " + path);
  out.write(kMagic, 4);
  put<std::uint32_t>(out, kVersion);
  put<std::uint64_t>(out, ds.rows());
  put<std::uint64_t>(out, ds.n_cols);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(schema.size()));
  for (const auto& s : schema) put_string(out, s);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(ds.group_names.size()));
  for (const auto& g : ds.group_names) put_string(out, g);
  put<std::uint8_t>(out, ds.has_layered_labels() ? 1 : 0);
  std::size_t n = ds.rows();
  for (std::size_t i = 0; i < n; ++i) {
    put<std::uint32_t>(out, ds.group[i]);
    put<std::int64_t>(out, ds.t[i]);
    put<std::int8_t>(out, ds.y[i]);
    if (ds.has_layered_labels()) {
      put<std::int8_t>(out, ds.y_s[i]);
      put<std::int8_t>(out, ds.y_f[i]);
    }
  }
  out.write(reinterpret_cast<const char*>(ds.x.data()),
            static_cast<std::streamsize>(ds.x.size() * sizeof(double)));
  if (!out) throw StageError("cache", "write failed: " + path);
}

Dataset read_dataset_cache(const std::string& path, std::vector<std::string>* schema_out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StageError("cache", "cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw StageError("cache", "not a dataset cache: " + path);
  }
  auto version = get<std::uint32_t>(in);
  if (version != kVersion) {
    throw StageError("cache", "unsupported cache version " + std::to_string(version));
  }
  auto rows = get<std::uint64_t>(in);
  auto cols = get<std::uint64_t>(in);
  auto n_schema = get<std::uint32_t>(in);
  std::vector<std::string> schema;
  schema.reserve(n_schema);
  for (std::uint32_t i = 0; i < n_schema; ++i) schema.push_back(get_string(in));
  if (schema.size() != cols) throw StageError("cache", "schema length != column count");
  Dataset ds;
  ds.n_cols = cols;
  auto n_groups = get<std::uint32_t>(in);
  for (std::uint32_t i = 0; i < n_groups; ++i) ds.group_names.push_back(get_string(in));
  bool layered = get<std::uint8_t>(in) != 0;
  ds.y.reserve(rows);
  ds.group.reserve(rows);
  ds.t.reserve(rows);
  for (std::uint64_t i = 0; i < rows; ++i) {
    ds.group.push_back(get<std::uint32_t>(in));
    ds.t.push_back(get<std::int64_t>(in));
    ds.y.push_back(get<std::int8_t>(in));
    if (layered) {
      ds.y_s.push_back(get<std::int8_t>(in));
      ds.y_f.push_back(get<std::int8_t>(in));
    }
  }
  ds.x.resize(rows * cols);
  in.read(reinterpret_cast<char*>(ds.x.data()),
          static_cast<std::streamsize>(ds.x.size() * sizeof(double)));
  if (!in) throw StageError("cache", "truncated dataset cache");
  ds.validate();
  if (schema_out) *schema_out = std::move(schema);
  return ds;
}

void write_dataset_csv(const std::string& path, const Dataset& ds,
                       const std::vector<std::string>& schema) {
  std::ofstream out(path);
  if (!out) throw StageError("io", "cannot write " + path);
  out << "entity_id,t_start,y";
  if (ds.has_layered_labels()) out << ",y_s,y_f";
  for (const auto& s : schema) out << ',' << s;
  out << '\n';
  char buf[64];
  std::size_t n = ds.rows();
  for (std::size_t i = 0; i < n; ++i) {
    out << ds.group_names[ds.group[i]] << ',' << ds.t[i] << ',' << int(ds.y[i]);
    if (ds.has_layered_labels()) {
      out << ',' << int(ds.y_s[i]) << ',' << int(ds.y_f[i]);
    }
    auto r = ds.row(i);
    for (double v : r) {
      out << ',';
      if (!is_missing(v)) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out << buf;
      }
    }
    out << '\n';
  }
  if (!out) throw StageError("io", "write failed: " + path);
}

}  // namespace ew
