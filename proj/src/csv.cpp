#include "ew/csv.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ew/util.hpp"

namespace ew {
namespace {

constexpr SignalKind kCsvSignals[4] = {SignalKind::HR, SignalKind::SBP, SignalKind::DBP,
                                       SignalKind::MAP};

[[noreturn]] void fail_row(std::size_t row, const std::string& message) {
  throw StageError("ingest", "row " + std::to_string(row) + ": " + message);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_value(const std::string& field, std::size_t row) {
  if (field.empty()) return kMissing;
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(field.c_str(), &end);
  if (errno != 0 || end == field.c_str() || *end != '\0') {
    fail_row(row, "bad numeric field '" + field + "'");
  }
  return v;
}

}  // namespace

std::vector<EntitySeries> read_corpus_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StageError("ingest", "cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw StageError("ingest", "empty file: " + path);
  if (split_fields(line) !=
      std::vector<std::string>{"entity_id", "minute", "hr", "sbp", "dbp", "map"}) {
    throw StageError("ingest", "bad header, expected entity_id,minute,hr,sbp,dbp,map");
  }

  std::vector<EntitySeries> entities;
  EntitySeries* cur = nullptr;
  std::int64_t expected_minute = 0;
  std::size_t row = 1;
  std::vector<std::string> seen_ids;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    auto fields = split_fields(line);
    if (fields.size() != 6) fail_row(row, "expected 6 fields, got " + std::to_string(fields.size()));
    const std::string& id = fields[0];
    if (id.empty()) fail_row(row, "empty entity_id");
    errno = 0;
    char* end = nullptr;
    long long minute = std::strtoll(fields[1].c_str(), &end, 10);
    if (errno != 0 || end == fields[1].c_str() || *end != '\0') {
      fail_row(row, "bad minute '" + fields[1] + "'");
    }
    if (cur == nullptr || cur->entity_id != id) {
      if (std::find(seen_ids.begin(), seen_ids.end(), id) != seen_ids.end()) {
        fail_row(row, "entity " + id + " appears in non-consecutive blocks");
      }
      seen_ids.push_back(id);
      entities.emplace_back();
      cur = &entities.back();
      cur->entity_id = id;
      cur->start_time = minute;
      expected_minute = minute;
    }
    if (minute != expected_minute) {
      fail_row(row, "entity " + id + " minute gap: expected " + std::to_string(expected_minute) +
                        ", got " + std::to_string(minute));
    }
    ++expected_minute;
    for (int s = 0; s < 4; ++s) {
      cur->values(kCsvSignals[s]).push_back(parse_value(fields[2 + static_cast<std::size_t>(s)], row));
    }
  }
  if (entities.empty()) throw StageError("ingest", "no data rows in " + path);
  for (auto& e : entities) e.validate();
  std::sort(entities.begin(), entities.end(),
            [](const EntitySeries& a, const EntitySeries& b) { return a.entity_id < b.entity_id; });
  return entities;
}

void write_corpus_csv(const std::string& path, const std::vector<EntitySeries>& entities) {
  std::ofstream out(path);
  if (!out) throw StageError("io", "cannot write " + path);
  out << "entity_id,minute,hr,sbp,dbp,map\n";
  char buf[64];
  for (const auto& e : entities) {
    std::size_t n = e.length();
    for (std::size_t i = 0; i < n; ++i) {
      out << e.entity_id << ',' << (e.start_time + static_cast<std::int64_t>(i));
      for (SignalKind k : kCsvSignals) {
        out << ',';
        if (e.has(k) && !is_missing(e.values(k)[i])) {
          std::snprintf(buf, sizeof(buf), "%.4f", e.values(k)[i]);
          out << buf;
        }
      }
      out << '\n';
    }
  }
  if (!out) throw StageError("io", "write failed: " + path);
}

}  // namespace ew
