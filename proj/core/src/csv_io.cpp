#include "btrank/csv_io.hpp"

#include <charconv>
#include <fstream>
#include <unordered_map>

#include <json.hpp>

namespace btrank {

namespace {

void strip_carriage_return(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

void check_label_writable(const std::string& label) {
  if (label.find_first_of(",\r\n") != std::string::npos) {
    throw InvalidArgumentError("label not representable in CSV: " + label);
  }
}

}  // namespace

ComparisonData load_csv(std::istream& in, const std::string& name) {
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) {
    throw ParseError(name + ": empty input, expected header winner,loser,count",
                     1);
  }
  ++line_no;
  strip_carriage_return(line);
  if (line != "winner,loser,count") {
    throw ParseError(name + ":1: expected header winner,loser,count", 1);
  }

  std::vector<std::string> labels;
  std::unordered_map<std::string, int> index;
  auto intern = [&](const std::string& label) {
    auto [it, inserted] = index.emplace(label, static_cast<int>(labels.size()));
    if (inserted) labels.push_back(label);
    return it->second;
  };

  struct Row {
    int winner;
    int loser;
    std::int64_t count;
  };
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    ++line_no;
    strip_carriage_return(line);
    if (line.empty()) continue;
    const std::string at = name + ":" + std::to_string(line_no) + ": ";
    const auto fields = split_fields(line);
    if (fields.size() != 3) {
      throw ParseError(at + "expected 3 fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    }
    if (fields[0].empty() || fields[1].empty()) {
      throw ParseError(at + "labels must be nonempty", line_no);
    }
    if (fields[0] == fields[1]) {
      throw ParseError(at + "object compared with itself: " + fields[0],
                       line_no);
    }
    std::int64_t count = 0;
    const char* first = fields[2].data();
    const char* last = first + fields[2].size();
    const auto [ptr, ec] = std::from_chars(first, last, count);
    if (ec != std::errc() || ptr != last) {
      throw ParseError(at + "bad count: " + fields[2], line_no);
    }
    if (count < 0) {
      throw ParseError(at + "count must be nonnegative", line_no);
    }
    rows.push_back({intern(fields[0]), intern(fields[1]), count});
  }
  if (labels.empty()) {
    throw ParseError(name + ": no data rows", line_no);
  }

  const auto n = static_cast<Eigen::Index>(labels.size());
  CountMatrix wins = CountMatrix::Zero(n, n);
  for (const Row& row : rows) {
    std::int64_t& cell = wins(row.winner, row.loser);
    if (__builtin_add_overflow(cell, row.count, &cell)) {
      throw CountOverflowError("win count overflows int64 for pair " +
                               labels[row.winner] + " vs " + labels[row.loser]);
    }
  }
  return ComparisonData(std::move(labels), std::move(wins));
}

ComparisonData load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open for reading: " + path);
  }
  return load_csv(in, path);
}

void save_csv(const ComparisonData& data, std::ostream& out) {
  for (const std::string& label : data.labels()) check_label_writable(label);
  const CountMatrix& wins = data.wins();
  const int n = data.n();

  out << "winner,loser,count\n";
  // Spine: one row per adjacent label pair, count possibly 0, so that a
  // reload sees labels in the original order before any other rows.
  for (int k = 1; k < n; ++k) {
    out << data.label(k - 1) << ',' << data.label(k) << ',' << wins(k - 1, k)
        << '\n';
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j || wins(i, j) == 0) continue;
      if (j == i + 1) continue;  // already on the spine
      out << data.label(i) << ',' << data.label(j) << ',' << wins(i, j)
          << '\n';
    }
  }
  if (!out) {
    throw IoError("write failure while saving CSV");
  }
}

void save_csv(const ComparisonData& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open for writing: " + path);
  }
  save_csv(data, out);
}

std::string to_json(const ComparisonData& data) {
  nlohmann::ordered_json doc;
  doc["labels"] = data.labels();
  auto rows = nlohmann::ordered_json::array();
  for (int i = 0; i < data.n(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (int j = 0; j < data.n(); ++j) row.push_back(data.wins()(i, j));
    rows.push_back(std::move(row));
  }
  doc["W"] = std::move(rows);
  return doc.dump(2);
}

void save_json(const ComparisonData& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open for writing: " + path);
  }
  out << to_json(data) << '\n';
  if (!out) {
    throw IoError("write failure while saving JSON");
  }
}

}  // namespace btrank
