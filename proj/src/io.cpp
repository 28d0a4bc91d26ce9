#include "sideinfo/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sideinfo/error.hpp"

namespace sideinfo::io {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void parse_error(const std::string& source, std::size_t line, const std::string& what) {
  std::ostringstream msg;
  msg << source << ":" << line << ": " << what;
  fail(ErrorCode::kParse, msg.str());
}

bool parse_index(std::string_view text, std::size_t& out) {
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool parse_real(std::string_view text, double& out) {
  // from_chars for double is available in libstdc++ 11.
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

struct Row {
  std::size_t line;
  std::vector<std::string_view> fields;
};

// Splits non-empty, non-comment lines into trimmed comma-separated fields.
// `storage` owns the text the views point into.
std::vector<Row> split_rows(std::istream& in, std::vector<std::string>& storage) {
  std::string line;
  std::size_t number = 0;
  std::vector<std::pair<std::size_t, std::size_t>> kept;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    storage.emplace_back(view);
    kept.emplace_back(number, storage.size() - 1);
  }
  std::vector<Row> rows;
  for (auto [lineno, idx] : kept) {
    Row row{lineno, {}};
    std::string_view rest = storage[idx];
    while (true) {
      auto comma = rest.find(',');
      row.fields.push_back(trim(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

template <typename Value, typename ParseValue>
std::vector<Value> parse_indexed(std::istream& in, const std::string& source, ParseValue parse_value,
                                 const char* what) {
  std::vector<std::string> storage;
  auto rows = split_rows(in, storage);
  struct Entry {
    std::size_t line;
    std::size_t index;
    Value value;
  };
  std::vector<Entry> entries;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Row& row = rows[r];
    if (row.fields.size() != 2) parse_error(source, row.line, "expected 2 comma-separated fields");
    std::size_t index = 0;
    if (!parse_index(row.fields[0], index)) {
      if (r == 0) continue;  // header
      parse_error(source, row.line, "invalid index '" + std::string(row.fields[0]) + "'");
    }
    Value value{};
    if (!parse_value(row.fields[1], value)) {
      parse_error(source, row.line, std::string("invalid ") + what + " '" + std::string(row.fields[1]) + "'");
    }
    entries.push_back({row.line, index, value});
  }
  if (entries.empty()) fail(ErrorCode::kParse, source + ": no data rows");
  std::vector<Value> values(entries.size());
  std::vector<bool> seen(entries.size(), false);
  for (const auto& [line, index, value] : entries) {
    if (index >= entries.size()) {
      parse_error(source, line,
                  "index " + std::to_string(index) + " out of range for " + std::to_string(entries.size()) + " rows");
    }
    if (seen[index]) parse_error(source, line, "index " + std::to_string(index) + " repeated");
    seen[index] = true;
    values[index] = value;
  }
  return values;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open '" + path + "'");
  return in;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

Distribution parse_distribution(std::istream& in, const std::string& source) {
  auto probs = parse_indexed<double>(in, source, parse_real, "probability");
  return Distribution(std::move(probs));
}

std::vector<std::uint64_t> parse_counts(std::istream& in, const std::string& source) {
  auto parse_count = [](std::string_view text, std::uint64_t& out) {
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc() && ptr == end;
  };
  return parse_indexed<std::uint64_t>(in, source, parse_count, "count");
}

std::vector<Symbol> parse_symbol_list(std::istream& in, const std::string& source) {
  std::vector<std::string> storage;
  auto rows = split_rows(in, storage);
  std::vector<Symbol> out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::size_t index = 0;
    if (!parse_index(rows[r].fields[0], index)) {
      if (r == 0) continue;
      parse_error(source, rows[r].line, "invalid index '" + std::string(rows[r].fields[0]) + "'");
    }
    out.push_back(index);
  }
  return out;
}

std::string read_file(const std::string& path) {
  auto in = open_input(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Distribution read_distribution(const std::string& path) {
  auto in = open_input(path);
  return parse_distribution(in, path);
}

std::vector<std::uint64_t> read_counts(const std::string& path) {
  auto in = open_input(path);
  return parse_counts(in, path);
}

std::vector<Symbol> read_symbol_list(const std::string& path) {
  auto in = open_input(path);
  return parse_symbol_list(in, path);
}

void write_distribution(std::ostream& out, const Distribution& dist) {
  out << "index,prob\n";
  for (std::size_t i = 0; i < dist.size(); ++i) out << i << ',' << format_double(dist[i]) << '\n';
}

void write_counts(std::ostream& out, std::span<const std::uint64_t> counts) {
  out << "index,count\n";
  for (std::size_t i = 0; i < counts.size(); ++i) out << i << ',' << counts[i] << '\n';
}

void write_lexicon(std::ostream& out, const std::vector<std::string>& tokens) {
  out << "index,token\n";
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& t = tokens[i];
    out << i << ',';
    if (t.find_first_of(",\"") == std::string::npos) {
      out << t << '\n';
      continue;
    }
    out << '"';
    for (char c : t) out << (c == '"' ? "\"\"" : std::string(1, c));
    out << "\"\n";
  }
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write '" + path + "'");
  out << content;
  if (!out) fail(ErrorCode::kIo, "write to '" + path + "' failed");
}

std::string format_risk_reports(const std::vector<RiskReport>& reports) {
  static const char* const kBoundOrder[] = {"ub_interp", "lb_lecam", "lb_uniform", "lb_general"};
  std::vector<std::string> bound_cols;
  for (const char* name : kBoundOrder) {
    bool present = false;
    for (const auto& r : reports) {
      for (const auto& b : r.bounds) {
        if (std::string(name) == "ub_interp") present = present || b.upper.has_value();
        for (const auto& [lname, v] : b.lowers) present = present || lname == name;
      }
    }
    if (present) bound_cols.emplace_back(name);
  }
  std::vector<std::string> extra_cols;
  for (const auto& r : reports) {
    for (const auto& p : r.grid) {
      for (const auto& [name, v] : p.extra) {
        if (std::find(extra_cols.begin(), extra_cols.end(), name) == extra_cols.end()) extra_cols.push_back(name);
      }
    }
  }

  std::ostringstream out;
  out << "# schema: sideinfo-risk/1\n";
  out << "estimator,n,loss,stderr,trials,failures";
  for (const auto& c : bound_cols) out << ',' << c;
  for (const auto& c : extra_cols) out << ',' << c;
  out << '\n';
  for (const auto& r : reports) {
    for (const auto& p : r.grid) {
      out << r.estimator << ',' << p.n << ',' << format_double(p.loss) << ',' << format_double(p.std_error) << ','
          << p.trials << ',' << p.failures;
      const BoundOverlay* overlay = nullptr;
      for (const auto& b : r.bounds) {
        if (b.n == p.n) overlay = &b;
      }
      for (const auto& c : bound_cols) {
        out << ',';
        if (!overlay) continue;
        if (c == "ub_interp") {
          if (overlay->upper) out << format_double(*overlay->upper);
          continue;
        }
        for (const auto& [lname, v] : overlay->lowers) {
          if (lname == c) out << format_double(v);
        }
      }
      for (const auto& c : extra_cols) {
        out << ',';
        for (const auto& [name, v] : p.extra) {
          if (name == c) out << format_double(v);
        }
      }
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace sideinfo::io
