#pragma once

// CSV file formats shared by the library and the command-line tool.
//
//   distribution file:  index,prob     (header line optional)
//   counts file:        index,count    (header line optional)
//   partition file:     index          (one low-set symbol per line)
//   lexicon file:       index,token
//
// Lines may end in LF or CRLF. Lines starting with '#' are comments. Every
// index in [0, d) must appear exactly once in distribution and counts files.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sideinfo/core.hpp"

namespace sideinfo::io {

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

Distribution parse_distribution(std::istream& in, const std::string& source = "<stream>");
std::vector<std::uint64_t> parse_counts(std::istream& in, const std::string& source = "<stream>");
std::vector<Symbol> parse_symbol_list(std::istream& in, const std::string& source = "<stream>");

Distribution read_distribution(const std::string& path);
std::vector<std::uint64_t> read_counts(const std::string& path);
std::vector<Symbol> read_symbol_list(const std::string& path);
std::string read_file(const std::string& path);

void write_distribution(std::ostream& out, const Distribution& dist);
void write_counts(std::ostream& out, std::span<const std::uint64_t> counts);
void write_lexicon(std::ostream& out, const std::vector<std::string>& tokens);

// Writes `content` to `path`, or to standard output when path is "-" or empty.
void write_output(const std::string& path, const std::string& content);

}  // namespace sideinfo::io

namespace sideinfo::io {

// Risk report table, schema sideinfo-risk/1:
//   estimator,n,loss,stderr,trials,failures[,bound columns][,extra columns]
// Bound columns appear in the order ub_interp, lb_lecam, lb_uniform,
// lb_general, each only when some report carries it; extras follow in
// first-seen order. Absent values are empty fields.
std::string format_risk_reports(const std::vector<RiskReport>& reports);

}  // namespace sideinfo::io
