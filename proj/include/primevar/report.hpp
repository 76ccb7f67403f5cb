#pragma once

// CSV (RFC 4180) and config-file helpers shared by the CLI and tests.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace primevar::report {

std::string csv_escape(const std::string& field);
std::string csv_row(const std::vector<std::string>& fields);
std::string fmt_double(double v);  // shortest round-trip-stable form

// key=value file, '#' comments; later keys win
std::map<std::string, std::string> parse_config(const std::string& path);

std::uint64_t fnv1a_file(const std::string& path);  // 0 if unreadable

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace primevar::report
