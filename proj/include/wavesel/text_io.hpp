#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace wavesel {

/// Shortest-of-9-significant-digits float formatting used by all CSV output.
std::string format_g9(double v);

/// 17 significant digits: doubles round-trip exactly through this form.
std::string format_g17(double v);

/// Strict double parse of an entire token. Throws ParseError otherwise.
double parse_double(const std::string& token, const std::string& context);

/// Strict integer parse of an entire token. Throws ParseError otherwise.
std::int64_t parse_int(const std::string& token, const std::string& context);

/// Splits one CSV line on commas. No quoting: none of the formats here
/// embed commas in fields.
std::vector<std::string> split_csv(const std::string& line);

std::string strip(const std::string& s);

/// Writes `content` to `path` atomically: temp file in the same directory,
/// then rename. Interrupted runs never leave a partial file at `path`.
void atomic_write_file(const std::string& path, const std::string& content);

/// Reads an entire file. Throws IoError when the file cannot be opened.
std::string read_file(const std::string& path);

/// Splits file content into lines, accepting both LF and CRLF endings.
std::vector<std::string> split_lines(const std::string& content);

/// FNV-1a 64-bit hash, used for config provenance fingerprints.
std::uint64_t fnv1a64(const std::string& data);

}  // namespace wavesel
