#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ldp {

/// Shortest text that round-trips a double ("%.17g"); nan and inf spelled as such.
std::string fmt(double v);
std::string fmt(std::size_t v);

/// A rectangular CSV table of preformatted cells.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
  std::string to_csv() const;
};

/// SHA-1 of "blob <size>\0<content>", hex encoded (the identifier git gives the same bytes).
std::string git_blob_hash(std::string_view content);

void write_text(const std::filesystem::path& path, std::string_view content);
std::string read_text(const std::filesystem::path& path);

}  // namespace ldp
