#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace cyic::io {

bool is_gzip_path(const std::filesystem::path& path);

/// Buffered line reader over a plain or gzip file (chosen by the `.gz` extension).
/// Returned views stay valid until the next call to next().
class LineReader {
 public:
  explicit LineReader(const std::filesystem::path& path);
  ~LineReader();
  LineReader(const LineReader&) = delete;
  LineReader& operator=(const LineReader&) = delete;

  /// False at end of file. Trailing '\r' is stripped.
  bool next(std::string_view& line);
  std::size_t line_number() const noexcept { return line_no_; }
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::size_t fill(char* dst, std::size_t capacity);

  struct Source;
  std::unique_ptr<Source> source_;
  std::filesystem::path path_;
  std::vector<char> buffer_;
  std::size_t begin_ = 0;
  std::size_t end_ = 0;
  bool eof_ = false;
  std::size_t line_no_ = 0;
};

/// Buffered writer, gzip when the path ends in `.gz`. Flushes and closes on close()/destruction.
class Writer {
 public:
  explicit Writer(const std::filesystem::path& path);
  ~Writer();
  Writer(const Writer&) = delete;
  Writer& operator=(const Writer&) = delete;

  Writer& operator<<(std::string_view s);
  Writer& operator<<(char c);
  void close();

 private:
  void flush();

  struct Sink;
  std::unique_ptr<Sink> sink_;
  std::filesystem::path path_;
  std::string buffer_;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace cyic::io
