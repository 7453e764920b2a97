#include "cyic/io.hpp"

#include "cyic/error.hpp"

#include <zlib.h>

#include <cstdio>
#include <cstring>

namespace cyic::io {

namespace {
constexpr std::size_t kReadChunk = 1 << 20;
constexpr std::size_t kWriteChunk = 1 << 20;
}  // namespace

bool is_gzip_path(const std::filesystem::path& path) { return path.extension() == ".gz"; }

struct LineReader::Source {
  std::FILE* plain = nullptr;
  gzFile gz = nullptr;
  ~Source() {
    if (plain) std::fclose(plain);
    if (gz) gzclose(gz);
  }
};

LineReader::LineReader(const std::filesystem::path& path)
    : source_(std::make_unique<Source>()), path_(path), buffer_(kReadChunk) {
  if (is_gzip_path(path)) {
    source_->gz = gzopen(path.c_str(), "rb");
    if (source_->gz) gzbuffer(source_->gz, 1 << 17);
  } else {
    source_->plain = std::fopen(path.c_str(), "rb");
  }
  if (!source_->plain && !source_->gz) throw InputError("cannot open file", path.string());
}

LineReader::~LineReader() = default;

std::size_t LineReader::fill(char* dst, std::size_t capacity) {
  if (source_->plain) return std::fread(dst, 1, capacity, source_->plain);
  const int got = gzread(source_->gz, dst, static_cast<unsigned>(capacity));
  if (got < 0) {
    int code = 0;
    throw InputError(std::string("gzip read failed: ") + gzerror(source_->gz, &code), path_.string());
  }
  return static_cast<std::size_t>(got);
}

bool LineReader::next(std::string_view& line) {
  while (true) {
    const char* start = buffer_.data() + begin_;
    const void* nl = std::memchr(start, '\n', end_ - begin_);
    if (nl) {
      const auto len = static_cast<std::size_t>(static_cast<const char*>(nl) - start);
      line = std::string_view(start, len);
      begin_ += len + 1;
      break;
    }
    if (eof_) {
      if (begin_ == end_) return false;
      line = std::string_view(start, end_ - begin_);
      begin_ = end_;
      break;
    }
    // Compact, grow when a single line exceeds the buffer, then refill.
    const std::size_t pending = end_ - begin_;
    if (begin_ > 0) {
      std::memmove(buffer_.data(), buffer_.data() + begin_, pending);
      begin_ = 0;
      end_ = pending;
    }
    if (end_ == buffer_.size()) buffer_.resize(buffer_.size() * 2);
    const std::size_t got = fill(buffer_.data() + end_, buffer_.size() - end_);
    if (got == 0) eof_ = true;
    end_ += got;
  }
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  ++line_no_;
  return true;
}

struct Writer::Sink {
  std::FILE* plain = nullptr;
  gzFile gz = nullptr;
};

Writer::Writer(const std::filesystem::path& path) : sink_(std::make_unique<Sink>()), path_(path) {
  if (is_gzip_path(path)) {
    // mtime/name are not stored by gzwrite streams, so output stays byte-stable.
    sink_->gz = gzopen(path.c_str(), "wb6");
  } else {
    sink_->plain = std::fopen(path.c_str(), "wb");
  }
  if (!sink_->plain && !sink_->gz) throw InputError("cannot open file for writing", path.string());
  buffer_.reserve(kWriteChunk);
}

Writer::~Writer() {
  try {
    close();
  } catch (...) {
  }
}

Writer& Writer::operator<<(std::string_view s) {
  buffer_.append(s);
  if (buffer_.size() >= kWriteChunk) flush();
  return *this;
}

Writer& Writer::operator<<(char c) {
  buffer_.push_back(c);
  if (buffer_.size() >= kWriteChunk) flush();
  return *this;
}

void Writer::flush() {
  if (buffer_.empty()) return;
  bool ok = true;
  if (sink_->plain) {
    ok = std::fwrite(buffer_.data(), 1, buffer_.size(), sink_->plain) == buffer_.size();
  } else if (sink_->gz) {
    ok = gzwrite(sink_->gz, buffer_.data(), static_cast<unsigned>(buffer_.size())) ==
         static_cast<int>(buffer_.size());
  }
  buffer_.clear();
  if (!ok) throw InputError("write failed", path_.string());
}

void Writer::close() {
  if (!sink_->plain && !sink_->gz) return;
  flush();
  if (sink_->plain) {
    std::fclose(sink_->plain);
    sink_->plain = nullptr;
  }
  if (sink_->gz) {
    gzclose(sink_->gz);
    sink_->gz = nullptr;
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::string out;
  char buf[1 << 16];
  if (is_gzip_path(path)) {
    gzFile gz = gzopen(path.c_str(), "rb");
    if (!gz) throw InputError("cannot open file", path.string());
    int got;
    while ((got = gzread(gz, buf, sizeof buf)) > 0) out.append(buf, static_cast<std::size_t>(got));
    const bool failed = got < 0;
    gzclose(gz);
    if (failed) throw InputError("corrupt gzip stream", path.string());
    return out;
  }
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw InputError("cannot open file", path.string());
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, got);
  std::fclose(f);
  return out;
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  Writer w(path);
  w << contents;
  w.close();
}

}  // namespace cyic::io
