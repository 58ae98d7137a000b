#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace porohom {

/// Whole-file read; ParseError when the file cannot be opened.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Non-empty lines with '#' comments stripped, as whitespace-split token streams.
class LineReader {
 public:
  explicit LineReader(const std::string& text, std::string source = "input");

  bool done() const { return pos_ >= lines_.size(); }
  /// Next significant line; ParseError at end of input.
  std::istringstream next();
  std::size_t line_number() const { return numbers_.empty() || pos_ == 0 ? 0 : numbers_[pos_ - 1]; }
  [[noreturn]] void fail(const std::string& what) const;

 private:
  std::vector<std::string> lines_;
  std::vector<std::size_t> numbers_;
  std::size_t pos_ = 0;
  std::string source_;
};

/// Reads exactly the listed values from a line; ParseError on shortfall or trailing tokens.
template <typename... Ts>
void read_fields(LineReader& reader, Ts&... out) {
  auto line = reader.next();
  ((line >> out), ...);
  if (line.fail()) reader.fail("malformed line");
  std::string extra;
  if (line >> extra) reader.fail("unexpected token '" + extra + "'");
}

/// Little-endian byte buffer for the binary artifact formats (host order is assumed little-endian).
class BinaryWriter {
 public:
  template <typename T>
  void put(T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    const auto* p = reinterpret_cast<const char*>(&value);
    bytes_.append(p, sizeof(T));
  }
  void put_bytes(std::string_view raw) { bytes_.append(raw); }
  void put_doubles(std::span<const double> values) {
    bytes_.append(reinterpret_cast<const char*>(values.data()), values.size_bytes());
  }
  const std::string& bytes() const { return bytes_; }
  void save(const std::filesystem::path& path) const { write_text_file(path, bytes_); }

 private:
  std::string bytes_;
};

/// Cursor over a byte buffer; every read past the end throws ParseError.
class BinaryReader {
 public:
  BinaryReader(std::string bytes, std::string source) : bytes_(std::move(bytes)), source_(std::move(source)) {}

  template <typename T>
  T get() {
    static_assert(std::is_trivially_copyable_v<T>);
    T value;
    std::memcpy(&value, take(sizeof(T)), sizeof(T));
    return value;
  }
  std::string get_bytes(std::size_t n) { return std::string(take(n), n); }
  void get_doubles(std::span<double> out) { std::memcpy(out.data(), take(out.size_bytes()), out.size_bytes()); }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  /// ParseError unless the whole buffer was consumed.
  void expect_end() const;
  [[noreturn]] void fail(const std::string& what) const;

 private:
  const char* take(std::size_t n);
  std::string bytes_;
  std::string source_;
  std::size_t pos_ = 0;
};

}  // namespace porohom
