#include "porohom/common/io.hpp"

#include "porohom/common/error.hpp"

#include <fstream>

namespace porohom {

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

LineReader::LineReader(const std::string& text, std::string source) : source_(std::move(source)) {
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    lines_.push_back(line);
    numbers_.push_back(n);
  }
}

std::istringstream LineReader::next() {
  if (done()) throw ParseError(source_ + ": unexpected end of input");
  return std::istringstream(lines_[pos_++]);
}

void LineReader::fail(const std::string& what) const {
  throw ParseError(source_ + ":" + std::to_string(line_number()) + ": " + what);
}

const char* BinaryReader::take(std::size_t n) {
  if (n > remaining()) {
    fail("truncated: needed " + std::to_string(n) + " more bytes, " + std::to_string(remaining()) + " left");
  }
  const char* p = bytes_.data() + pos_;
  pos_ += n;
  return p;
}

void BinaryReader::expect_end() const {
  if (remaining() != 0) fail(std::to_string(remaining()) + " trailing bytes");
}

void BinaryReader::fail(const std::string& what) const {
  throw ParseError(source_ + ": " + what + " (offset " + std::to_string(pos_) + ")");
}

}  // namespace porohom
