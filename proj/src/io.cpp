#include "corex/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "corex/error.hpp"

namespace corex {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_scores_csv(const CoreScores& scores, std::ostream& out) {
  out << "node_id,score\n";
  for (std::size_t i = 0; i < scores.size(); ++i) out << i << ',' << format_double(scores.values[i]) << '\n';
}

void write_partition_csv(const CorePartition& part, const CoreScores& scores, std::ostream& out) {
  if (part.labels.size() != scores.size()) throw DomainError("partition and scores differ in length");
  out << "node_id,is_core,score\n";
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out << i << ',' << (part.labels[i] ? 1 : 0) << ',' << format_double(scores.values[i]) << '\n';
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move " + tmp.string() + " into place");
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace corex
