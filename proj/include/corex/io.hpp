#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "corex/coreid.hpp"
#include "corex/spectral.hpp"

namespace corex {

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

/// "node_id,score"
void write_scores_csv(const CoreScores& scores, std::ostream& out);

/// "node_id,is_core,score"
void write_partition_csv(const CorePartition& part, const CoreScores& scores, std::ostream& out);

/// Writes to a sibling temporary and renames it into place, so a failed run
/// never leaves a truncated file. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

}  // namespace corex
