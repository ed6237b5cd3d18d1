#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace ddhit {

// Full-precision scientific formatting (17 significant digits) so plotting
// pipelines lose nothing.
std::string fmt17(double v);

// One-line header + rows of preformatted fields.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& fields);
  const std::string& path() const { return path_; }

 private:
  std::ofstream out_;
  std::string path_;
  std::size_t columns_;
};

// Companion manifest: everything needed to regenerate the outputs. The
// timestamp lives only here, keeping the CSVs byte-stable per (config, seed).
void write_manifest(const std::string& dir, const std::string& subcommand,
                    const nlohmann::json& resolved_config, std::uint64_t seed,
                    unsigned workers, const std::vector<std::string>& outputs);

}  // namespace ddhit
