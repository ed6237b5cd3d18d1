#include "ddhit/csv.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "ddhit/config.hpp"
#include "ddhit/errors.hpp"

namespace ddhit {

std::string fmt17(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : path_(path), columns_(columns.size()) {
  out_.open(path);
  if (!out_) throw Error("cannot open output file '" + path + "'");
  for (std::size_t i = 0; i < columns.size(); ++i)
    out_ << (i ? "," : "") << columns[i];
  out_ << "\n";
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  if (fields.size() != columns_)
    throw Error("csv row width mismatch in '" + path_ + "'");
  for (std::size_t i = 0; i < fields.size(); ++i)
    out_ << (i ? "," : "") << fields[i];
  out_ << "\n";
}

void write_manifest(const std::string& dir, const std::string& subcommand,
                    const nlohmann::json& resolved_config, std::uint64_t seed,
                    unsigned workers, const std::vector<std::string>& outputs) {
  nlohmann::json m;
  m["tool"] = "ddhit";
  m["version"] = kVersion;
  m["subcommand"] = subcommand;
  m["config"] = resolved_config;
  m["master_seed"] = seed;
  m["workers"] = workers;
  m["outputs"] = outputs;
  m["timestamp_utc"] = std::chrono::duration_cast<std::chrono::seconds>(
                           std::chrono::system_clock::now().time_since_epoch())
                           .count();
  const std::string path =
      (std::filesystem::path(dir) / ("manifest_" + subcommand + ".json")).string();
  std::ofstream out(path);
  if (!out) throw Error("cannot open manifest '" + path + "'");
  out << m.dump(2) << "\n";
}

}  // namespace ddhit
