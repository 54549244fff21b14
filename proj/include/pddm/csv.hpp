#ifndef PDDM_CSV_H_
#define PDDM_CSV_H_

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace pddm {

// shortest decimal form that parses back to the exact same double (including
// inf/nan spellings); CSV output must survive a round trip bit for bit
std::string FormatDouble(double value);

// inverse of FormatDouble (strtod); throws std::invalid_argument on garbage
double ParseDouble(const std::string& text);

// minimal CSV writer: comma separator, '\n' rows, RFC-style quoting only when
// a field needs it. deterministic output for deterministic inputs (no locale,
// no timestamps).
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);

  void WriteRow(const std::vector<std::string>& fields);
  void Close();  // flushes; throws std::runtime_error if the stream failed

  static std::string Escape(const std::string& field);

 private:
  std::ofstream out_;
  std::string path_;
  size_t columns_;
};

// reads a CSV written by CsvWriter; first row is the header
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int ColumnIndex(const std::string& name) const;  // -1 when absent
};

CsvTable ReadCsv(const std::string& path);

}  // namespace pddm

#endif  // PDDM_CSV_H_
