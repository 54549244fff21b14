#include "pddm/csv.hpp"

#include <charconv>
#include <cstdlib>
#include <stdexcept>

namespace pddm {

std::string FormatDouble(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc()) throw std::runtime_error("FormatDouble: conversion failed");
  return std::string(buffer, ptr);
}

double ParseDouble(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("ParseDouble: empty field");
  const char* begin = text.c_str();
  char* end = nullptr;
  double value = std::strtod(begin, &end);
  if (end != begin + text.size()) {
    throw std::invalid_argument("ParseDouble: not a number: '" + text + "'");
  }
  return value;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary), path_(path), columns_(header.size()) {
  if (!out_) throw std::runtime_error("cannot open CSV for writing: " + path);
  WriteRow(header);
}

void CsvWriter::WriteRow(const std::vector<std::string>& fields) {
  if (fields.size() != columns_) {
    throw std::logic_error("CSV row width mismatch in " + path_);
  }
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out_ << ',';
    out_ << Escape(fields[i]);
  }
  out_ << '\n';
}

void CsvWriter::Close() {
  out_.flush();
  if (!out_) throw std::runtime_error("CSV write failed: " + path_);
  out_.close();
}

std::string CsvWriter::Escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

int CsvTable::ColumnIndex(const std::string& name) const {
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

CsvTable ReadCsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open CSV for reading: " + path);

  CsvTable table;
  std::string line;
  bool first = true;
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;  // survives across physical lines: quoted fields may hold newlines
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (quoted) field += '\n';  // the line break belonged to the quoted field
    for (size_t i = 0; i < line.size(); ++i) {
      char c = line[i];
      if (quoted) {
        if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else if (c == '"') {
          quoted = false;
        } else {
          field += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        fields.push_back(std::move(field));
        field.clear();
      } else {
        field += c;
      }
    }
    if (quoted) continue;  // the field runs on; keep accumulating
    fields.push_back(std::move(field));
    field.clear();
    if (first) {
      table.header = std::move(fields);
      first = false;
    } else {
      table.rows.push_back(std::move(fields));
    }
    fields.clear();
  }
  if (quoted) throw std::runtime_error("unterminated quoted field in " + path);
  return table;
}

}  // namespace pddm
