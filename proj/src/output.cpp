#include "trapcool/output.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "trapcool/errors.hpp"

namespace trapcool {

namespace {

std::string csv_cell(const Cell& c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(double x) const { return std::isfinite(x) ? format_double(x) : std::string(); }
    std::string operator()(long long x) const { return std::to_string(x); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
      }
      return q + '"';
    }
  };
  return std::visit(Visitor{}, c);
}

nlohmann::json json_cell(const Cell& c) {
  struct Visitor {
    nlohmann::json operator()(std::monostate) const { return nullptr; }
    nlohmann::json operator()(double x) const {
      return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
    }
    nlohmann::json operator()(long long x) const { return x; }
    nlohmann::json operator()(bool b) const { return b; }
    nlohmann::json operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, c);
}

}  // namespace

std::string render_table(const Table& t, OutputFormat f) {
  for (const auto& row : t.rows) {
    if (row.size() != t.columns.size()) throw Error(ErrorKind::dimension_mismatch, "table row width");
  }
  if (f == OutputFormat::csv) {
    std::string out;
    for (std::size_t j = 0; j < t.columns.size(); ++j) {
      if (j) out += ',';
      out += t.columns[j];
    }
    out += '\n';
    for (const auto& row : t.rows) {
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (j) out += ',';
        out += csv_cell(row[j]);
      }
      out += '\n';
    }
    return out;
  }
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t j = 0; j < row.size(); ++j) obj[t.columns[j]] = json_cell(row[j]);
    arr.push_back(std::move(obj));
  }
  return arr.dump(1) + "\n";
}

std::string render_record(const Record& r, OutputFormat f) {
  if (f == OutputFormat::csv) {
    std::string out = "key,value\n";
    for (const auto& [k, v] : r) out += k + "," + csv_cell(v) + "\n";
    return out;
  }
  nlohmann::ordered_json obj = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r) obj[k] = json_cell(v);
  return obj.dump(1) + "\n";
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorKind::config, "cannot write '" + path + "'");
  out << text;
}

std::string sibling_path(const std::string& path, const std::string& tag) {
  const std::filesystem::path p(path);
  std::filesystem::path q = p;
  q.replace_filename(p.stem().string() + "." + tag + p.extension().string());
  return q.string();
}

}  // namespace trapcool
