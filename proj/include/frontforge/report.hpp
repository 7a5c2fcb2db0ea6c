#pragma once

// Deterministic report serialization: ordered JSON with %.12e floats, CSV
// rows, and OBJ meshes/polylines with %.9g coordinates.

#include <cstdio>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "frontforge/geom.hpp"
#include "frontforge/surface.hpp"

namespace frontforge::cli {

// minimal ordered JSON value; insertion order is serialization order
class Json {
  struct Object;
  struct Array;

 public:
  static Json object() {
    Json j;
    j.value_ = Object{};
    return j;
  }
  static Json array() {
    Json j;
    j.value_ = Array{};
    return j;
  }
  Json() : value_(nullptr) {}
  Json(const char* s) : value_(std::string(s)) {}
  Json(std::string s) : value_(std::move(s)) {}
  Json(double x) : value_(x) {}
  Json(int x) : value_(static_cast<long>(x)) {}
  Json(long x) : value_(x) {}
  Json(std::size_t x) : value_(static_cast<long>(x)) {}
  Json(bool b) : value_(b) {}

  Json& set(const std::string& key, Json v) {
    std::get<Object>(value_).emplace_back(key, std::move(v));
    return *this;
  }
  Json& push(Json v) {
    std::get<Array>(value_).push_back(std::move(v));
    return *this;
  }

  void write(std::ostream& os, int indent = 0) const {
    const std::string pad(2 * indent, ' ');
    if (std::holds_alternative<std::nullptr_t>(value_)) {
      os << "null";
    } else if (const auto* b = std::get_if<bool>(&value_)) {
      os << (*b ? "true" : "false");
    } else if (const auto* i = std::get_if<long>(&value_)) {
      os << *i;
    } else if (const auto* d = std::get_if<double>(&value_)) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.12e", *d);
      os << buf;
    } else if (const auto* s = std::get_if<std::string>(&value_)) {
      os << '"';
      for (char c : *s) {
        if (c == '"' || c == '\\') os << '\\';
        os << c;
      }
      os << '"';
    } else if (const auto* arr = std::get_if<Array>(&value_)) {
      if (arr->empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      for (std::size_t k = 0; k < arr->size(); ++k) {
        os << pad << "  ";
        (*arr)[k].write(os, indent + 1);
        os << (k + 1 < arr->size() ? ",\n" : "\n");
      }
      os << pad << ']';
    } else if (const auto* obj = std::get_if<Object>(&value_)) {
      if (obj->empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      for (std::size_t k = 0; k < obj->size(); ++k) {
        os << pad << "  \"" << (*obj)[k].first << "\": ";
        (*obj)[k].second.write(os, indent + 1);
        os << (k + 1 < obj->size() ? ",\n" : "\n");
      }
      os << pad << '}';
    }
  }

  std::string dump() const {
    std::ostringstream os;
    write(os);
    os << '\n';
    return os.str();
  }

 private:
  struct Object : std::vector<std::pair<std::string, Json>> {};
  struct Array : std::vector<Json> {};
  using Value = std::variant<std::nullptr_t, bool, long, double, std::string, Array, Object>;
  Value value_;
};

// ---- CSV ----

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : columns_(std::move(header)) {}

  void begin_row() { row_.assign(columns_.size(), ""); }
  void cell(const std::string& column, double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", value);
    set(column, buf);
  }
  void cell(const std::string& column, const std::string& text) { set(column, text); }
  void end_row() { rows_.push_back(row_); }

  void write(std::ostream& os) const {
    for (std::size_t k = 0; k < columns_.size(); ++k)
      os << columns_[k] << (k + 1 < columns_.size() ? "," : "\n");
    for (const auto& row : rows_)
      for (std::size_t k = 0; k < row.size(); ++k)
        os << row[k] << (k + 1 < row.size() ? "," : "\n");
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::string> row_;
  std::vector<std::vector<std::string>> rows_;

  void set(const std::string& column, std::string text) {
    for (std::size_t k = 0; k < columns_.size(); ++k)
      if (columns_[k] == column) {
        row_[k] = std::move(text);
        return;
      }
    throw std::logic_error("CsvWriter: unknown column " + column);
  }
};

// ---- OBJ ----

inline void write_obj_vertex(std::ostream& os, const geom::Vec3& p) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "v %.9g %.9g %.9g\n", p.x, p.y, p.z);
  os << buf;
}

// one vertex per grid node, quads split into triangles
inline void write_obj_mesh(std::ostream& os, const surface::SurfaceJet& s) {
  const auto id = [&](int i, int j) { return i * s.ny + j + 1; };
  for (int i = 0; i < s.nx; ++i)
    for (int j = 0; j < s.ny; ++j) write_obj_vertex(os, s.node_value(i, j));
  for (int i = 0; i + 1 < s.nx; ++i)
    for (int j = 0; j + 1 < s.ny; ++j) {
      os << "f " << id(i, j) << ' ' << id(i + 1, j) << ' ' << id(i + 1, j + 1) << '\n';
      os << "f " << id(i, j) << ' ' << id(i + 1, j + 1) << ' ' << id(i, j + 1) << '\n';
    }
}

// polyline chains as `l` records
inline void write_obj_polylines(std::ostream& os,
                                const std::vector<std::vector<geom::Vec3>>& chains) {
  int base = 1;
  for (const auto& chain : chains)
    for (const geom::Vec3& p : chain) write_obj_vertex(os, p);
  for (const auto& chain : chains) {
    for (std::size_t k = 1; k < chain.size(); ++k)
      os << "l " << base + static_cast<int>(k) - 1 << ' ' << base + static_cast<int>(k) << '\n';
    base += static_cast<int>(chain.size());
  }
}

}  // namespace frontforge::cli
