#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <type_traits>

namespace dcdiff::cli {

/// Doubles are printed with 17 significant digits so that they round-trip.
[[nodiscard]] inline std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::initializer_list<const char*> columns)
      : out_(path, std::ios::trunc), path_(path) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    bool first = true;
    for (const char* c : columns) {
      out_ << (first ? "" : ",") << c;
      first = false;
    }
    out_ << '\n';
  }

  template <class... Ts>
  void row(const Ts&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
    out_ << '\n';
    if (!out_) throw std::runtime_error("write failed on " + path_.string());
  }

  [[nodiscard]] const std::filesystem::path& path() const { return path_; }

 private:
  template <class T>
  static std::string cell(const T& v) {
    if constexpr (std::is_same_v<T, bool>) {
      return v ? "true" : "false";
    } else if constexpr (std::is_floating_point_v<T>) {
      return format_number(static_cast<double>(v));
    } else if constexpr (std::is_integral_v<T>) {
      return std::to_string(v);
    } else {
      return std::string(v);
    }
  }

  std::ofstream out_;
  std::filesystem::path path_;
};

}  // namespace dcdiff::cli
