#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "core.hpp"

namespace cgc {

inline std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open " + path);
    row_(header);
  }
  void row(const std::vector<double>& v) {
    std::vector<std::string> s;
    for (double d : v) s.push_back(fmt17(d));
    row_(s);
  }
  // leading string cells followed by numbers
  void row(const std::vector<std::string>& head, const std::vector<double>& v) {
    std::vector<std::string> s = head;
    for (double d : v) s.push_back(fmt17(d));
    row_(s);
  }

 private:
  void row_(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }
  std::ofstream out_;
};

inline void push_cx(std::vector<double>& row, Cx z) {
  row.push_back(z.real());
  row.push_back(z.imag());
}

inline void push_cx_header(std::vector<std::string>& h, const std::string& name) {
  h.push_back("re_" + name);
  h.push_back("im_" + name);
}

namespace detail {
inline void dump_json(std::ostream& os, const nlohmann::json& j, int indent) {
  std::string pad(indent, ' '), pad2(indent + 2, ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      size_t k = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++k) {
        os << pad2 << nlohmann::json(it.key()).dump() << ": ";
        dump_json(os, it.value(), indent + 2);
        os << (k + 1 < j.size() ? ",\n" : "\n");
      }
      os << pad << "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      bool flat = true;
      for (const auto& e : j) flat = flat && e.is_primitive();
      if (flat) {
        os << "[";
        for (size_t k = 0; k < j.size(); ++k) {
          if (k) os << ", ";
          dump_json(os, j[k], indent + 2);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (size_t k = 0; k < j.size(); ++k) {
        os << pad2;
        dump_json(os, j[k], indent + 2);
        os << (k + 1 < j.size() ? ",\n" : "\n");
      }
      os << pad << "]";
      return;
    }
    case nlohmann::json::value_t::number_float: {
      double v = j.get<double>();
      if (std::isfinite(v)) os << fmt17(v);
      else os << "null";
      return;
    }
    default:
      os << j.dump();
  }
}
}  // namespace detail

// JSON with keys in sorted order and doubles at 17 significant digits
inline std::string dump_json(const nlohmann::json& j) {
  std::ostringstream os;
  detail::dump_json(os, j, 0);
  os << '\n';
  return os.str();
}

inline void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << dump_json(j);
}

inline nlohmann::json mat_to_json(const CMat& m) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) a.push_back({m(i, j).real(), m(i, j).imag()});
  return a;
}

}  // namespace cgc
