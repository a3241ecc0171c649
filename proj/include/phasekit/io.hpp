#pragma once

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "phasekit/numerics.hpp"

namespace phasekit {

using Json = nlohmann::ordered_json;

/// Round to 12 significant digits via text so JSON output is stable across
/// platforms and runs.
inline double round12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::strtod(buf, nullptr);
}

inline Json json_number(double v) { return Json(round12(v)); }

inline Json json_vector(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(round12(x));
  return out;
}

inline Json json_vector(const RealVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(round12(v(i)));
  return out;
}

/// Parse one complex literal: "a", "a+bi", "a-bj", "i", "-2.5e-3j", ...
/// Whitespace-insensitive; both 'i' and 'j' accepted.
inline Complex parse_complex(const std::string& raw) {
  std::string s;
  s.reserve(raw.size());
  for (char c : raw) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw ParseError("empty complex literal");

  auto is_imag_tail = [](char c) { return c == 'i' || c == 'j'; };
  auto parse_real = [](const std::string& t) {
    if (t.empty()) throw ParseError("empty number");
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size()) {
      throw ParseError("bad number: '" + t + "'");
    }
    return v;
  };
  auto parse_imag_coeff = [&](std::string t) {
    // t ends with i/j; the bare signs mean +/-1.
    t.pop_back();
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_real(t);
  };

  // Find a '+'/'-' separating the two parts: not the leading sign and not
  // part of an exponent.
  size_t split = std::string::npos;
  for (size_t i = 1; i < s.size(); ++i) {
    if ((s[i] == '+' || s[i] == '-') &&
        s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;  // keep the last candidate ("1e-3-2e-4i" splits late)
    }
  }
  if (split == std::string::npos) {
    if (is_imag_tail(s.back())) return Complex(0.0, parse_imag_coeff(s));
    return Complex(parse_real(s), 0.0);
  }
  const std::string head = s.substr(0, split);
  const std::string tail = s.substr(split);
  if (is_imag_tail(s.back())) {
    return Complex(parse_real(head), parse_imag_coeff(tail));
  }
  if (is_imag_tail(head.back())) {
    // "2i+1" style: imaginary first
    std::string h = head;
    return Complex(parse_real(tail), parse_imag_coeff(h));
  }
  throw ParseError("bad complex literal: '" + raw + "'");
}

inline std::string format_complex(Complex v) {
  char buf[96];
  if (v.imag() == 0.0) {
    std::snprintf(buf, sizeof(buf), "%.17g", v.real());
  } else {
    std::snprintf(buf, sizeof(buf), "%.17g%+.17gi", v.real(), v.imag());
  }
  return buf;
}

/// Canonical JSON matrix format: {"n": int, "data": [[[re, im], ...], ...]}.
inline ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("data")) {
    throw ParseError("matrix JSON must carry \"n\" and \"data\"");
  }
  const int n = j.at("n").get<int>();
  if (n <= 0) throw ParseError("matrix size must be positive");
  const auto& data = j.at("data");
  if (!data.is_array() || static_cast<int>(data.size()) != n) {
    throw ParseError("matrix data must have n rows");
  }
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    const auto& row = data.at(static_cast<size_t>(i));
    if (!row.is_array() || static_cast<int>(row.size()) != n) {
      throw ParseError("ragged row in matrix data");
    }
    for (int k = 0; k < n; ++k) {
      const auto& cell = row.at(static_cast<size_t>(k));
      if (!cell.is_array() || cell.size() != 2) {
        throw ParseError("matrix entries must be [re, im] pairs");
      }
      m(i, k) = Complex(cell.at(0).get<double>(), cell.at(1).get<double>());
    }
  }
  return m;
}

inline Json matrix_to_json(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw NumericError("matrix file format is square");
  Json data = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      row.push_back(Json::array({m(i, k).real(), m(i, k).imag()}));
    }
    data.push_back(std::move(row));
  }
  return Json{{"n", static_cast<int>(m.rows())}, {"data", std::move(data)}};
}

/// Convenience CSV of complex literals; rows must all have the same width.
inline ComplexMatrix matrix_from_csv(const std::string& text) {
  std::vector<std::vector<Complex>> rows;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    bool blank = true;
    for (char c : line) {
      if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
    }
    if (blank) continue;
    std::vector<Complex> row;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) {
      try {
        row.push_back(parse_complex(cell));
      } catch (const ParseError& e) {
        throw ParseError(std::string(e.what()) + " at line " +
                         std::to_string(lineno));
      }
    }
    if (!rows.empty() && rows.front().size() != row.size()) {
      throw ParseError("ragged row at line " + std::to_string(lineno));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("empty matrix file");
  if (rows.size() != rows.front().size()) {
    throw ParseError("matrix file must be square");
  }
  const int n = static_cast<int>(rows.size());
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      m(i, k) = rows[static_cast<size_t>(i)][static_cast<size_t>(k)];
    }
  }
  return m;
}

inline std::string matrix_to_csv(const ComplexMatrix& m) {
  std::ostringstream out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      if (k) out << ",";
      out << format_complex(m(i, k));
    }
    out << "\n";
  }
  return out.str();
}

/// Sniff the format: leading '{' means JSON, anything else CSV.
inline ComplexMatrix parse_matrix(const std::string& text) {
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c == '{') {
      Json j;
      try {
        j = Json::parse(text);
      } catch (const std::exception& e) {
        throw ParseError(std::string("bad matrix JSON: ") + e.what());
      }
      return matrix_from_json(j);
    }
    break;
  }
  return matrix_from_csv(text);
}

inline ComplexMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  ComplexMatrix m = parse_matrix(ss.str());
  require_finite(m);
  return m;
}

}  // namespace phasekit
