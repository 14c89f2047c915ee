#pragma once

#include "krein/linalg.hpp"

#include "json.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace krein::io {

enum class MatrixFormat { json, csv };

inline MatrixFormat parse_format(std::string_view name) {
  if (name == "json") return MatrixFormat::json;
  if (name == "csv") return MatrixFormat::csv;
  throw Error(ErrorCode::InvalidArgument, "unknown format '" + std::string(name) + "'");
}

/// %.17g; non-finite values print as inf, -inf, nan.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// "a+bi" / "a-bi", no spaces.
inline std::string format_complex(cplx z) {
  std::string out = format_double(z.real());
  out += std::signbit(z.imag()) ? '-' : '+';
  out += format_double(std::abs(z.imag()));
  out += 'i';
  return out;
}

namespace detail {

inline double parse_real(std::string_view s, std::string_view cell) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || first == last) {
    throw Error(ErrorCode::Parse, "bad number in cell '" + std::string(cell) + "'");
  }
  if (!std::isfinite(v)) throw Error(ErrorCode::Parse, "non-finite entry '" + std::string(cell) + "'");
  return v;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace detail

/// Parses "a+bi", "a-bi", "bi" or "a".
inline cplx parse_complex(std::string_view cell) {
  const std::string_view s = detail::trim(cell);
  if (s.empty()) throw Error(ErrorCode::Parse, "empty cell");
  if (s.back() != 'i') return {detail::parse_real(s, cell), 0.0};

  const std::string_view body = s.substr(0, s.size() - 1);
  std::size_t split = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    const char c = body[k];
    if ((c == '+' || c == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string_view::npos) return {0.0, detail::parse_real(body, cell)};
  return {detail::parse_real(body.substr(0, split), cell), detail::parse_real(body.substr(split), cell)};
}

inline std::string to_json(const Matrix& m) {
  require_square(m, "matrix");
  std::string out = "{\"n\": " + std::to_string(m.rows());
  for (const bool imag : {false, true}) {
    out += imag ? ", \"im\": [" : ", \"re\": [";
    for (Index r = 0; r < m.rows(); ++r) {
      out += r ? ", [" : "[";
      for (Index c = 0; c < m.cols(); ++c) {
        if (c) out += ", ";
        out += format_double(imag ? m(r, c).imag() : m(r, c).real());
      }
      out += "]";
    }
    out += "]";
  }
  out += "}\n";
  return out;
}

inline std::string to_csv(const Matrix& m) {
  require_square(m, "matrix");
  std::string out;
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (c) out += ',';
      out += format_complex(m(r, c));
    }
    out += '\n';
  }
  return out;
}

inline Matrix from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("re") || !doc.contains("im")) {
    throw Error(ErrorCode::Parse, "matrix JSON needs keys n, re, im");
  }
  if (!doc["n"].is_number_integer() || doc["n"].get<long long>() < 1) {
    throw Error(ErrorCode::Parse, "n must be a positive integer");
  }
  const auto n = static_cast<Index>(doc["n"].get<long long>());
  Matrix m(n, n);
  for (const bool imag : {false, true}) {
    const auto& rows = doc[imag ? "im" : "re"];
    if (!rows.is_array() || static_cast<Index>(rows.size()) != n) {
      throw Error(ErrorCode::DimensionMismatch, "matrix is not n x n");
    }
    for (Index r = 0; r < n; ++r) {
      const auto& row = rows[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<Index>(row.size()) != n) {
        throw Error(ErrorCode::DimensionMismatch, "matrix is not n x n");
      }
      for (Index c = 0; c < n; ++c) {
        const auto& v = row[static_cast<std::size_t>(c)];
        if (!v.is_number()) throw Error(ErrorCode::Parse, "matrix entries must be numbers");
        const double x = v.get<double>();
        if (!std::isfinite(x)) throw Error(ErrorCode::Parse, "non-finite entry");
        if (imag) {
          m(r, c).imag(x);
        } else {
          m(r, c) = cplx(x, 0.0);
        }
      }
    }
  }
  return m;
}

inline Matrix from_csv(const std::string& text) {
  std::vector<std::vector<cplx>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    std::vector<cplx> row;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      row.push_back(parse_complex(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    rows.push_back(std::move(row));
  }
  const auto n = static_cast<Index>(rows.size());
  if (n == 0) throw Error(ErrorCode::Parse, "empty matrix file");
  Matrix m(n, n);
  for (Index r = 0; r < n; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    if (static_cast<Index>(row.size()) != n) throw Error(ErrorCode::DimensionMismatch, "matrix is not square");
    for (Index c = 0; c < n; ++c) m(r, c) = row[static_cast<std::size_t>(c)];
  }
  return m;
}

/// JSON when the first non-blank character is '{', CSV otherwise.
inline Matrix parse_matrix(const std::string& text) {
  const std::string_view t = detail::trim(text);
  return !t.empty() && t.front() == '{' ? from_json(text) : from_csv(text);
}

inline std::string format_matrix(const Matrix& m, MatrixFormat f) {
  return f == MatrixFormat::json ? to_json(m) : to_csv(m);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << content)) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
}

inline Matrix load_matrix(const std::string& path) { return parse_matrix(read_file(path)); }

inline void save_matrix(const std::string& path, const Matrix& m, MatrixFormat f) {
  write_file(path, format_matrix(m, f));
}

}  // namespace krein::io
