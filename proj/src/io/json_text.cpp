#include "mssp/io/json_text.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mssp {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json number_to_json(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

double number_from_json(const Json& v, const std::string& pointer) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (s == "nan") return NAN;
  }
  throw FormatError(pointer + ": expected a number");
}

namespace {

void emit(std::ostringstream& out, const Json& v, int depth) {
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(depth + 1) * 2, ' ');
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (const auto& [key, item] : v.items()) {
        if (!first) out << ",\n";
        first = false;
        out << inner << Json(key).dump() << ": ";
        emit(out, item, depth + 1);
      }
      out << '\n' << pad << '}';
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out << "[]";
        return;
      }
      // scalar arrays on one line keep value vectors readable
      bool flat = true;
      for (const auto& item : v) flat = flat && item.is_primitive();
      if (flat) {
        out << '[';
        for (std::size_t k = 0; k < v.size(); ++k) {
          if (k) out << ", ";
          emit(out, v[k], depth + 1);
        }
        out << ']';
        return;
      }
      out << "[\n";
      for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) out << ",\n";
        out << inner;
        emit(out, v[k], depth + 1);
      }
      out << '\n' << pad << ']';
      return;
    }
    case Json::value_t::number_float:
      out << format_double(v.get<double>());
      return;
    default:
      out << v.dump();
  }
}

}  // namespace

std::string to_json_text(const Json& doc) {
  std::ostringstream out;
  emit(out, doc, 0);
  out << '\n';
  return out.str();
}

TextPosition position_at(std::string_view text, std::size_t byte) {
  TextPosition pos;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++pos.line;
      pos.column = 1;
    } else {
      ++pos.column;
    }
  }
  return pos;
}

Json parse_json_text(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    // e.byte is one past the offending character
    const TextPosition pos = position_at(text, e.byte > 0 ? e.byte - 1 : 0);
    std::string what = e.what();
    const auto colon = what.find("syntax error");
    if (colon != std::string::npos) what = what.substr(colon);
    throw FormatError("line " + std::to_string(pos.line) + ", column " +
                      std::to_string(pos.column) + ": " + what);
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace mssp
