#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

namespace mssp {

using Json = nlohmann::ordered_json;

/// Malformed or semantically invalid input. The message carries either a
/// "line L, column C" prefix or a JSON pointer.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// %.17g; non-finite values as inf, -inf, nan.
std::string format_double(double v);

/// Finite numbers stay numbers; ±inf and nan become the strings above.
Json number_to_json(double v);

/// Accepts a number or one of the strings written by number_to_json.
double number_from_json(const Json& v, const std::string& pointer);

/// Pretty-printed with two-space indentation and doubles at 17 significant
/// digits. Key order is insertion order, so equal documents give equal bytes.
std::string to_json_text(const Json& doc);

struct TextPosition {
  std::size_t line = 1;
  std::size_t column = 1;
};
TextPosition position_at(std::string_view text, std::size_t byte);

/// Throws FormatError with line and column on syntax errors.
Json parse_json_text(std::string_view text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace mssp
