#pragma once
// JSON model files:
//   { "alphabet": k, "neighborhood": [offsets...], "table": [[p_0..p_{k-1}], ...] }
// Row i of "table" is the neighborhood word whose base-k digits (first offset
// most significant) spell i.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "pca/core.hpp"

namespace pca {

// `where` is a JSON pointer ("/table/3/1") or a byte offset for syntax errors.
class ModelFormatError : public std::runtime_error {
 public:
  ModelFormatError(std::string where, const std::string& what);
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

LocalRule rule_from_json(const nlohmann::json& j, const std::string& pointer = "");
nlohmann::json rule_to_json(const LocalRule& rule);

LocalRule parse_rule(std::string_view text);
LocalRule load_rule(const std::filesystem::path& path);
void save_json(const std::filesystem::path& path, const nlohmann::json& j);

// Parses text into JSON, mapping syntax errors to ModelFormatError("byte N").
nlohmann::json parse_json(std::string_view text);

}  // namespace pca
