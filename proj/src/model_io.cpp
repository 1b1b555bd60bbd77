#include "pca/model_io.hpp"

#include <fstream>
#include <sstream>

namespace pca {

ModelFormatError::ModelFormatError(std::string where, const std::string& what)
    : std::runtime_error("model format error at " + where + ": " + what), where_(std::move(where)) {}

namespace {

const nlohmann::json& member(const nlohmann::json& j, const std::string& pointer, const char* key) {
  if (!j.is_object()) throw ModelFormatError(pointer.empty() ? "/" : pointer, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ModelFormatError(pointer + "/" + key, "missing member");
  return *it;
}

long long as_integer(const nlohmann::json& j, const std::string& pointer) {
  if (!j.is_number_integer()) throw ModelFormatError(pointer, "expected an integer");
  return j.get<long long>();
}

}  // namespace

LocalRule rule_from_json(const nlohmann::json& j, const std::string& pointer) {
  const auto& alphabet = member(j, pointer, "alphabet");
  const long long k = as_integer(alphabet, pointer + "/alphabet");
  if (k < 2 || k > kMaxAlphabet) throw ModelFormatError(pointer + "/alphabet", "alphabet must be in [2,16]");

  const auto& hood = member(j, pointer, "neighborhood");
  if (!hood.is_array() || hood.empty())
    throw ModelFormatError(pointer + "/neighborhood", "expected a nonempty array of offsets");
  std::vector<int> offsets;
  for (std::size_t i = 0; i < hood.size(); ++i)
    offsets.push_back(static_cast<int>(as_integer(hood[i], pointer + "/neighborhood/" + std::to_string(i))));
  try {
    Neighborhood check(offsets);
  } catch (const std::invalid_argument& e) {
    throw ModelFormatError(pointer + "/neighborhood", e.what());
  }

  const auto& table = member(j, pointer, "table");
  if (!table.is_array()) throw ModelFormatError(pointer + "/table", "expected an array of rows");
  std::vector<std::vector<double>> rows;
  rows.reserve(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    const std::string row_ptr = pointer + "/table/" + std::to_string(i);
    if (!table[i].is_array()) throw ModelFormatError(row_ptr, "expected an array of probabilities");
    std::vector<double> row;
    for (std::size_t a = 0; a < table[i].size(); ++a) {
      if (!table[i][a].is_number()) throw ModelFormatError(row_ptr + "/" + std::to_string(a), "expected a number");
      row.push_back(table[i][a].get<double>());
    }
    rows.push_back(std::move(row));
  }
  const std::size_t row_count = rows.size();
  try {
    return LocalRule(static_cast<int>(k), std::move(offsets), std::move(rows));
  } catch (const RuleInvalid& e) {
    if (e.row() >= row_count) throw ModelFormatError(pointer + "/table", e.defect());
    throw ModelFormatError(pointer + "/table/" + std::to_string(e.row()), e.defect());
  }
}

nlohmann::json rule_to_json(const LocalRule& rule) {
  nlohmann::json table = nlohmann::json::array();
  for (std::size_t i = 0; i < rule.num_rows(); ++i) {
    auto r = rule.row(i);
    table.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return {{"alphabet", rule.alphabet_size()}, {"neighborhood", rule.offsets()}, {"table", table}};
}

nlohmann::json parse_json(std::string_view text) {
  try {
    return nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelFormatError("byte " + std::to_string(e.byte), e.what());
  }
}

LocalRule parse_rule(std::string_view text) { return rule_from_json(parse_json(text)); }

LocalRule load_rule(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_rule(buf.str());
}

void save_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace pca
