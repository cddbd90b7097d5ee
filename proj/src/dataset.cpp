#include "armed/dataset.hpp"

#include <fstream>
#include <json.hpp>
#include <unordered_map>

#include "armed/error.hpp"

namespace armed {
namespace {

using nlohmann::json;

std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

std::string required_string(const json& row, const char* key, std::size_t line) {
  const auto it = row.find(key);
  if (it == row.end()) throw ValidationError(at_line(line) + "missing field '" + key + "'");
  if (!it->is_string()) throw ValidationError(at_line(line) + "field '" + key + "' is not a string");
  return it->get<std::string>();
}

bool is_blank(const std::string& s) {
  return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

}  // namespace

std::vector<QARecord> ingest_dataset(std::istream& in) {
  std::vector<QARecord> out;
  std::unordered_map<std::string, std::size_t> seen;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (is_blank(text)) continue;
    json row;
    try {
      row = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(at_line(line) + e.what());
    }
    if (!row.is_object()) throw ValidationError(at_line(line) + "record is not an object");

    QARecord r;
    const auto& id_field = row.find("id");
    if (id_field == row.end()) throw ValidationError(at_line(line) + "missing field 'id'");
    if (id_field->is_string()) {
      r.id = id_field->get<std::string>();
    } else if (id_field->is_number_integer()) {
      r.id = std::to_string(id_field->get<long long>());
    } else {
      throw ValidationError(at_line(line) + "field 'id' must be a string or integer");
    }
    if (r.id.empty()) throw ValidationError(at_line(line) + "empty id");
    r.question = required_string(row, "question", line);
    r.answer = required_string(row, "answer", line);
    if (is_blank(r.question)) throw ValidationError(at_line(line) + "empty question");
    if (is_blank(r.answer)) throw ValidationError(at_line(line) + "empty answer");
    if (auto it = row.find("image_ref"); it != row.end() && !it->is_null()) {
      if (!it->is_string()) throw ValidationError(at_line(line) + "field 'image_ref' is not a string");
      r.image_ref = it->get<std::string>();
    }
    if (auto it = row.find("split"); it != row.end() && !it->is_null()) {
      const std::string s = it->is_string() ? it->get<std::string>() : "";
      if (s == "train") {
        r.split = Split::kTrain;
      } else if (s == "test") {
        r.split = Split::kTest;
      } else {
        throw ValidationError(at_line(line) + "split must be 'train' or 'test'");
      }
    }
    if (auto [it, inserted] = seen.try_emplace(r.id, line); !inserted) {
      throw ValidationError("duplicate id '" + r.id + "' on lines " +
                            std::to_string(it->second) + " and " + std::to_string(line));
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<QARecord> ingest_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open dataset file '" + path + "'");
  return ingest_dataset(in);
}

std::string to_json_line(const QARecord& record) {
  json j;
  j["id"] = record.id;
  j["question"] = record.question;
  j["answer"] = record.answer;
  if (record.image_ref) j["image_ref"] = *record.image_ref;
  if (record.split) j["split"] = *record.split == Split::kTrain ? "train" : "test";
  return j.dump();
}

}  // namespace armed
