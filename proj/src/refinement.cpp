#include "armed/refinement.hpp"

#include <array>
#include <json.hpp>

#include "armed/error.hpp"

namespace armed {

std::string_view status_name(RefinementStatus status) {
  switch (status) {
    case RefinementStatus::kConsistent: return "consistent";
    case RefinementStatus::kNeedsFix: return "needs_fix";
    case RefinementStatus::kDrop: return "drop";
  }
  return "?";
}

RefinementRecord validate_refinement(std::string_view raw) {
  using nlohmann::json;
  json j;
  try {
    // parse() rejects trailing content after the first value.
    j = json::parse(raw.begin(), raw.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("refinement is not exactly one JSON value: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("refinement must be a JSON object");

  constexpr std::array<const char*, 6> kFields = {"status", "ori_q", "ori_a",
                                                 "new_q",  "new_a", "notes"};
  for (const char* f : kFields) {
    const auto it = j.find(f);
    if (it == j.end()) throw ValidationError(std::string("refinement missing field '") + f + "'");
    if (!it->is_string()) {
      throw ValidationError(std::string("refinement field '") + f + "' is not a string");
    }
  }
  if (j.size() != kFields.size()) throw ValidationError("refinement has unexpected fields");

  RefinementRecord r;
  const auto status = j["status"].get<std::string>();
  if (status == "consistent") {
    r.status = RefinementStatus::kConsistent;
  } else if (status == "needs_fix") {
    r.status = RefinementStatus::kNeedsFix;
  } else if (status == "drop") {
    r.status = RefinementStatus::kDrop;
  } else {
    throw ValidationError("unknown refinement status '" + status + "'");
  }
  r.ori_q = j["ori_q"].get<std::string>();
  r.ori_a = j["ori_a"].get<std::string>();
  r.new_q = j["new_q"].get<std::string>();
  r.new_a = j["new_a"].get<std::string>();
  r.notes = j["notes"].get<std::string>();
  return r;
}

std::string to_json(const RefinementRecord& record) {
  nlohmann::ordered_json j;
  j["status"] = status_name(record.status);
  j["ori_q"] = record.ori_q;
  j["ori_a"] = record.ori_a;
  j["new_q"] = record.new_q;
  j["new_a"] = record.new_a;
  j["notes"] = record.notes;
  return j.dump();
}

}  // namespace armed
