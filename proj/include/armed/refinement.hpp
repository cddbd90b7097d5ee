#pragma once

#include <string>
#include <string_view>

namespace armed {

enum class RefinementStatus { kConsistent, kNeedsFix, kDrop };

struct RefinementRecord {
  RefinementStatus status = RefinementStatus::kConsistent;
  std::string ori_q;
  std::string ori_a;
  std::string new_q;
  std::string new_a;
  std::string notes;

  bool operator==(const RefinementRecord&) const = default;
};

std::string_view status_name(RefinementStatus status);

// Accepts exactly one JSON object carrying the six string fields, with
// status in {consistent, needs_fix, drop}. Surrounding whitespace is
// allowed; anything else (a second object, trailing text) is rejected.
// Unknown extra keys are rejected too. Throws ValidationError or
// ParseError.
RefinementRecord validate_refinement(std::string_view raw);

std::string to_json(const RefinementRecord& record);

}  // namespace armed
