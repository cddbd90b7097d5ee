#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace armed {

enum class Split { kTrain, kTest };

struct QARecord {
  std::string id;
  std::string question;
  std::string answer;
  std::optional<std::string> image_ref;
  std::optional<Split> split;

  bool operator==(const QARecord&) const = default;
};

// Reads line-delimited JSON objects {id, question, answer, image_ref?,
// split?}. Blank lines are skipped. Rows are validated as they stream in;
// the first violation throws ValidationError (or ParseError for malformed
// JSON) naming the 1-based line number, and for duplicate ids both lines.
std::vector<QARecord> ingest_dataset(std::istream& in);
std::vector<QARecord> ingest_dataset_file(const std::string& path);

std::string to_json_line(const QARecord& record);

}  // namespace armed
