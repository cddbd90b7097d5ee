#include "armed/embed_client.hpp"

#include <cmath>
#include <httplib.h>
#include <json.hpp>
#include <thread>

#include "armed/error.hpp"

namespace armed {
namespace {

using nlohmann::json;

std::string_view mode_name(EmbedMode mode) {
  return mode == EmbedMode::kSentence ? "sentence" : "tokens";
}

std::vector<double> unit_row(const json& row, std::size_t dim) {
  if (!row.is_array() || row.size() != dim) {
    throw ProtocolError("vector length disagrees with declared dim " + std::to_string(dim));
  }
  std::vector<double> v;
  v.reserve(dim);
  for (const auto& x : row) {
    if (!x.is_number()) throw ProtocolError("vector entry is not a number");
    v.push_back(x.get<double>());
    if (!std::isfinite(v.back())) throw ProtocolError("vector entry is not finite");
  }
  const double n = l2_norm(v);
  if (n == 0.0) throw ProtocolError("service returned a zero vector");
  for (double& x : v) x /= n;
  return v;
}

}  // namespace

std::string build_embed_request(const std::vector<std::string>& texts, EmbedMode mode) {
  nlohmann::ordered_json j;
  j["version"] = kWireVersion;
  j["mode"] = mode_name(mode);
  j["texts"] = texts;
  return j.dump();
}

RemoteBatch parse_embed_response(const std::string& body, EmbedMode mode,
                                 std::size_t expected_count) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error& e) {
    throw ProtocolError(std::string("malformed response: ") + e.what());
  }
  if (!j.is_object()) throw ProtocolError("response is not an object");
  if (!j.contains("version") || !j["version"].is_number_integer() ||
      j["version"].get<int>() != kWireVersion) {
    throw ProtocolError("protocol version mismatch (expected 1)");
  }
  if (!j.contains("dim") || !j["dim"].is_number_unsigned() || j["dim"].get<std::size_t>() == 0) {
    throw ProtocolError("response lacks a positive dim");
  }
  RemoteBatch out;
  out.dim = j["dim"].get<std::size_t>();
  const char* key = mode == EmbedMode::kSentence ? "vectors" : "matrices";
  if (!j.contains(key) || !j[key].is_array()) {
    throw ProtocolError(std::string("response lacks '") + key + "'");
  }
  const auto& items = j[key];
  if (items.size() != expected_count) {
    throw ProtocolError("response has " + std::to_string(items.size()) + " items for " +
                        std::to_string(expected_count) + " texts");
  }
  for (const auto& item : items) {
    if (mode == EmbedMode::kSentence) {
      out.vectors.push_back(SentenceVector{unit_row(item, out.dim)});
    } else {
      if (!item.is_array()) throw ProtocolError("token matrix is not an array");
      std::vector<double> values;
      for (const auto& row : item) {
        const auto r = unit_row(row, out.dim);
        values.insert(values.end(), r.begin(), r.end());
      }
      out.matrices.emplace_back(item.size(), out.dim, std::move(values));
    }
  }
  return out;
}

EmbedClient::EmbedClient(std::string endpoint, ClientOptions options)
    : endpoint_(std::move(endpoint)), options_(options) {
  while (!endpoint_.empty() && endpoint_.back() == '/') endpoint_.pop_back();
}

std::string EmbedClient::request(const std::string& method, const std::string& path,
                                 const std::string& body) {
  std::string last_error = "no attempt made";
  auto backoff = options_.initial_backoff;
  for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    httplib::Client cli(endpoint_);
    if (!cli.is_valid()) throw ConnectivityError(endpoint_, "invalid endpoint address");
    cli.set_connection_timeout(options_.timeout);
    cli.set_read_timeout(options_.timeout);
    cli.set_write_timeout(options_.timeout);
    auto res = method == "GET" ? cli.Get(path) : cli.Post(path, body, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw ProtocolError(endpoint_ + path + " answered HTTP " + std::to_string(res->status) +
                          ": " + res->body);
    }
    return res->body;
  }
  throw ConnectivityError(endpoint_, "unreachable after " +
                                         std::to_string(options_.max_retries + 1) +
                                         " attempts (" + last_error + ")");
}

RemoteBatch EmbedClient::embed(const std::vector<std::string>& texts, EmbedMode mode) {
  if (texts.empty()) return RemoteBatch{session_dim_.value_or(0), {}, {}};
  const auto body = request("POST", "/embed", build_embed_request(texts, mode));
  auto batch = parse_embed_response(body, mode, texts.size());
  if (session_dim_ && *session_dim_ != batch.dim) {
    throw ProtocolError("service dim changed from " + std::to_string(*session_dim_) + " to " +
                        std::to_string(batch.dim));
  }
  session_dim_ = batch.dim;
  return batch;
}

ServiceHealth EmbedClient::health() {
  const auto body = request("GET", "/health", "");
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error& e) {
    throw ProtocolError(std::string("malformed health response: ") + e.what());
  }
  if (!j.contains("version") || j["version"] != kWireVersion) {
    throw ProtocolError("protocol version mismatch (expected 1)");
  }
  ServiceHealth h;
  h.dim = j.value("dim", std::size_t{0});
  if (j.contains("models") && j["models"].is_array()) {
    for (const auto& m : j["models"]) h.models.push_back(m.is_string() ? m.get<std::string>() : m.dump());
  }
  if (session_dim_ && *session_dim_ != h.dim) throw ProtocolError("health dim disagrees with session");
  session_dim_ = h.dim;
  return h;
}

RemoteBatch embed_remote(const std::vector<std::string>& texts, const std::string& endpoint,
                         EmbedMode mode, ClientOptions options) {
  EmbedClient client(endpoint, options);
  return client.embed(texts, mode);
}

std::vector<TextEmbedding> RemoteEmbedder::embed(const std::vector<std::string>& texts) {
  std::vector<TextEmbedding> out;
  if (texts.empty()) return out;
  auto tokens = client_.embed(texts, EmbedMode::kTokens);
  auto sentences = client_.embed(texts, EmbedMode::kSentence);
  out.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    out.push_back({std::move(tokens.matrices[i]), std::move(sentences.vectors[i])});
  }
  return out;
}

}  // namespace armed
