#pragma once

// Client for the embedding service wire protocol (version 1):
//
//   POST {base}/embed  {"version":1,"mode":"sentence"|"tokens","texts":[...]}
//   -> {"version":1,"dim":D,"vectors":[[...]]}          sentence mode
//   -> {"version":1,"dim":D,"matrices":[[[...]]]}       tokens mode
//   GET  {base}/health -> {"version":1,"dim":D,"models":[...]}

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "armed/embeddings.hpp"

namespace armed {

enum class EmbedMode { kSentence, kTokens };

inline constexpr int kWireVersion = 1;

struct ClientOptions {
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{50};
  std::chrono::seconds timeout{30};
};

struct RemoteBatch {
  std::size_t dim = 0;
  std::vector<SentenceVector> vectors;     // sentence mode
  std::vector<EmbeddingMatrix> matrices;   // tokens mode
};

struct ServiceHealth {
  std::size_t dim = 0;
  std::vector<std::string> models;
};

// Builds the request body exactly as sent on the wire.
std::string build_embed_request(const std::vector<std::string>& texts, EmbedMode mode);

// Validates and decodes a response body; every vector is re-normalized.
// Throws ProtocolError on version mismatch, missing fields, count or
// dimension disagreement.
RemoteBatch parse_embed_response(const std::string& body, EmbedMode mode,
                                 std::size_t expected_count);

class EmbedClient {
 public:
  explicit EmbedClient(std::string endpoint, ClientOptions options = {});

  // Empty input returns an empty batch without contacting the service.
  // Transient failures (connection errors, HTTP 5xx) are retried with
  // exponential backoff, then reported as ConnectivityError naming the
  // endpoint. The first response fixes the session dim; later responses
  // must match it.
  RemoteBatch embed(const std::vector<std::string>& texts, EmbedMode mode);
  ServiceHealth health();

  const std::string& endpoint() const { return endpoint_; }
  std::optional<std::size_t> session_dim() const { return session_dim_; }

 private:
  std::string request(const std::string& method, const std::string& path,
                      const std::string& body);

  std::string endpoint_;
  ClientOptions options_;
  std::optional<std::size_t> session_dim_;
};

// Convenience wrapper matching the embed_remote operation.
RemoteBatch embed_remote(const std::vector<std::string>& texts, const std::string& endpoint,
                         EmbedMode mode, ClientOptions options = {});

class RemoteEmbedder final : public EmbeddingSource {
 public:
  explicit RemoteEmbedder(std::string endpoint, ClientOptions options = {})
      : client_(std::move(endpoint), options) {}

  std::vector<TextEmbedding> embed(const std::vector<std::string>& texts) override;
  std::string describe() const override { return "service:" + client_.endpoint(); }

 private:
  EmbedClient client_;
};

}  // namespace armed
