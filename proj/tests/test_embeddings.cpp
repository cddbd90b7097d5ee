#include <doctest.h>

#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <sstream>
#include <thread>

#include "armed/embed_client.hpp"
#include "armed/embeddings.hpp"
#include "armed/error.hpp"

using namespace armed;
using nlohmann::json;

namespace {

// In-process stand-in for the embedding service, answering with mock
// embeddings so responses are deterministic.
class FakeService {
 public:
  std::atomic<int> requests{0};
  std::atomic<int> failures_left{0};
  std::atomic<int> version{kWireVersion};
  std::atomic<std::size_t> dim{6};

  FakeService() {
    server_.Post("/embed", [this](const httplib::Request& req, httplib::Response& res) {
      ++requests;
      if (failures_left > 0) {
        --failures_left;
        res.status = 503;
        return;
      }
      const auto body = json::parse(req.body);
      json out = {{"version", version.load()}, {"dim", dim.load()}};
      const bool tokens = body["mode"] == "tokens";
      json items = json::array();
      for (const auto& t : body["texts"]) {
        const auto e = mock_embed(t.get<std::string>(), dim, 11);
        if (tokens) {
          json m = json::array();
          for (std::size_t i = 0; i < e.tokens.rows(); ++i) {
            const auto r = e.tokens.row(i);
            // Scaled rows: the client must re-normalize.
            json row = json::array();
            for (double v : r) row.push_back(3.0 * v);
            m.push_back(row);
          }
          items.push_back(m);
        } else {
          json row = json::array();
          for (double v : e.sentence.values) row.push_back(2.0 * v);
          items.push_back(row);
        }
      }
      out[tokens ? "matrices" : "vectors"] = items;
      res.set_content(out.dump(), "application/json");
    });
    server_.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
      res.set_content(json{{"version", version.load()}, {"dim", dim.load()}, {"models", {"mock"}}}.dump(),
                      "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeService() {
    server_.stop();
    thread_.join();
  }
  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_); }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

ClientOptions fast() {
  ClientOptions o;
  o.max_retries = 2;
  o.initial_backoff = std::chrono::milliseconds(1);
  o.timeout = std::chrono::seconds(5);
  return o;
}

double norm(std::span<const double> v) { return l2_norm(v); }

}  // namespace

TEST_CASE("embedding file round trip") {
  std::map<std::string, TextEmbedding> entries;
  for (const char* t : {"left lung", "yes", ""}) entries[t] = mock_embed(t, 8, 2);
  std::stringstream buf;
  write_embedding_file(buf, 8, entries);
  FileEmbeddings f(buf, "mem");
  CHECK(f.dim() == 8);
  CHECK(f.size() == 3);
  const auto got = f.embed({"yes", "left lung"});
  REQUIRE(got.size() == 2);
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(got[0].sentence.values[i] == doctest::Approx(entries["yes"].sentence.values[i]).epsilon(1e-6));
  }
  CHECK(got[1].tokens.rows() == 2);
  CHECK(got[1].tokens.normalized());
  CHECK_THROWS_AS(f.embed({"unknown"}), InvalidArgument);
  CHECK(f.describe() == "file:mem");

  std::stringstream junk("XXXX");
  CHECK_THROWS_AS(FileEmbeddings{junk}, ParseError);
  std::string truncated = buf.str();
  std::stringstream cut(truncated.substr(0, truncated.size() - 3));
  CHECK_THROWS_AS(FileEmbeddings{cut}, ParseError);
}

TEST_CASE("embedding source selection") {
  auto m = make_embedding_source("mock", 4, 16);
  const auto e = m->embed({"a b"});
  CHECK(e[0].sentence.dim() == 16);
  CHECK(e[0] == mock_embed("a b", 16, 4));
  CHECK(make_embedding_source("service:http://127.0.0.1:1", 0)->describe() ==
        "service:http://127.0.0.1:1");
  CHECK_THROWS_AS(make_embedding_source("word2vec", 0), InvalidArgument);
  CHECK_THROWS_AS(make_embedding_source("file:/nonexistent.aemb", 0), InvalidArgument);
}

TEST_CASE("wire request and response parsing") {
  const auto req = json::parse(build_embed_request({"a", "b"}, EmbedMode::kTokens));
  CHECK(req["version"] == 1);
  CHECK(req["mode"] == "tokens");
  CHECK(req["texts"] == json::array({"a", "b"}));

  const auto b = parse_embed_response(R"({"version":1,"dim":2,"vectors":[[3,4]]})",
                                      EmbedMode::kSentence, 1);
  CHECK(b.vectors[0].values[0] == doctest::Approx(0.6));
  CHECK(b.vectors[0].values[1] == doctest::Approx(0.8));
  CHECK_THROWS_AS(parse_embed_response(R"({"version":2,"dim":2,"vectors":[[3,4]]})",
                                       EmbedMode::kSentence, 1),
                  ProtocolError);
  CHECK_THROWS_AS(parse_embed_response(R"({"version":1,"dim":3,"vectors":[[3,4]]})",
                                       EmbedMode::kSentence, 1),
                  ProtocolError);
  CHECK_THROWS_AS(parse_embed_response(R"({"version":1,"dim":2,"vectors":[[3,4]]})",
                                       EmbedMode::kSentence, 2),
                  ProtocolError);
  CHECK_THROWS_AS(parse_embed_response(R"({"version":1,"dim":2,"vectors":[[0,0]]})",
                                       EmbedMode::kSentence, 1),
                  ProtocolError);
  CHECK_THROWS_AS(parse_embed_response("not json", EmbedMode::kSentence, 1), ProtocolError);
}

TEST_CASE("client against a local service") {
  FakeService svc;
  EmbedClient client(svc.endpoint(), fast());

  SUBCASE("empty input sends nothing") {
    const auto b = client.embed({}, EmbedMode::kSentence);
    CHECK(b.vectors.empty());
    CHECK(svc.requests == 0);
  }
  SUBCASE("duplicates come back identical and normalized") {
    const auto b = client.embed({"pleural effusion", "pleural effusion"}, EmbedMode::kSentence);
    REQUIRE(b.vectors.size() == 2);
    CHECK(b.vectors[0] == b.vectors[1]);
    CHECK(norm(b.vectors[0].values) == doctest::Approx(1.0).epsilon(1e-12));
    const auto t = client.embed({"left lung"}, EmbedMode::kTokens);
    REQUIRE(t.matrices.size() == 1);
    CHECK(t.matrices[0].rows() == 2);
    CHECK(t.matrices[0].normalized());
    CHECK(client.session_dim() == 6u);
    CHECK(client.health().models == std::vector<std::string>{"mock"});
  }
  SUBCASE("transient failures are retried") {
    svc.failures_left = 2;
    const auto b = client.embed({"x"}, EmbedMode::kSentence);
    CHECK(b.vectors.size() == 1);
    CHECK(svc.requests == 3);
  }
  SUBCASE("persistent failures become a connectivity error") {
    svc.failures_left = 100;
    CHECK_THROWS_AS(client.embed({"x"}, EmbedMode::kSentence), ConnectivityError);
    CHECK(svc.requests == 3);
  }
  SUBCASE("version mismatch is a protocol error") {
    svc.version = 2;
    CHECK_THROWS_AS(client.embed({"x"}, EmbedMode::kSentence), ProtocolError);
  }
  SUBCASE("dimension change within a session is rejected") {
    client.embed({"x"}, EmbedMode::kSentence);
    svc.dim = 7;
    CHECK_THROWS_AS(client.embed({"x"}, EmbedMode::kSentence), ProtocolError);
  }
  SUBCASE("remote embedder matches the mock schema") {
    RemoteEmbedder remote(svc.endpoint(), fast());
    const auto e = remote.embed({"left lung opacity", "yes"});
    REQUIRE(e.size() == 2);
    CHECK(e[0].tokens.rows() == 3);
    CHECK(e[0].sentence.dim() == 6);
    CHECK(e[1].tokens.rows() == 1);
  }
}

TEST_CASE("service down names the endpoint") {
  // Nothing listens on port 1.
  const std::string endpoint = "http://127.0.0.1:1";
  EmbedClient client(endpoint, fast());
  try {
    client.embed({"x"}, EmbedMode::kSentence);
    FAIL("expected a connectivity error");
  } catch (const ConnectivityError& e) {
    CHECK(e.endpoint() == endpoint);
    CHECK(std::string(e.what()).find(endpoint) != std::string::npos);
  }
}
