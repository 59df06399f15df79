#include <gtest/gtest.h>

#include <thread>

#include <httplib.h>

#include "nudge/http_server.hpp"
#include "test_support.hpp"

using namespace nudge;
using nlohmann::json;

TEST(HttpServer, LoopbackSignupAndRecommend) {
  auto corpus = load_corpus(test::data_dir() / "fixture_corpus.jsonl");
  auto assoc = load_associations(test::data_dir() / "fixture_associations.csv", 30);
  ServiceOptions o;
  o.admin_token = "admin";
  Service service(build_catalog(std::move(corpus.recipes), std::move(assoc)), o);
  HttpServer server(service);
  const int port = server.bind("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  std::thread t([&] { server.listen(); });

  httplib::Client client("127.0.0.1", port);
  json body = {{"health",
                {{"age_years", 40}, {"weight_kg", 80}, {"height_m", 1.65}, {"gender", "female"},
                 {"activity", "intensely_active"}}},
               {"liked", test::features("l", 20)},
               {"disliked", test::features("d", 20)},
               {"consent", true}};
  auto up = client.Post("/v1/signup", body.dump(), "application/json");
  ASSERT_TRUE(up);
  EXPECT_EQ(up->status, 201);
  auto signed_up = json::parse(up->body);
  const std::string token = signed_up["token"];
  EXPECT_EQ(token.size(), 32u);

  httplib::Headers auth = {{"Authorization", "Bearer " + token}};
  auto seq = client.Get("/v1/sequence", auth);
  ASSERT_TRUE(seq);
  EXPECT_EQ(seq->status, 200);

  auto rec = client.Post("/v1/recommend", auth, json({{"scenario", "Aqua"}}).dump(), "application/json");
  ASSERT_TRUE(rec);
  EXPECT_EQ(rec->status, 200);
  EXPECT_EQ(json::parse(rec->body)["items"].size(), 7u);

  auto anon = client.Get("/v1/sequence");
  ASSERT_TRUE(anon);
  EXPECT_EQ(anon->status, 401);
  auto garbage = client.Post("/v1/event", auth, "{not json", "application/json");
  ASSERT_TRUE(garbage);
  EXPECT_EQ(garbage->status, 400);

  server.stop();
  t.join();
  EXPECT_FALSE(server.running());
}
