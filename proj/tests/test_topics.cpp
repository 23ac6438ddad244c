#include <doctest.h>

#include <algorithm>

#include "support/temp_dir.hpp"
#include "traitscan/error.hpp"
#include "traitscan/rng.hpp"
#include "traitscan/topics.hpp"

using namespace traitscan;
using namespace traitscan::topics;

namespace {

using TagSets = std::vector<std::vector<std::string>>;

CoocGraph graph_of(const TagSets& tweets) {
  CoocGraph g;
  for (const auto& t : tweets) add_tweet(g, t);
  return g;
}

TagSets random_tweets(Rng& rng, std::size_t n, std::size_t vocab) {
  TagSets out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> tags;
    for (auto k = rng.index(5); k > 0; --k) tags.push_back("t" + std::to_string(rng.index(vocab)));
    out.push_back(tags);
  }
  return out;
}

// Brute force: weighted degree straight from the per-tweet tag lists.
std::map<std::string, std::uint64_t> brute_degrees(const TagSets& tweets) {
  std::map<std::string, std::uint64_t> deg;
  for (const auto& raw : tweets) {
    std::set<std::string> tags(raw.begin(), raw.end());
    for (const auto& t : tags) deg[t] += tags.size() - 1;
  }
  return deg;
}

std::vector<std::string> brute_top(const std::map<std::string, std::uint64_t>& deg, std::size_t k) {
  std::vector<std::string> tags;
  for (const auto& [t, d] : deg) tags.push_back(t);
  // Selection by repeated scan for the best remaining node.
  std::vector<std::string> out;
  while (out.size() < k && !tags.empty()) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < tags.size(); ++i) {
      const auto di = deg.at(tags[i]), db = deg.at(tags[best]);
      if (di > db || (di == db && tags[i] < tags[best])) best = i;
    }
    out.push_back(tags[best]);
    tags.erase(tags.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return out;
}

}  // namespace

TEST_CASE("co-occurrence examples") {
  const auto g = graph_of({{"a", "b", "c"}});
  CHECK(g.edges.size() == 3);
  CHECK(g.edge_weight("a", "b") == 1);
  CHECK(g.edge_weight("c", "a") == 1);
  CHECK(graph_of({{"a", "b"}, {"b", "a"}}).edge_weight("a", "b") == 2);
  const auto lonely = graph_of({{"a"}, {}, {"b", "b"}});
  CHECK(lonely.edges.empty());
  CHECK(lonely.weighted_degree.size() == 2);
}

TEST_CASE("star center has the largest weighted degree") {
  TagSets tweets;
  for (int i = 0; i < 6; ++i) tweets.push_back({"hub", "leaf" + std::to_string(i)});
  const auto g = graph_of(tweets);
  CHECK(ranked_nodes(g).front() == "hub");
  CHECK(g.weighted_degree.at("hub") == 6);
  const auto top = top_k_subgraph(g, 1);
  CHECK(top.weighted_degree.size() == 1);
  CHECK(top.edges.empty());
  CHECK(top_k_subgraph(g, 100) == g);
  CHECK_THROWS_AS(top_k_subgraph(g, 0), Error);
}

TEST_CASE("random graphs: degree sum and brute-force ranking") {
  Rng rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const auto tweets = random_tweets(rng, 30 + rng.index(100), 5 + rng.index(30));
    const auto g = graph_of(tweets);
    CHECK(g.total_weighted_degree() == 2 * g.total_edge_weight());
    CHECK(g.weighted_degree == brute_degrees(tweets));
    for (const auto& [k, w] : g.edges) {
      CHECK(k.first < k.second);
      CHECK(w >= 1);
    }
    const std::size_t k = 1 + rng.index(12);
    const auto want = brute_top(brute_degrees(tweets), k);
    auto got = ranked_nodes(g);
    got.resize(std::min(got.size(), k));
    CHECK(got == want);
    const auto sub = top_k_subgraph(g, k);
    CHECK(sub.total_weighted_degree() == 2 * sub.total_edge_weight());
    CHECK(sub.weighted_degree.size() == want.size());

    auto shuffled = tweets;
    rng.shuffle(std::span<std::vector<std::string>>(shuffled));
    CHECK(graph_of(shuffled) == g);
  }
}

TEST_CASE("cohort graph and csv output") {
  Corpus c;
  TweetRecord t;
  t.author_id = "u1";
  t.tweet_id = "1";
  t.hashtags = {"x", "y"};
  c.timelines["u1"].push_back(t);
  t.author_id = "u2";
  t.tweet_id = "2";
  t.hashtags = {"y", "z"};
  c.timelines["u2"].push_back(t);
  const auto g = cooccurrence_graph(c, {"u1", "u2"}, 4);
  CHECK(g.edges.size() == 2);
  CHECK(g.weighted_degree.at("y") == 2);
  CHECK(cooccurrence_graph(c, {"u1"}).edges.size() == 1);

  TempDir dir;
  write_edges_csv(g, dir / "edges.csv");
  write_nodes_csv(g, dir / "nodes.csv");
  CHECK(read_file(dir / "edges.csv") == "tag_a,tag_b,weight\nx,y,1\ny,z,1\n");
  CHECK(read_file(dir / "nodes.csv") == "tag,weighted_degree\ny,2\nx,1\nz,1\n");
}
