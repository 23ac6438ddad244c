// Copyright 2026 The traitscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "traitscan/topics.hpp"

#include <algorithm>
#include <fstream>

#include "traitscan/csv.hpp"
#include "traitscan/error.hpp"
#include "traitscan/parallel.hpp"

namespace traitscan::topics {

std::uint64_t CoocGraph::edge_weight(const std::string& a, const std::string& b) const {
  const auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  const auto it = edges.find(key);
  return it == edges.end() ? 0 : it->second;
}

std::uint64_t CoocGraph::total_edge_weight() const {
  std::uint64_t s = 0;
  for (const auto& [k, w] : edges) s += w;
  return s;
}

std::uint64_t CoocGraph::total_weighted_degree() const {
  std::uint64_t s = 0;
  for (const auto& [k, d] : weighted_degree) s += d;
  return s;
}

void add_tweet(CoocGraph& g, const std::vector<std::string>& hashtags) {
  std::vector<std::string> tags(hashtags);
  std::sort(tags.begin(), tags.end());
  tags.erase(std::unique(tags.begin(), tags.end()), tags.end());
  for (const auto& t : tags) g.weighted_degree.try_emplace(t, 0);
  for (std::size_t i = 0; i < tags.size(); ++i)
    for (std::size_t j = i + 1; j < tags.size(); ++j) {
      ++g.edges[{tags[i], tags[j]}];
      ++g.weighted_degree[tags[i]];
      ++g.weighted_degree[tags[j]];
    }
}

CoocGraph cooccurrence_graph(const Corpus& corpus, const std::set<std::string>& cohort, int workers) {
  const std::vector<std::string> users(cohort.begin(), cohort.end());
  std::vector<CoocGraph> partial(users.size());
  parallel_for(users.size(), workers, [&](std::size_t i) {
    for (const auto& t : corpus.timeline(users[i])) add_tweet(partial[i], t.hashtags);
  });
  // Integer weights: merge order cannot change the result.
  CoocGraph g;
  for (const auto& p : partial) {
    for (const auto& [tag, d] : p.weighted_degree) g.weighted_degree[tag] += d;
    for (const auto& [key, w] : p.edges) g.edges[key] += w;
  }
  return g;
}

std::vector<std::string> ranked_nodes(const CoocGraph& g) {
  std::vector<std::pair<std::string, std::uint64_t>> nodes(g.weighted_degree.begin(), g.weighted_degree.end());
  std::stable_sort(nodes.begin(), nodes.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> out;
  out.reserve(nodes.size());
  for (auto& [tag, d] : nodes) out.push_back(std::move(tag));
  return out;
}

CoocGraph top_k_subgraph(const CoocGraph& g, std::size_t k) {
  if (k < 1) throw Error("top_k_subgraph: k must be >= 1");
  auto ranked = ranked_nodes(g);
  if (ranked.size() > k) ranked.resize(k);
  const std::set<std::string> keep(ranked.begin(), ranked.end());
  CoocGraph sub;
  for (const auto& t : keep) sub.weighted_degree[t] = 0;
  for (const auto& [key, w] : g.edges) {
    if (!keep.count(key.first) || !keep.count(key.second)) continue;
    sub.edges[key] = w;
    sub.weighted_degree[key.first] += w;
    sub.weighted_degree[key.second] += w;
  }
  return sub;
}

void write_edges_csv(const CoocGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  csv::write_row(out, {"tag_a", "tag_b", "weight"});
  for (const auto& [key, w] : g.edges) csv::write_row(out, {key.first, key.second, std::to_string(w)});
}

void write_nodes_csv(const CoocGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  csv::write_row(out, {"tag", "weighted_degree"});
  for (const auto& tag : ranked_nodes(g))
    csv::write_row(out, {tag, std::to_string(g.weighted_degree.at(tag))});
}

}  // namespace traitscan::topics
