// Copyright 2026 The traitscan Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "traitscan/corpus.hpp"

namespace traitscan::topics {

/// Undirected hashtag co-occurrence graph. Edge keys are ordered (a < b).
struct CoocGraph {
  std::map<std::string, std::uint64_t> weighted_degree;  // every node, possibly 0
  std::map<std::pair<std::string, std::string>, std::uint64_t> edges;

  std::uint64_t edge_weight(const std::string& a, const std::string& b) const;
  std::uint64_t total_edge_weight() const;
  std::uint64_t total_weighted_degree() const;

  bool operator==(const CoocGraph&) const = default;
};

/// Adds one tweet's tags: duplicates collapse, every distinct pair gains 1.
void add_tweet(CoocGraph& g, const std::vector<std::string>& hashtags);

/// Graph over all tweets authored by cohort members.
CoocGraph cooccurrence_graph(const Corpus& corpus, const std::set<std::string>& cohort, int workers = 1);

/// Nodes by descending weighted degree, ties by tag.
std::vector<std::string> ranked_nodes(const CoocGraph& g);

/// Subgraph induced by the k top-ranked nodes; degrees are recomputed within
/// it. Throws Error when k < 1.
CoocGraph top_k_subgraph(const CoocGraph& g, std::size_t k);

/// edges: tag_a,tag_b,weight. nodes: tag,weighted_degree (ranked order).
void write_edges_csv(const CoocGraph& g, const std::filesystem::path& path);
void write_nodes_csv(const CoocGraph& g, const std::filesystem::path& path);

}  // namespace traitscan::topics
