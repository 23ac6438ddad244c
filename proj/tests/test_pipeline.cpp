#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "traitscan/cohort.hpp"
#include "traitscan/csv.hpp"
#include "traitscan/manifest.hpp"
#include "traitscan/pipeline.hpp"

using namespace traitscan;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

RunConfig small_config(const fs::path& out, int workers) {
  RunConfig c;
  c.out_dir = out.string();
  c.workers = workers;
  c.synth["n_per_group"] = "50";
  c.synth["tweets_min"] = "30";
  c.synth["tweets_max"] = "50";
  c.train.n_trees = 40;
  c.train.k_folds = 3;
  c.curve_ks = "1,5,all";
  return c;
}

void run(const fs::path& out, int workers) {
  fs::remove_all(out);
  auto cfg = small_config(out, workers);
  {
    pipeline::Context gen(cfg);
    pipeline::synth_generate(gen, out / "corpus");
  }
  cfg.corpus_dir = (out / "corpus").string();
  pipeline::Context ctx(cfg);
  pipeline::run_all(ctx);
}

}  // namespace

TEST_CASE("pipeline writes every artifact and identical bytes for any worker count") {
  const auto base = fs::temp_directory_path() / "traitscan_pipeline_test";
  run(base / "w1", 1);
  run(base / "w3", 3);
  for (const char* f : {"validation.json", "cohort.json", "grid.csv", "hashtags.csv", "control.json", "features.csv",
                        "features.meta.json", "model.json", "split.json", "metrics.json", "cv.json",
                        "importance.csv", "contrasts.csv", "curve.csv", "edges.csv", "nodes.csv",
                        "edges_control.csv", "nodes_control.csv"}) {
    REQUIRE_MESSAGE(fs::exists(base / "w1" / f), f);
    CHECK_MESSAGE(slurp(base / "w1" / f) == slurp(base / "w3" / f), f);
  }

  SUBCASE("manifest hashes match the files") {
    const auto m = Manifest::load(base / "w1" / "manifest.json");
    for (const auto& [stage, rec] : m.stages) {
      CHECK(m.configs.count(rec.config_sha256) == 1);
      CHECK(rec.rng_seed == 42);
      for (const auto& [file, hash] : rec.outputs) CHECK_MESSAGE(sha256_file(base / "w1" / file) == hash, file);
    }
    CHECK(m.stages.count("curve") == 1);
    CHECK(slurp(base / "w1" / "manifest.json") == slurp(base / "w3" / "manifest.json"));
  }

  SUBCASE("grid.csv equals the module's grid") {
    pipeline::Context ctx(small_config(base / "w1", 1));
    const Corpus c = load_corpus(CorpusPaths::in_directory(base / "w1" / "corpus")).corpus;
    const auto grid = cohort::threshold_grid(cohort::filter_cov(cohort::filter_follows_seed(cohort::build_like_matrix(c), c)));
    std::ifstream f(base / "w1" / "grid.csv");
    const auto rows = csv::read_all(f);
    REQUIRE(rows.size() == 1 + grid.counts.size());
    for (std::size_t li = 0; li < grid.l_axis.size(); ++li)
      for (std::size_t si = 0; si < grid.s_axis.size(); ++si) {
        const auto& row = rows[1 + li * grid.s_axis.size() + si];
        CHECK(row[0] == std::to_string(grid.l_axis[li]));
        CHECK(row[1] == std::to_string(grid.s_axis[si]));
        CHECK(row[2] == std::to_string(grid.at(li, si)));
      }
  }

  SUBCASE("rerunning a stage reproduces its hashes") {
    const auto before = Manifest::load(base / "w1" / "manifest.json").stages.at("evaluate").outputs;
    auto cfg = small_config(base / "w1", 2);
    cfg.corpus_dir = (base / "w1" / "corpus").string();
    pipeline::Context ctx(cfg);
    pipeline::evaluate(ctx);
    CHECK(Manifest::load(base / "w1" / "manifest.json").stages.at("evaluate").outputs == before);
  }

  SUBCASE("curve at every feature equals the holdout F1") {
    const auto metrics = nlohmann::json::parse(slurp(base / "w1" / "metrics.json"));
    std::ifstream f(base / "w1" / "curve.csv");
    const auto rows = csv::read_all(f);
    CHECK(csv::parse_double(rows.back()[1]) == metrics["holdout"]["f1"].get<double>());
  }
  fs::remove_all(base);
}

TEST_CASE("a stage without its upstream artifact names what is missing") {
  const auto out = fs::temp_directory_path() / "traitscan_pipeline_missing";
  fs::remove_all(out);
  RunConfig cfg;
  cfg.out_dir = out.string();
  pipeline::Context ctx(cfg);
  try {
    pipeline::train(ctx);
    FAIL("expected MissingArtifact");
  } catch (const pipeline::MissingArtifact& e) {
    const std::string msg = e.what();
    CHECK(msg.find("'train'") != std::string::npos);
    CHECK(msg.find("features extract") != std::string::npos);
  }
  CHECK_THROWS_AS(pipeline::cohort_control(ctx), pipeline::MissingArtifact);
  CHECK_THROWS_AS(pipeline::curve(ctx), pipeline::MissingArtifact);
  CHECK_THROWS_AS(pipeline::cohort_build(ctx), Error);  // corpus.dir unset
  fs::remove_all(out);
}
